//! Run modes, pipeline constants and the (p, λ, ε, δ) parameter tuple.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Enforce every size precondition with the asymptotic constants; refuse
    /// rather than attempt.
    #[default]
    Strict,
    /// Same algorithms with desk-scale thresholds; failures are reported.
    Practical,
}

impl Mode {
    pub fn is_strict(self) -> bool {
        self == Mode::Strict
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Mode::Strict),
            "practical" => Ok(Mode::Practical),
            other => Err(format!("unknown mode {other:?} (expected strict or practical)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Practical => "practical",
        })
    }
}

/// Page count `K` of the book cycles and template degree cap.
pub const STRICT_PAGES: usize = 68_042;
/// Lower bound on the template prime.
pub const STRICT_TEMPLATE_PRIME_MIN: u64 = 68_000;
/// Smallest admissible prime `p ≡ 1 (mod 4)` above the bound.
pub const STRICT_TEMPLATE_PRIME: u64 = 68_041;
/// `L ≥ 8000 K`.
pub const STRICT_SHORT_MAX_FACTOR: usize = 8000;
/// Chain-count floor in the chain rebalancing step.
pub const STRICT_MIN_CHAINS: usize = 2000;

#[derive(Clone, Debug, PartialEq)]
pub struct Constants {
    /// `K`.
    pub pages: usize,
    /// `p_R`, prime and `≡ 1 (mod 4)`.
    pub template_prime: u64,
    /// `L`: cycles of length `≤ L` are short.
    pub short_max: usize,
    /// `γ` in `m = γ n` for the long-cycle absorber.
    pub long_gamma: f64,
    /// `α` in `m = α n` for the short-cycle absorber; `None` means `α(ℓ)`.
    pub short_alpha: Option<f64>,
    /// Fraction of `δ p |U_i|` each part keeps in a degree-preserving split.
    pub partition_factor: f64,
    /// `m'`: flexible vertices spent on closing long cycles beyond the `4t`.
    pub long_slack: usize,
}

impl Constants {
    pub fn strict() -> Self {
        Constants {
            pages: STRICT_PAGES,
            template_prime: STRICT_TEMPLATE_PRIME,
            short_max: STRICT_SHORT_MAX_FACTOR * STRICT_PAGES,
            long_gamma: 1.0 / (600.0 * (STRICT_PAGES as f64 + 2.0)),
            short_alpha: None,
            partition_factor: 0.5,
            long_slack: 0,
        }
    }

    pub fn practical() -> Self {
        Constants {
            pages: 14,
            template_prime: 13,
            short_max: 12,
            long_gamma: 0.002,
            short_alpha: Some(0.002),
            partition_factor: 0.5,
            long_slack: 8,
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Strict => Self::strict(),
            Mode::Practical => Self::practical(),
        }
    }

    /// `α(ℓ) = 1/(60 ℓ (K+2))`.
    pub fn alpha_bound(&self, ell: usize) -> f64 {
        1.0 / (60.0 * ell as f64 * (self.pages as f64 + 2.0))
    }

    /// `L₀`: smallest power of two above `L`.
    pub fn short_max_pow2(&self) -> usize {
        (self.short_max + 1).next_power_of_two()
    }

    /// Names of constants that differ from the strict defaults, with values.
    pub fn deviations(&self) -> Vec<(&'static str, String)> {
        let s = Self::strict();
        let mut out = Vec::new();
        if self.pages != s.pages {
            out.push(("K", self.pages.to_string()));
        }
        if self.template_prime != s.template_prime {
            out.push(("p_R", self.template_prime.to_string()));
        }
        if self.short_max != s.short_max {
            out.push(("L", self.short_max.to_string()));
        }
        if self.long_gamma != s.long_gamma {
            out.push(("gamma", self.long_gamma.to_string()));
        }
        if self.short_alpha != s.short_alpha {
            out.push(("alpha", self.short_alpha.map_or_else(|| "alpha(ell)".to_string(), |a| a.to_string())));
        }
        if self.partition_factor != s.partition_factor {
            out.push(("partition_factor", self.partition_factor.to_string()));
        }
        if self.long_slack != s.long_slack {
            out.push(("m_prime", self.long_slack.to_string()));
        }
        out
    }

    /// Strict mode forbids constants weaker than the asymptotic ones.
    pub fn check_strict(&self) -> Result<(), GateError> {
        if self.pages < STRICT_PAGES {
            return Err(GateError::Pages { pages: self.pages });
        }
        if self.template_prime < STRICT_TEMPLATE_PRIME_MIN {
            return Err(GateError::TemplatePrime {
                p_r: self.template_prime,
            });
        }
        if self.short_max < STRICT_SHORT_MAX_FACTOR * self.pages {
            return Err(GateError::ShortMax {
                l: self.short_max,
                pages: self.pages,
            });
        }
        let gamma = 1.0 / (600.0 * (self.pages as f64 + 2.0));
        if self.long_gamma > gamma {
            return Err(GateError::Gamma {
                gamma: self.long_gamma,
                bound: gamma,
            });
        }
        Ok(())
    }
}

/// A strict-mode precondition naming the asymptotic constant it enforces.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum GateError {
    #[error("alpha = {alpha} exceeds alpha({ell}) = 1/(60*ell*(K+2)) = {bound:e} with K = {pages}")]
    Alpha {
        alpha: f64,
        ell: usize,
        pages: usize,
        bound: f64,
    },
    #[error("template prime p_R = {p_r} is below the strict bound p_R >= 68000")]
    TemplatePrime { p_r: u64 },
    #[error("page count K = {pages} is below the strict value K = 68042")]
    Pages { pages: usize },
    #[error("L = {l} is below the strict bound L >= 8000*K = {}", 8000 * pages)]
    ShortMax { l: usize, pages: usize },
    #[error("gamma = {gamma} exceeds 1/(600*(K+2)) = {bound:e}")]
    Gamma { gamma: f64, bound: f64 },
    #[error("chain mass t(ell+1) = {mass} is below 400*lambda/p^2 = {bound}")]
    ChainMassLow { mass: usize, bound: f64 },
    #[error("chain mass t(ell+1) = {mass} exceeds n/24 = {bound}")]
    ChainMassHigh { mass: usize, bound: f64 },
    #[error("chain count t = {t} is below the strict floor t >= 2000")]
    ChainCount { t: usize },
    #[error("chain length ell = {ell} must be even")]
    ChainParity { ell: usize },
    #[error("{what}: need {need}, have {have}")]
    Size {
        what: &'static str,
        need: f64,
        have: f64,
    },
}

/// `(p, λ, ε, δ)` with `λ ≤ ε p² n` and `δ(G) ≥ δ p n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumbledParams {
    pub p: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("density p = {0} outside (0, 1]")]
    Density(f64),
    #[error("lambda = {lambda} exceeds epsilon*p^2*n = {bound}")]
    Lambda { lambda: f64, bound: f64 },
    #[error("p = {p} is below (epsilon^2 n)^(-1/3)/4 = {bound}")]
    Sparse { p: f64, bound: f64 },
    #[error("minimum degree {min_degree} is below delta*p*n = {bound}")]
    MinDegree { min_degree: usize, bound: f64 },
}

impl JumbledParams {
    pub fn new(p: f64, lambda: f64, epsilon: f64, delta: f64) -> Self {
        JumbledParams {
            p,
            lambda,
            epsilon,
            delta,
        }
    }

    /// Takes `ε = λ/(p² n)` and `δ = δ(G)/(p n)` from the graph itself.
    pub fn for_graph(g: &Graph, p: f64, lambda: f64) -> Result<Self, ParamsError> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(ParamsError::Density(p));
        }
        let n = g.n() as f64;
        Ok(JumbledParams {
            p,
            lambda,
            epsilon: lambda / (p * p * n),
            delta: g.min_degree() as f64 / (p * n),
        })
    }

    /// Checks the defining inequalities against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), ParamsError> {
        let n = g.n() as f64;
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(ParamsError::Density(self.p));
        }
        let bound = self.epsilon * self.p * self.p * n;
        if self.lambda > bound * (1.0 + 1e-12) {
            return Err(ParamsError::Lambda {
                lambda: self.lambda,
                bound,
            });
        }
        if self.epsilon > 0.0 {
            let sparse = (self.epsilon * self.epsilon * n).powf(-1.0 / 3.0) / 4.0;
            if self.p < sparse {
                return Err(ParamsError::Sparse { p: self.p, bound: sparse });
            }
        }
        let need = self.delta * self.p * n;
        if (g.min_degree() as f64) < need * (1.0 - 1e-12) {
            return Err(ParamsError::MinDegree {
                min_degree: g.min_degree(),
                bound: need,
            });
        }
        Ok(())
    }
}
