//! Sparse bipartite templates with a flexible set, and their constructions.

mod lps;
mod matching;
mod primes;

pub use lps::{build_lps_graph, nontrivial_abs, quaternion_generators, RamanujanGraph};
pub use matching::{bipartite_matching, hopcroft_karp, BipartiteMatching};
pub use primes::{
    find_template_prime, find_template_prime_from, is_prime, legendre, lps_order, practical_template_prime, PrimeChoice,
};

use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{GateError, Mode, STRICT_TEMPLATE_PRIME_MIN};
use crate::graph::VertexSet;

/// Degree threshold `d/10` used when trimming the Ramanujan graph.
pub const TRIM_DEGREE_DIVISOR: f64 = 10.0;
/// At most `34000 m / d` vertices may be trimmed from either side.
pub const TRIM_BUDGET_FACTOR: f64 = 34_000.0;
/// Smallest degree target accepted by [`build_random_template`].
pub const MIN_RANDOM_DEGREE: usize = 3;
/// Largest flexibility verified over every subset.
pub const EXHAUSTIVE_MAX_M: usize = 6;

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no prime q = 1 (mod 4p) found between {lower} and the cap {cap}")]
    PrimeNotFound { lower: f64, cap: u64 },
    #[error("smallest admissible prime {q} lies above 1.01*(21m)^(1/3) = {upper:.3}")]
    PrimeOutOfInterval { q: u64, upper: f64 },
    #[error("trimming removed {deleted} vertices, above the 34000m/d bound {bound:.1}")]
    TrimCascade { deleted: usize, bound: f64 },
    #[error("ran out of vertices while {stage}")]
    Exhausted { stage: &'static str },
    #[error("deleting flexible set {jbar:?} leaves no perfect matching")]
    Flexibility { jbar: Vec<usize> },
    #[error("degree target {degree_target} is below {min}: I cannot reach both halves of J")]
    DegreeTooLow { degree_target: usize, min: usize },
    #[error("no flexible candidate after {attempts} attempts")]
    RetriesExhausted { attempts: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// How flexibility was established.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    /// All `C(2m, m)` deletions checked.
    Exhaustive { subsets: u64 },
    /// Random and targeted deletions plus a small-set Hall audit.
    Sampled { random: usize, targeted: usize },
    Unverified,
}

/// Where a template came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    Lps {
        p_r: u64,
        q: u64,
        order: usize,
        trimmed: (usize, usize),
    },
    Random {
        seed: u64,
        attempts: usize,
    },
    Loaded,
}

/// Bipartite graph on `I = [0, 3m)` and `J = [0, 4m)` with flexible set
/// `J₁ = [0, 2m)`: deleting any `m` vertices of `J₁` leaves a perfect matching.
#[derive(Clone, Debug, PartialEq)]
pub struct Template {
    m: usize,
    adj: Vec<Vec<usize>>,
    max_degree: usize,
    pub verification: Verification,
    pub origin: Origin,
}

impl Template {
    /// Builds from `(i, j)` edges; ids must be in range and distinct.
    pub fn from_edges(m: usize, edges: &[(usize, usize)]) -> Result<Template, TemplateError> {
        let mut adj = vec![Vec::new(); 3 * m];
        for &(i, j) in edges {
            if i >= 3 * m || j >= 4 * m {
                return Err(TemplateError::Parameter(format!("edge ({i}, {j}) outside [0,{})x[0,{})", 3 * m, 4 * m)));
            }
            adj[i].push(j);
        }
        for (i, row) in adj.iter_mut().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(TemplateError::Parameter(format!("duplicate edge at {i}")));
            }
        }
        let mut jdeg = vec![0usize; 4 * m];
        for row in &adj {
            for &j in row {
                jdeg[j] += 1;
            }
        }
        let max_degree = adj.iter().map(Vec::len).chain(jdeg).max().unwrap_or(0);
        Ok(Template {
            m,
            adj,
            max_degree,
            verification: Verification::Unverified,
            origin: Origin::Loaded,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `J`-neighbours of `i ∈ I`, ascending.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree_i(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Edges `(i, j)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Perfect matching of `I` into `J \ J̄`, as `mate[i] = j`.
    pub fn matching_without(&self, jbar: &[usize]) -> Option<Vec<usize>> {
        let mut allowed = vec![true; 4 * self.m];
        for &j in jbar {
            allowed[j] = false;
        }
        hopcroft_karp(&self.adj, 4 * self.m, Some(&allowed))
            .into_iter()
            .collect::<Option<Vec<usize>>>()
    }

    /// Checks all `C(2m, m)` deletions.
    pub fn verify_exhaustive(&self) -> Result<u64, TemplateError> {
        let m = self.m;
        if m == 0 {
            return Ok(1);
        }
        assert!(2 * m <= 62, "exhaustive check only for small m");
        let mut mask: u64 = (1 << m) - 1;
        let limit: u64 = 1 << (2 * m);
        let mut count = 0;
        while mask < limit {
            let jbar: Vec<usize> = (0..2 * m).filter(|&j| mask >> j & 1 == 1).collect();
            if self.matching_without(&jbar).is_none() {
                return Err(TemplateError::Flexibility { jbar });
            }
            count += 1;
            // next subset of the same size
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
        Ok(count)
    }

    /// Random deletions, one targeted deletion per `i ∈ I` (its flexible
    /// neighbours first), and the Hall condition on sets of size at most two.
    pub fn verify_sampled(&self, trials: usize, seed: u64) -> Result<(usize, usize), TemplateError> {
        let m = self.m;
        self.hall_audit()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let mut jbar: Vec<usize> = sample(&mut rng, 2 * m, m).into_vec();
            jbar.sort_unstable();
            if self.matching_without(&jbar).is_none() {
                return Err(TemplateError::Flexibility { jbar });
            }
        }
        let mut targeted = 0;
        for i in 0..3 * m {
            let jbar = fill_flexible(self.adj[i].iter().copied().filter(|&j| j < 2 * m).collect(), m);
            if self.matching_without(&jbar).is_none() {
                return Err(TemplateError::Flexibility { jbar });
            }
            targeted += 1;
        }
        Ok((trials, targeted))
    }

    /// `|N(X) ∩ J₂| + max(0, |N(X) ∩ J₁| - m) ≥ |X|` for `X ⊆ I`, `|X| ≤ 2`,
    /// plus `|N(Y)| ≥ |Y|` for `Y ⊆ J₂`, `|Y| ≤ 2`.
    fn hall_audit(&self) -> Result<(), TemplateError> {
        let m = self.m;
        let worst = |xs: &[usize]| -> Vec<usize> {
            let flex = xs.iter().flat_map(|&i| self.adj[i].iter().copied()).filter(|&j| j < 2 * m).collect();
            fill_flexible(flex, m)
        };
        let reach = |xs: &[usize]| -> usize {
            let mut all: Vec<usize> = xs.iter().flat_map(|&i| self.adj[i].iter().copied()).collect();
            all.sort_unstable();
            all.dedup();
            let flex = all.iter().filter(|&&j| j < 2 * m).count();
            all.len() - flex + flex.saturating_sub(m)
        };
        let mut by_j: Vec<Vec<usize>> = vec![Vec::new(); 4 * m];
        for (i, row) in self.adj.iter().enumerate() {
            for &j in row {
                by_j[j].push(i);
            }
        }
        for i in 0..3 * m {
            if reach(&[i]) < 1 {
                return Err(TemplateError::Flexibility { jbar: worst(&[i]) });
            }
        }
        for list in &by_j {
            for (a, &x) in list.iter().enumerate() {
                for &y in &list[a + 1..] {
                    if reach(&[x, y]) < 2 {
                        return Err(TemplateError::Flexibility { jbar: worst(&[x, y]) });
                    }
                }
            }
        }
        for j in 2 * m..4 * m {
            if by_j[j].is_empty() {
                return Err(TemplateError::Flexibility { jbar: worst(&[]) });
            }
        }
        Ok(())
    }

    /// Runs the verification `mode` asks for and records the outcome.
    pub fn verify(&mut self, mode: VerifyMode, seed: u64) -> Result<(), TemplateError> {
        let exhaustive = match mode {
            VerifyMode::Exhaustive => true,
            VerifyMode::Sampled { .. } => false,
            VerifyMode::Auto { .. } => self.m <= EXHAUSTIVE_MAX_M,
        };
        self.verification = if exhaustive {
            Verification::Exhaustive {
                subsets: self.verify_exhaustive()?,
            }
        } else {
            let trials = match mode {
                VerifyMode::Sampled { trials } | VerifyMode::Auto { trials } => trials,
                VerifyMode::Exhaustive => unreachable!(),
            };
            let (random, targeted) = self.verify_sampled(trials, seed)?;
            Verification::Sampled { random, targeted }
        };
        Ok(())
    }

    /// Text form: header `m Δ`, then one `i j` line per edge.
    pub fn write<W: Write>(&self, mut w: W) -> Result<(), TemplateError> {
        writeln!(w, "{} {}", self.m, self.max_degree)?;
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read<R: BufRead>(r: R) -> Result<Template, TemplateError> {
        let mut header = None;
        let mut edges = Vec::new();
        for (k, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| TemplateError::Parse {
                    line: k + 1,
                    message: "expected non-negative integers".into(),
                })?;
            if nums.len() != 2 {
                return Err(TemplateError::Parse {
                    line: k + 1,
                    message: "expected two integers".into(),
                });
            }
            if header.is_none() {
                header = Some((nums[0], nums[1]));
            } else {
                edges.push((nums[0], nums[1]));
            }
        }
        let (m, delta) = header.ok_or(TemplateError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let t = Template::from_edges(m, &edges)?;
        if t.max_degree != delta {
            return Err(TemplateError::Parse {
                line: 1,
                message: format!("header declares max degree {delta}, edges give {}", t.max_degree),
            });
        }
        Ok(t)
    }
}

/// Dedups `flex`, keeps at most `m`, then pads with the lowest unused ids of `[0, 2m)`.
fn fill_flexible(mut flex: Vec<usize>, m: usize) -> Vec<usize> {
    flex.sort_unstable();
    flex.dedup();
    flex.truncate(m);
    let mut taken = vec![false; 2 * m];
    for &j in &flex {
        taken[j] = true;
    }
    flex.extend((0..2 * m).filter(|&j| !taken[j]).take(m - flex.len()));
    flex.sort_unstable();
    flex
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { trials: usize },
    /// Exhaustive up to [`EXHAUSTIVE_MAX_M`], sampled above.
    Auto { trials: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateOptions {
    pub mode: Mode,
    pub verify: VerifyMode,
    pub seed: u64,
}

impl Default for TemplateOptions {
    fn default() -> Self {
        TemplateOptions {
            mode: Mode::Strict,
            verify: VerifyMode::Auto { trials: 1000 },
            seed: 0,
        }
    }
}

/// Template from the bipartite double cover of an LPS graph.
///
/// Takes the lowest-id `3m` vertices of one side and `2m` of the other,
/// trims vertices with fewer than `d/10` neighbours across until stable,
/// refills with lowest-id qualifying vertices, and takes the `2m` lowest-id
/// qualifying vertices of the remaining side as the flexible set.
pub fn build_template(m: usize, p_r: u64, opts: &TemplateOptions) -> Result<Template, TemplateError> {
    if !is_prime(p_r) || p_r % 4 != 1 {
        return Err(TemplateError::Parameter(format!("p_R = {p_r} must be a prime = 1 (mod 4)")));
    }
    if opts.mode.is_strict() && p_r < STRICT_TEMPLATE_PRIME_MIN {
        return Err(GateError::TemplatePrime { p_r }.into());
    }
    if m == 0 {
        return Err(TemplateError::Parameter("flexibility m must be positive".into()));
    }
    let q = if opts.mode.is_strict() {
        find_template_prime(m, p_r, Mode::Strict)?.q
    } else {
        practical_template_prime(m, p_r)?
    };
    let lps = build_lps_graph(p_r, q)?;
    let cover = lps.graph.bipartite_double_cover();
    let half = lps.n();
    let d = lps.degree as f64;
    let need = (d / TRIM_DEGREE_DIVISOR).ceil() as usize;
    let total = 2 * half;
    let x_side = VertexSet::range(total, 0, half);
    let y_side = VertexSet::range(total, half, total);

    let mut v1 = x_side.lowest(3 * m);
    let mut v2 = y_side.lowest(2 * m);
    if v1.len() < 3 * m || y_side.len() < 4 * m {
        return Err(TemplateError::Exhausted { stage: "choosing the initial sets" });
    }
    let (mut cut1, mut cut2) = (0usize, 0usize);
    loop {
        let low1: Vec<usize> = v1.iter().filter(|&v| cover.deg_into(v, &v2) < need).collect();
        let low2: Vec<usize> = v2.iter().filter(|&v| cover.deg_into(v, &v1) < need).collect();
        if low1.is_empty() && low2.is_empty() {
            break;
        }
        // one vertex at a time, first side first
        if let Some(&v) = low1.first() {
            v1.remove(v);
            cut1 += 1;
        } else {
            v2.remove(low2[0]);
            cut2 += 1;
        }
    }
    let bound = TRIM_BUDGET_FACTOR * m as f64 / d;
    if cut1.max(cut2) as f64 > bound {
        return Err(TemplateError::TrimCascade {
            deleted: cut1.max(cut2),
            bound,
        });
    }
    for v in x_side.difference(&v1).iter() {
        if v1.len() == 3 * m {
            break;
        }
        if cover.deg_into(v, &v2) >= need {
            v1.insert(v);
        }
    }
    for v in y_side.difference(&v2).iter() {
        if v2.len() == 2 * m {
            break;
        }
        if cover.deg_into(v, &v1) >= need {
            v2.insert(v);
        }
    }
    if v1.len() < 3 * m || v2.len() < 2 * m {
        return Err(TemplateError::Exhausted { stage: "refilling the trimmed sets" });
    }
    let j1 = VertexSet::from_ids(
        total,
        y_side
            .difference(&v2)
            .iter()
            .filter(|&v| cover.deg_into(v, &v1) >= need)
            .take(2 * m),
    );
    if j1.len() < 2 * m {
        return Err(TemplateError::Exhausted { stage: "choosing the flexible set" });
    }

    let mut jid = vec![usize::MAX; total];
    for (k, v) in j1.iter().chain(v2.iter()).enumerate() {
        jid[v] = k;
    }
    let edges: Vec<(usize, usize)> = v1
        .iter()
        .enumerate()
        .flat_map(|(i, x)| {
            let jid = &jid;
            cover.neighbors(x).filter(move |&y| jid[y] != usize::MAX).map(move |y| (i, jid[y]))
        })
        .collect();
    let mut t = Template::from_edges(m, &edges)?;
    t.origin = Origin::Lps {
        p_r,
        q,
        order: half,
        trimmed: (cut1, cut2),
    };
    t.verify(opts.verify, opts.seed)?;
    Ok(t)
}

/// Attempts allowed before [`build_random_template`] gives up.
pub const RANDOM_TEMPLATE_RETRIES: usize = 64;

/// Random template in which every `i ∈ I` has degree `degree_target`, split
/// between `J₁` and `J₂`, with the edge ends on each half of `J` spread as
/// evenly as possible; the maximum degree is `degree_target`.
/// Candidates are verified per `verify` and regenerated on failure.
pub fn build_random_template(m: usize, degree_target: usize, seed: u64, verify: VerifyMode) -> Result<Template, TemplateError> {
    if degree_target < MIN_RANDOM_DEGREE {
        return Err(TemplateError::DegreeTooLow {
            degree_target,
            min: MIN_RANDOM_DEGREE,
        });
    }
    if m == 0 {
        return Err(TemplateError::Parameter("flexibility m must be positive".into()));
    }
    if degree_target > 4 * m {
        return Err(TemplateError::Parameter(format!(
            "degree target {degree_target} exceeds |J| = {}",
            4 * m
        )));
    }
    random_template_unchecked(m, degree_target, seed, verify, RANDOM_TEMPLATE_RETRIES)
}

pub(crate) fn random_template_unchecked(
    m: usize,
    degree_target: usize,
    seed: u64,
    verify: VerifyMode,
    retries: usize,
) -> Result<Template, TemplateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=retries {
        let Some(edges) = random_edges(m, degree_target, &mut rng) else {
            continue;
        };
        let mut t = Template::from_edges(m, &edges)?;
        let vseed = rng.gen();
        match t.verify(verify, vseed) {
            Ok(()) => {
                t.origin = Origin::Random { seed, attempts: attempt };
                return Ok(t);
            }
            Err(TemplateError::Flexibility { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TemplateError::RetriesExhausted { attempts: retries })
}

/// Each `i ∈ I` gets `⌊d/2⌋` neighbours in `J₁` and the rest in `J₂`, so no
/// vertex of `I` depends on the flexible side alone.
fn random_edges(m: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let flex = d / 2;
    let mut edges = pair_stubs(3 * m, 0, 2 * m, flex, rng)?;
    edges.extend(pair_stubs(3 * m, 2 * m, 2 * m, d - flex, rng)?);
    edges.sort_unstable();
    Some(edges)
}

/// Pairs `left · d` stubs with the `size` right vertices starting at `offset`,
/// spread evenly and shuffled; repeated pairs are repaired by random swaps.
fn pair_stubs(left: usize, offset: usize, size: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    if d > size {
        return None;
    }
    let total = left * d;
    let mut stubs: Vec<usize> = (0..total).map(|k| k % size).collect();
    stubs.shuffle(rng);
    let mut count = vec![0u32; left * size];
    for k in 0..total {
        count[(k / d) * size + stubs[k]] += 1;
    }
    for k in 0..total {
        let i = k / d;
        if count[i * size + stubs[k]] < 2 {
            continue;
        }
        let mut fixed = false;
        for _ in 0..64 * total {
            let k2 = rng.gen_range(0..total);
            let i2 = k2 / d;
            let (j, j2) = (stubs[k], stubs[k2]);
            if i2 == i || count[i * size + j2] > 0 || count[i2 * size + j] > 0 {
                continue;
            }
            count[i * size + j] -= 1;
            count[i2 * size + j2] -= 1;
            count[i * size + j2] += 1;
            count[i2 * size + j] += 1;
            stubs.swap(k, k2);
            fixed = true;
            break;
        }
        if !fixed {
            return None;
        }
    }
    Some((0..total).map(|k| (k / d, offset + stubs[k])).collect())
}
