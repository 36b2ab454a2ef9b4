use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, VertexSet};
use crate::config::JumbledParams;

/// Outcome of sampled falsification of the discrepancy inequality.
///
/// A clean report only means no sampled pair violated the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscrepancyReport {
    pub trials: usize,
    /// Largest `|e(A,B) - p|A||B|| / sqrt(|A||B|)` seen.
    pub max_ratio: f64,
    /// `(|A|, |B|)` attaining `max_ratio`.
    pub worst_sizes: (usize, usize),
    /// Samples with `ratio ≥ λ`.
    pub violations: usize,
    /// Samples large enough for the `e(A,B) ≥ p|A||B|/2` lower bound to apply.
    pub lower_bound_checked: usize,
    pub lower_bound_violations: usize,
}

/// Samples `trials` pairs of random sets with log-uniform sizes.
pub fn check_discrepancy(g: &Graph, params: &JumbledParams, trials: usize, seed: u64) -> DiscrepancyReport {
    let n = g.n();
    let p = params.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DiscrepancyReport {
        trials,
        max_ratio: 0.0,
        worst_sizes: (0, 0),
        violations: 0,
        lower_bound_checked: 0,
        lower_bound_violations: 0,
    };
    if n == 0 {
        return report;
    }
    let remark_threshold = 4.0 * params.lambda * params.lambda / (p * p);
    let ln_n = (n as f64).ln();
    for _ in 0..trials {
        let pick = |rng: &mut ChaCha8Rng| {
            let size = ((rng.gen_range(0.0..=ln_n)).exp().round() as usize).clamp(1, n);
            VertexSet::from_ids(n, sample(rng, n, size))
        };
        let a = pick(&mut rng);
        let b = pick(&mut rng);
        let (sa, sb) = (a.len(), b.len());
        let prod = (sa * sb) as f64;
        let e: usize = a.iter().map(|v| g.deg_into(v, &b)).sum();
        let ratio = (e as f64 - p * prod).abs() / prod.sqrt();
        if ratio > report.max_ratio {
            report.max_ratio = ratio;
            report.worst_sizes = (sa, sb);
        }
        if ratio >= params.lambda {
            report.violations += 1;
        }
        if p > 0.0 && prod >= remark_threshold {
            report.lower_bound_checked += 1;
            if (e as f64) < p * prod / 2.0 {
                report.lower_bound_violations += 1;
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    #[test]
    fn edgeless_has_zero_discrepancy() {
        let g = Graph::edgeless(50);
        let params = JumbledParams::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(check_discrepancy(&g, &params, 200, 1).max_ratio, 0.0);
    }

    #[test]
    fn complete_graph_deviation_at_most_one() {
        // For K_n with p = 1, e(A,B) = |A||B| - |A∩B|, so the ratio depends
        // only on (|A|, |B|, |A∩B|); enumerate all such triples.
        let n: usize = 20;
        let mut oracle = 0.0f64;
        for a in 1..=n {
            for b in 1..=n {
                let lo = (a + b).saturating_sub(n);
                for c in lo..=a.min(b) {
                    oracle = oracle.max(c as f64 / ((a * b) as f64).sqrt());
                }
            }
        }
        assert!((oracle - 1.0).abs() < 1e-12);
        let g = Graph::complete(n);
        let params = JumbledParams::new(1.0, 1.0 + 1e-9, 0.0, 0.0);
        let r = check_discrepancy(&g, &params, 2000, 3);
        assert!(r.max_ratio <= oracle + 1e-12);
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn gnp_within_w_h_p_regime_and_reseed_agrees() {
        let (n, p) = (2000, 0.1);
        let g = sample_gnp(n, p, 5);
        let bound = 3.0 * (p * n as f64).sqrt();
        let params = JumbledParams::new(p, bound, 0.0, 0.0);
        let a = check_discrepancy(&g, &params, 10_000, 5);
        let b = check_discrepancy(&g, &params, 10_000, 99);
        assert!(a.max_ratio <= bound, "{a:?}");
        assert!(b.max_ratio <= bound, "{b:?}");
        assert!(a.max_ratio <= 2.0 * b.max_ratio && b.max_ratio <= 2.0 * a.max_ratio);
        assert_eq!(a.lower_bound_violations, 0);
    }
}
