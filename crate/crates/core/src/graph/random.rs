use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphBuilder};

/// Binomial random graph `G(n, p)`.
///
/// Pairs are visited in lexicographic order `(u, v)`, `u < v`, each consuming
/// one Bernoulli draw from a ChaCha8 stream seeded with `seed`.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability {p} outside [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                b.set_upper(u, v);
            }
        }
    }
    b.build_from_upper()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let g = sample_gnp(10, 0.0, 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, 1), Graph::complete(10));
    }

    #[test]
    fn deterministic() {
        let a = sample_gnp(500, 0.2, 7);
        let b = sample_gnp(500, 0.2, 7);
        assert_eq!(a, b);
        assert!(a.check_invariants().is_ok());
        assert_ne!(a, sample_gnp(500, 0.2, 8));
    }
}
