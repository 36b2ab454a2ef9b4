use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

/// Iteration cap and stopping rule for [`estimate_lambda`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerBudget {
    pub max_iterations: usize,
    /// Stop once successive estimates differ by less than this, relatively.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for PowerBudget {
    fn default() -> Self {
        PowerBudget {
            max_iterations: 20_000,
            tolerance: 1e-10,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaEstimate {
    /// Largest singular value of `A - pJ` as reached by the iteration.
    pub value: f64,
    pub iterations: usize,
    /// Relative change at the final step; the achieved tolerance.
    pub relative_change: f64,
}

/// `y = (A - pJ) x`.
fn apply(g: &Graph, p: f64, x: &[f64], y: &mut [f64]) {
    let shift = p * x.iter().sum::<f64>();
    for (u, yu) in y.iter_mut().enumerate() {
        *yu = g.neighbors(u).map(|v| x[v]).sum::<f64>() - shift;
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Power iteration for `‖A - pJ‖₂`.
///
/// For unit `x`, `‖Mx‖` is nondecreasing along the iteration and converges to
/// the largest singular value from below. Exhausting the budget is an error.
pub fn estimate_lambda(g: &Graph, p: f64, budget: PowerBudget) -> Result<LambdaEstimate, GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let s = norm(&x);
    x.iter_mut().for_each(|a| *a /= s);
    let mut y = vec![0.0; n];
    let mut prev = 0.0f64;
    let mut change = f64::INFINITY;
    for it in 1..=budget.max_iterations {
        apply(g, p, &x, &mut y);
        let sigma = norm(&y);
        if sigma == 0.0 {
            return Ok(LambdaEstimate {
                value: 0.0,
                iterations: it,
                relative_change: 0.0,
            });
        }
        change = (sigma - prev).abs() / sigma;
        prev = sigma;
        if change < budget.tolerance {
            return Ok(LambdaEstimate {
                value: sigma,
                iterations: it,
                relative_change: change,
            });
        }
        for (a, b) in x.iter_mut().zip(&y) {
            *a = b / sigma;
        }
    }
    Err(GraphError::NotConverged {
        iterations: budget.max_iterations,
        estimate: prev,
        relative_change: change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;
    use nalgebra::DMatrix;

    fn dense_oracle(g: &Graph, p: f64) -> f64 {
        let n = g.n();
        let m = DMatrix::from_fn(n, n, |i, j| f64::from(u8::from(g.has_edge(i, j))) - p);
        m.symmetric_eigenvalues().iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    #[test]
    fn complete_graph_with_unit_density() {
        let g = Graph::complete(40);
        let est = estimate_lambda(&g, 1.0, PowerBudget::default()).unwrap();
        assert!(est.value <= 1.0 + 1e-6, "{est:?}");
        assert!((est.value - dense_oracle(&g, 1.0)).abs() < 1e-6);
    }

    #[test]
    fn cycle_matches_circulant_spectrum() {
        // eigenvalues of A are 2cos(2πk/n); pJ cancels k = 0, so the top
        // singular value is |2cos(π)| = 2 for even n
        let n = 100;
        let oracle = (0..n)
            .filter(|&k| k != 0)
            .map(|k| (2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).abs())
            .fold(0.0f64, f64::max);
        let est = estimate_lambda(&Graph::cycle(n), 0.02, PowerBudget::default()).unwrap();
        assert!((est.value - oracle).abs() < 1e-6, "{est:?} vs {oracle}");
    }

    #[test]
    fn edgeless_is_zero() {
        let est = estimate_lambda(&Graph::edgeless(10), 0.0, PowerBudget::default()).unwrap();
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let g = sample_gnp(200, 0.5, 1);
        let budget = PowerBudget {
            max_iterations: 3,
            tolerance: 1e-15,
            ..PowerBudget::default()
        };
        assert!(matches!(
            estimate_lambda(&g, 0.5, budget),
            Err(GraphError::NotConverged { iterations: 3, .. })
        ));
    }

    #[test]
    fn agrees_with_dense_solver() {
        let g = sample_gnp(150, 0.2, 4);
        let est = estimate_lambda(&g, 0.2, PowerBudget::default()).unwrap();
        let oracle = dense_oracle(&g, 0.2);
        assert!(est.value <= oracle + 1e-9);
        assert!((est.value - oracle).abs() / oracle < 1e-4, "{} vs {oracle}", est.value);
    }
}
