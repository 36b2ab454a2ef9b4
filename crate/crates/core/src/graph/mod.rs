//! Host graph representation, generators and (p, λ) diagnostics.

mod dense;
mod discrepancy;
mod io;
mod random;
mod set;
mod spectral;

pub use dense::{Graph, GraphBuilder};
pub use discrepancy::{check_discrepancy, DiscrepancyReport};
pub use io::{read_edge_list, write_edge_list};
pub use random::sample_gnp;
pub use set::{Bits, VertexSet};
pub use spectral::{estimate_lambda, LambdaEstimate, PowerBudget};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("adjacency not symmetric at {u}-{v}")]
    Asymmetric { u: usize, v: usize },
    #[error("degree table mismatch at {vertex}: stored {stored}, counted {counted}")]
    DegreeMismatch {
        vertex: usize,
        stored: usize,
        counted: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} edges but {found} were listed")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error("power iteration did not converge in {iterations} iterations (estimate {estimate}, relative change {relative_change:e})")]
    NotConverged {
        iterations: usize,
        estimate: f64,
        relative_change: f64,
    },
    #[error("graph has no vertices")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `e(A, B)`: ordered pairs `(a, b) ∈ A × B` with `ab` an edge, so edges
/// inside `A ∩ B` count twice.
pub fn edge_count_between(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<usize, GraphError> {
    let a = conform(g, a)?;
    let b = conform(g, b)?;
    Ok(a.iter().map(|v| g.deg_into(v, &b)).sum())
}

/// Re-homes a set onto the universe `[0, n)` of `g`.
fn conform(g: &Graph, s: &VertexSet) -> Result<VertexSet, GraphError> {
    if s.universe() == g.n() {
        return Ok(s.clone());
    }
    VertexSet::try_from_ids(g.n(), &s.to_vec())
        .map_err(|vertex| GraphError::VertexOutOfRange { vertex, n: g.n() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_pair_counts_twice() {
        let g = Graph::complete(4);
        let a = VertexSet::from_ids(4, [0, 1]);
        assert_eq!(edge_count_between(&g, &a, &a).unwrap(), 2);
    }

    #[test]
    fn edgeless_counts_zero() {
        let g = Graph::edgeless(12);
        let a = VertexSet::full(12);
        assert_eq!(edge_count_between(&g, &a, &a).unwrap(), 0);
    }

    #[test]
    fn out_of_range_set_rejected() {
        let g = Graph::complete(4);
        let a = VertexSet::from_ids(10, [1, 7]);
        let b = VertexSet::full(4);
        assert!(matches!(
            edge_count_between(&g, &a, &b),
            Err(GraphError::VertexOutOfRange { vertex: 7, n: 4 })
        ));
    }

    #[test]
    fn gnp_count_matches_double_loop() {
        let g = sample_gnp(200, 0.3, 3);
        let a = VertexSet::range(200, 0, 100);
        let b = VertexSet::range(200, 50, 150);
        let mut oracle = 0;
        for x in 0..100 {
            for y in 50..150 {
                if g.has_edge(x, y) {
                    oracle += 1;
                }
            }
        }
        assert_eq!(edge_count_between(&g, &a, &b).unwrap(), oracle);
        let all = VertexSet::full(200);
        assert_eq!(edge_count_between(&g, &all, &all).unwrap(), 2 * g.edge_count());
    }
}
