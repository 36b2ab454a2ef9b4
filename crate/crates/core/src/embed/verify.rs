use std::fmt;

use super::{CycleFamilySpec, Embedding};
use crate::graph::Graph;

/// The first defect found in an embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    CycleCount { expected: usize, got: usize },
    Length { cycle: usize, expected: usize, got: usize },
    VertexOutOfRange { cycle: usize, vertex: usize },
    DuplicateVertex { vertex: usize, first: usize, second: usize },
    MissingEdge { cycle: usize, u: usize, v: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::CycleCount { expected, got } => write!(f, "expected {expected} cycles, got {got}"),
            VerifyFailure::Length { cycle, expected, got } => {
                write!(f, "cycle {cycle} has {got} vertices, expected {expected}")
            }
            VerifyFailure::VertexOutOfRange { cycle, vertex } => write!(f, "cycle {cycle} uses vertex {vertex} outside the graph"),
            VerifyFailure::DuplicateVertex { vertex, first, second } => {
                write!(f, "vertex {vertex} appears in cycle {first} and cycle {second}")
            }
            VerifyFailure::MissingEdge { cycle, u, v } => write!(f, "cycle {cycle} uses missing edge {u}-{v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub cycles: usize,
    pub vertices: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "pass ({} cycles, {} vertices)", self.cycles, self.vertices),
            Some(e) => write!(f, "fail: {e}"),
        }
    }
}

/// Cycle `k` must have `lengths[k]` vertices, all cycles must be vertex
/// disjoint, and cyclically consecutive vertices must be adjacent in `g`.
pub fn verify_embedding(g: &Graph, spec: &CycleFamilySpec, emb: &Embedding) -> VerifyReport {
    let report = |failure| VerifyReport {
        cycles: emb.cycles.len(),
        vertices: emb.vertex_count(),
        failure,
    };
    if emb.cycles.len() != spec.len() {
        return report(Some(VerifyFailure::CycleCount {
            expected: spec.len(),
            got: emb.cycles.len(),
        }));
    }
    let mut owner = vec![usize::MAX; g.n()];
    for (k, (cycle, &want)) in emb.cycles.iter().zip(spec.lengths()).enumerate() {
        if cycle.len() != want {
            return report(Some(VerifyFailure::Length {
                cycle: k,
                expected: want,
                got: cycle.len(),
            }));
        }
        for &v in cycle {
            if v >= g.n() {
                return report(Some(VerifyFailure::VertexOutOfRange { cycle: k, vertex: v }));
            }
            if owner[v] != usize::MAX {
                return report(Some(VerifyFailure::DuplicateVertex {
                    vertex: v,
                    first: owner[v],
                    second: k,
                }));
            }
            owner[v] = k;
        }
        for i in 0..cycle.len() {
            let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if !g.has_edge(u, v) {
                return report(Some(VerifyFailure::MissingEdge { cycle: k, u, v }));
            }
        }
    }
    report(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(lengths: &[usize]) -> CycleFamilySpec {
        CycleFamilySpec::new(lengths.to_vec()).unwrap()
    }

    #[test]
    fn valid_factor_passes() {
        let g = Graph::complete(7);
        let emb = Embedding {
            cycles: vec![vec![0, 1, 2], vec![3, 4, 5, 6]],
        };
        assert!(verify_embedding(&g, &spec(&[3, 4]), &emb).passed());
    }

    #[test]
    fn removed_edge_is_named() {
        let emb = Embedding {
            cycles: vec![vec![0, 1, 2, 3]],
        };
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let r = verify_embedding(&g, &spec(&[4]), &emb);
        assert_eq!(r.failure, Some(VerifyFailure::MissingEdge { cycle: 0, u: 3, v: 0 }));
        assert!(r.to_string().contains("3-0"));
    }

    #[test]
    fn duplicated_vertex_is_named() {
        let g = Graph::complete(6);
        let emb = Embedding {
            cycles: vec![vec![0, 1, 2], vec![3, 4, 2]],
        };
        let r = verify_embedding(&g, &spec(&[3, 3]), &emb);
        assert_eq!(r.failure, Some(VerifyFailure::DuplicateVertex { vertex: 2, first: 0, second: 1 }));
    }

    #[test]
    fn wrong_length_is_caught() {
        let g = Graph::complete(6);
        let emb = Embedding {
            cycles: vec![vec![0, 1, 2, 3]],
        };
        assert!(matches!(
            verify_embedding(&g, &spec(&[5]), &emb).failure,
            Some(VerifyFailure::Length { cycle: 0, expected: 5, got: 4 })
        ));
    }
}
