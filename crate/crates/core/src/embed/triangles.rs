//! Triangle-factor providers.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EmbedError;
use crate::graph::{Graph, VertexSet};

/// Supplies a triangle-factor of `G[universe]`.
pub trait TriangleProvider {
    fn name(&self) -> &str;

    fn triangle_factor(&self, g: &Graph, universe: &VertexSet) -> Result<Vec<[usize; 3]>, EmbedError>;
}

/// Greedy triangles in id order, then a seeded random walk of swaps: an
/// uncovered vertex `v` adjacent to two vertices `a, b` of a chosen triangle
/// `abc` takes `c`'s place, and any triangle among the uncovered vertices is
/// taken as soon as it appears.
#[derive(Clone, Debug)]
pub struct GreedyTriangles {
    pub max_swaps: usize,
    pub seed: u64,
}

impl Default for GreedyTriangles {
    fn default() -> Self {
        GreedyTriangles {
            max_swaps: 1_000_000,
            seed: 0,
        }
    }
}

/// Exhaustive backtracking; exponential, for small vertex sets.
#[derive(Clone, Debug, Default)]
pub struct ExactTriangles;

/// Lowest-id triangle inside `set`.
pub(crate) fn triangle_in(g: &Graph, set: &VertexSet) -> Option<[usize; 3]> {
    for a in set.iter() {
        let na = g.neighbors_in(a, set);
        for b in na.iter().filter(|&b| b > a) {
            if let Some(c) = g.neighbors_in(b, &na).iter().find(|&c| c > b) {
                return Some([a, b, c]);
            }
        }
    }
    None
}

/// A triangle-factor of `G[vertices]` by backtracking on the lowest
/// uncovered vertex, or `None` if there is none.
pub fn exact_triangle_factor(g: &Graph, vertices: &[usize]) -> Option<Vec<[usize; 3]>> {
    fn go(g: &Graph, free: &mut VertexSet, out: &mut Vec<[usize; 3]>) -> bool {
        let Some(a) = free.first() else {
            return true;
        };
        free.remove(a);
        let na = g.neighbors_in(a, free);
        for b in na.iter() {
            for c in g.neighbors_in(b, &na).iter().filter(|&c| c > b) {
                free.remove(b);
                free.remove(c);
                out.push([a, b, c]);
                if go(g, free, out) {
                    return true;
                }
                out.pop();
                free.insert(b);
                free.insert(c);
            }
        }
        free.insert(a);
        false
    }
    if !vertices.len().is_multiple_of(3) {
        return None;
    }
    let mut free = VertexSet::from_ids(g.n(), vertices.iter().copied());
    let mut out = Vec::with_capacity(vertices.len() / 3);
    go(g, &mut free, &mut out).then_some(out)
}

fn size_check(universe: &VertexSet) -> Result<(), EmbedError> {
    if !universe.len().is_multiple_of(3) {
        return Err(EmbedError::Infeasible(format!("{} vertices cannot be split into triangles", universe.len())));
    }
    Ok(())
}

impl TriangleProvider for ExactTriangles {
    fn name(&self) -> &str {
        "exact"
    }

    fn triangle_factor(&self, g: &Graph, universe: &VertexSet) -> Result<Vec<[usize; 3]>, EmbedError> {
        size_check(universe)?;
        exact_triangle_factor(g, &universe.to_vec()).ok_or_else(|| EmbedError::Stage {
            stage: "triangles",
            detail: "no triangle-factor exists".into(),
        })
    }
}

impl TriangleProvider for GreedyTriangles {
    fn name(&self) -> &str {
        "greedy"
    }

    fn triangle_factor(&self, g: &Graph, universe: &VertexSet) -> Result<Vec<[usize; 3]>, EmbedError> {
        size_check(universe)?;
        let n = g.n();
        let mut free = universe.clone();
        let mut tri: Vec<[usize; 3]> = Vec::with_capacity(universe.len() / 3);
        let mut owner = vec![usize::MAX; n];
        let place = |t: [usize; 3], slot: Option<usize>, tri: &mut Vec<[usize; 3]>, owner: &mut [usize]| {
            let k = slot.unwrap_or(tri.len());
            if k == tri.len() {
                tri.push(t);
            } else {
                tri[k] = t;
            }
            for v in t {
                owner[v] = k;
            }
        };
        for v in universe.iter() {
            if !free.contains(v) {
                continue;
            }
            let nv = g.neighbors_in(v, &free);
            let hit = nv.iter().find_map(|x| g.first_neighbor_in(x, &nv).map(|y| [v, x, y]));
            if let Some(t) = hit {
                for u in t {
                    free.remove(u);
                }
                place(t, None, &mut tri, &mut owner);
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut swaps = 0;
        while !free.is_empty() {
            if let Some(t) = triangle_in(g, &free) {
                for u in t {
                    free.remove(u);
                }
                place(t, None, &mut tri, &mut owner);
                continue;
            }
            if swaps >= self.max_swaps {
                return Err(EmbedError::Stage {
                    stage: "triangles",
                    detail: format!("{} vertices uncovered after {swaps} swaps", free.len()),
                });
            }
            swaps += 1;
            let fv = free.to_vec();
            let v = *fv.choose(&mut rng).expect("non-empty");
            // evict c from a triangle whose other two vertices both see v
            let mut ks: Vec<usize> = g.neighbors_in(v, universe).iter().map(|a| owner[a]).filter(|&k| k != usize::MAX).collect();
            ks.sort_unstable();
            ks.dedup();
            let options: Vec<(usize, usize)> = ks
                .into_iter()
                .flat_map(|k| tri[k].map(|c| (k, c)))
                .filter(|&(k, c)| tri[k].iter().filter(|&&u| u != c).all(|&u| g.has_edge(v, u)))
                .collect();
            let Some(&(k, c)) = options.choose(&mut rng) else {
                continue;
            };
            let mut t = [v, 0, 0];
            let mut i = 1;
            for &u in &tri[k] {
                if u != c {
                    t[i] = u;
                    i += 1;
                }
            }
            free.remove(v);
            free.insert(c);
            owner[c] = usize::MAX;
            place(t, Some(k), &mut tri, &mut owner);
        }
        Ok(tri)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    fn check(g: &Graph, universe: &VertexSet, tri: &[[usize; 3]]) {
        let mut seen = VertexSet::empty(g.n());
        for t in tri {
            assert!(g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2]));
            for &v in t {
                assert!(universe.contains(v) && seen.insert(v));
            }
        }
        assert_eq!(&seen, universe);
    }

    #[test]
    fn complete_graph_factor() {
        let g = Graph::complete(12);
        let u = VertexSet::full(12);
        check(&g, &u, &GreedyTriangles::default().triangle_factor(&g, &u).unwrap());
        check(&g, &u, &ExactTriangles.triangle_factor(&g, &u).unwrap());
    }

    #[test]
    fn exact_detects_absence() {
        let g = Graph::cycle(6);
        assert!(exact_triangle_factor(&g, &[0, 1, 2, 3, 4, 5]).is_none());
    }

    #[test]
    fn greedy_covers_random_graph() {
        let g = sample_gnp(900, 0.25, 3);
        let u = VertexSet::full(900);
        check(&g, &u, &GreedyTriangles::default().triangle_factor(&g, &u).unwrap());
    }

    #[test]
    fn greedy_matches_exact_on_small_dense_graphs() {
        for seed in 0..20 {
            let g = sample_gnp(12, 0.6, seed);
            let u = VertexSet::full(12);
            let exact = exact_triangle_factor(&g, &u.to_vec());
            let greedy = GreedyTriangles {
                max_swaps: 20_000,
                seed,
            }
            .triangle_factor(&g, &u);
            if let Ok(tri) = &greedy {
                check(&g, &u, tri);
                assert!(exact.is_some());
            }
        }
    }
}
