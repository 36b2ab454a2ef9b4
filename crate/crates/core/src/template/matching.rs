use std::collections::VecDeque;

use crate::graph::{Graph, VertexSet};

const NIL: usize = usize::MAX;

/// Maximum matching in a bipartite graph given by left adjacency lists.
///
/// Hopcroft-Karp; right vertices with `allowed[j] == false` are ignored.
/// Returns `mate[i]` for each left vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize, allowed: Option<&[bool]>) -> Vec<Option<usize>> {
    let left = adj.len();
    let ok = |j: usize| allowed.is_none_or(|a| a[j]);
    let mut mate_l = vec![NIL; left];
    let mut mate_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    loop {
        // layer free left vertices
        let mut queue = VecDeque::new();
        for i in 0..left {
            if mate_l[i] == NIL {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !ok(j) {
                    continue;
                }
                let k = mate_r[j];
                if k == NIL {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..left {
            if mate_l[i] == NIL {
                augment(i, adj, &ok, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
    mate_l.into_iter().map(|j| (j != NIL).then_some(j)).collect()
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    ok: &impl Fn(usize) -> bool,
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
) -> bool {
    // iterative DFS along the layered graph
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(&mut (i, ref mut at)) = stack.last_mut() {
        if *at == adj[i].len() {
            dist[i] = usize::MAX;
            stack.pop();
            continue;
        }
        let j = adj[i][*at];
        *at += 1;
        if !ok(j) {
            continue;
        }
        let k = mate_r[j];
        if k == NIL {
            // flip the path recorded on the stack
            let mut j = j;
            while let Some((i, _)) = stack.pop() {
                let prev = mate_l[i];
                mate_l[i] = j;
                mate_r[j] = i;
                j = prev;
            }
            return true;
        }
        if dist[k] == dist[i] + 1 {
            stack.push((k, 0));
        }
    }
    false
}

/// Matching between `U` and `W` in a bipartite host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteMatching {
    pub pairs: Vec<(usize, usize)>,
    /// Every vertex of `U` is matched.
    pub perfect: bool,
}

/// Maximum matching of `B[U, W]`; `U` and `W` must be disjoint.
pub fn bipartite_matching(b: &Graph, u: &VertexSet, w: &VertexSet) -> BipartiteMatching {
    debug_assert!(u.is_disjoint(w));
    let left: Vec<usize> = u.to_vec();
    let right: Vec<usize> = w.to_vec();
    let mut index = vec![NIL; b.n()];
    for (k, &v) in right.iter().enumerate() {
        index[v] = k;
    }
    let adj: Vec<Vec<usize>> = left.iter().map(|&x| b.neighbors_in(x, w).iter().map(|y| index[y]).collect()).collect();
    let mate = hopcroft_karp(&adj, right.len(), None);
    let pairs: Vec<(usize, usize)> = mate
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|j| (left[i], right[j])))
        .collect();
    BipartiteMatching {
        perfect: pairs.len() == left.len(),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite_is_perfect() {
        let adj = vec![(0..5).collect::<Vec<_>>(); 5];
        let mate = hopcroft_karp(&adj, 5, None);
        assert!(mate.iter().all(Option::is_some));
    }

    #[test]
    fn star_matches_once() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let m = bipartite_matching(&g, &VertexSet::from_ids(4, [1, 2, 3]), &VertexSet::from_ids(4, [0]));
        assert_eq!(m.pairs.len(), 1);
        assert!(!m.perfect);
    }

    #[test]
    fn blocked_right_vertices_are_skipped() {
        let adj = vec![vec![0, 1], vec![0]];
        let mate = hopcroft_karp(&adj, 2, Some(&[true, false]));
        assert_eq!(mate.iter().flatten().count(), 1);
    }
}
