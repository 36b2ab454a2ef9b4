use super::set::{and3_count, and_count, words_for, Bits, VertexSet};
use super::GraphError;

/// Undirected simple graph on `[0, n)` with one adjacency bitset per vertex.
///
/// Immutable after construction. Edge queries are a single bit test and
/// `deg(v, U)` is a popcount over the row of `v` masked by `U`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
    degrees: Vec<u32>,
    edges: usize,
}

/// Incremental constructor for [`Graph`].
pub struct GraphBuilder {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        GraphBuilder {
            n,
            stride,
            rows: vec![0; stride * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.stride + v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.stride + v / 64] |= 1u64 << (v % 64);
    }

    /// Adds `uv`, rejecting loops, out-of-range ids and repeats.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop { vertex: u });
        }
        if self.bit(u, v) {
            return Err(GraphError::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
        self.set(u, v);
        self.set(v, u);
        Ok(())
    }

    /// Adds `uv` if absent; ids must be valid and distinct.
    #[inline]
    pub(crate) fn add_edge_unchecked(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.set(u, v);
        self.set(v, u);
    }

    /// Sets the upper-triangle bit `u < v` only; [`GraphBuilder::build_from_upper`]
    /// mirrors it afterwards.
    #[inline]
    pub(crate) fn set_upper(&mut self, u: usize, v: usize) {
        debug_assert!(u < v && v < self.n);
        self.set(u, v);
    }

    pub fn build(self) -> Graph {
        let GraphBuilder { n, stride, rows } = self;
        let degrees: Vec<u32> = (0..n)
            .map(|v| {
                rows[v * stride..(v + 1) * stride]
                    .iter()
                    .map(|w| w.count_ones())
                    .sum()
            })
            .collect();
        let edges = degrees.iter().map(|&d| d as usize).sum::<usize>() / 2;
        Graph {
            n,
            stride,
            rows,
            degrees,
            edges,
        }
    }

    /// Mirrors an upper-triangular fill into a symmetric adjacency with a
    /// blocked 64x64 bit transpose, then builds.
    pub(crate) fn build_from_upper(mut self) -> Graph {
        let n = self.n;
        let stride = self.stride;
        let blocks = stride;
        let mut tile = [0u64; 64];
        for bi in 0..blocks {
            for bj in bi..blocks {
                // rows 64*bi.., word bj holds bits (u, v) with v in block bj
                for (k, t) in tile.iter_mut().enumerate() {
                    let u = bi * 64 + k;
                    *t = if u < n { self.rows[u * stride + bj] } else { 0 };
                }
                transpose64(&mut tile);
                for (k, t) in tile.iter().enumerate() {
                    let v = bj * 64 + k;
                    if v < n && *t != 0 {
                        self.rows[v * stride + bi] |= *t;
                    }
                }
            }
        }
        self.build()
    }
}

/// In-place transpose of a 64x64 bit matrix (row `i`, bit `j`).
fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32;
    let mut m: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & m;
            a[k] ^= t << j;
            a[k + j] ^= t;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        m ^= m << j;
    }
}

impl Graph {
    /// Builds from an edge list, rejecting loops, repeats and bad ids.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn edgeless(n: usize) -> Graph {
        GraphBuilder::new(n).build()
    }

    pub fn complete(n: usize) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                b.add_edge_unchecked(u, v);
            }
        }
        b.build()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.stride + v / 64] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v] as usize
    }

    pub fn min_degree(&self) -> usize {
        self.degrees.iter().copied().min().unwrap_or(0) as usize
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0) as usize
    }

    /// The adjacency row of `v` as packed words.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Neighbours of `v` in ascending id order.
    pub fn neighbors(&self, v: usize) -> Bits<'_> {
        Bits::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet::from_words(self.n, self.row(v).to_vec())
    }

    /// `N(v) ∩ U`.
    pub fn neighbors_in(&self, v: usize, set: &VertexSet) -> VertexSet {
        let mut s = set.clone();
        s.intersect_words(self.row(v));
        s
    }

    /// `deg(v, U)`.
    #[inline]
    pub fn deg_into(&self, v: usize, set: &VertexSet) -> usize {
        and_count(self.row(v), set.words())
    }

    /// `|N(u) ∩ N(v) ∩ U|`.
    #[inline]
    pub fn codeg_into(&self, u: usize, v: usize, set: &VertexSet) -> usize {
        and3_count(self.row(u), self.row(v), set.words())
    }

    /// Lowest-id neighbour of `v` inside `U`.
    pub fn first_neighbor_in(&self, v: usize, set: &VertexSet) -> Option<usize> {
        self.row(v)
            .iter()
            .zip(set.words())
            .enumerate()
            .find_map(|(i, (a, b))| {
                let w = a & b;
                (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
            })
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .skip_while(move |&v| v <= u)
                .map(move |v| (u, v))
        })
    }

    /// Graph induced on `set`, relabelled to `0..|set|` in ascending order.
    pub fn induced(&self, set: &VertexSet) -> (Graph, Vec<usize>) {
        let ids = set.to_vec();
        let mut b = GraphBuilder::new(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    b.add_edge_unchecked(i, j);
                }
            }
        }
        (b.build(), ids)
    }

    /// Exhaustive symmetry, loop and degree-table check.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let mut total = 0usize;
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return Err(GraphError::SelfLoop { vertex: u });
            }
            let mut deg = 0usize;
            for v in self.neighbors(u) {
                if v >= self.n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
                }
                if !self.has_edge(v, u) {
                    return Err(GraphError::Asymmetric { u, v });
                }
                deg += 1;
            }
            if deg != self.degree(u) {
                return Err(GraphError::DegreeMismatch {
                    vertex: u,
                    stored: self.degree(u),
                    counted: deg,
                });
            }
            total += deg;
        }
        if total != 2 * self.edges {
            return Err(GraphError::DegreeMismatch {
                vertex: usize::MAX,
                stored: 2 * self.edges,
                counted: total,
            });
        }
        Ok(())
    }

    /// Bipartite double cover: `(v, 1) = v`, `(v, 2) = n + v`.
    pub fn bipartite_double_cover(&self) -> Graph {
        let n = self.n;
        let mut b = GraphBuilder::new(2 * n);
        for (u, v) in self.edges() {
            b.add_edge_unchecked(u, n + v);
            b.add_edge_unchecked(v, n + u);
        }
        b.build()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_bad_edges() {
        let mut b = GraphBuilder::new(3);
        assert!(matches!(b.add_edge(0, 3), Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })));
        assert!(matches!(b.add_edge(1, 1), Err(GraphError::SelfLoop { vertex: 1 })));
        b.add_edge(2, 0).unwrap();
        assert!(matches!(b.add_edge(0, 2), Err(GraphError::DuplicateEdge { u: 0, v: 2 })));
    }

    #[test]
    fn complete_graph_basics() {
        let g = Graph::complete(10);
        assert_eq!(g.edge_count(), 45);
        assert!(g.check_invariants().is_ok());
        assert_eq!(g.neighbors(3).collect::<Vec<_>>(), vec![0, 1, 2, 4, 5, 6, 7, 8, 9]);
        assert_eq!(g.edges().count(), 45);
    }

    #[test]
    fn transpose_fill_matches_direct_fill() {
        let n = 150;
        let mut up = GraphBuilder::new(n);
        let mut direct = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if (u * 7 + v * 13) % 5 == 0 {
                    up.set_upper(u, v);
                    direct.add_edge_unchecked(u, v);
                }
            }
        }
        let a = up.build_from_upper();
        let b = direct.build();
        assert_eq!(a, b);
        assert!(a.check_invariants().is_ok());
    }

    #[test]
    fn double_cover_of_triangle_is_hexagon() {
        let k3 = Graph::complete(3);
        let c = k3.bipartite_double_cover();
        assert_eq!(c.n(), 6);
        assert_eq!(c.edge_count(), 6);
        assert!((0..6).all(|v| c.degree(v) == 2));
        // connected: walk the cycle from 0
        let mut seen = [false; 6];
        let (mut prev, mut cur) = (usize::MAX, 0);
        for _ in 0..6 {
            seen[cur] = true;
            let next = c.neighbors(cur).find(|&w| w != prev).unwrap();
            prev = cur;
            cur = next;
        }
        assert_eq!(cur, 0);
        assert!(seen.iter().all(|&s| s));
    }
}
