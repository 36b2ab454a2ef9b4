//! Paths, book cycles and the multiple connection procedure.

use thiserror::Error;

use crate::config::{JumbledParams, Mode};
use crate::graph::{Graph, VertexSet};
use crate::partition::{degree_preserving_partition, PartitionError, PartitionOptions};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("no vertex of W reaches half the expected degree into every target (best candidate {best:?} at ratio {ratio:.3})")]
    NoGoodVertex { best: Option<usize>, ratio: f64 },
    #[error("no path of length {length} found after {expanded} expansions")]
    NoPath { length: usize, expanded: usize },
    #[error("precondition failed: {what} needs {need:.1}, have {have:.1}")]
    Precondition {
        what: &'static str,
        need: f64,
        have: f64,
    },
    #[error("book cycle not found: {stage}")]
    NotFound { stage: &'static str },
    #[error("greedy path stuck at length {reached}")]
    Stuck { reached: usize },
    #[error("vertex {vertex} occurs more than twice in the pair system")]
    Multiplicity { vertex: usize },
    #[error("pair endpoint {vertex} lies in the connection pool")]
    EndpointInPool { vertex: usize },
    #[error("{leftover} pairs left for the second phase, above the bound {bound:.1}")]
    PhaseTwoOverflow { leftover: usize, bound: f64 },
    #[error("pair {index} ({a}, {b}) could not be connected")]
    Unconnected { index: usize, a: usize, b: usize },
    #[error("invalid path: {0}")]
    Invalid(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Thresholds and search limits shared by the path routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathConfig {
    pub mode: Mode,
    pub p: f64,
    /// `ε` with `λ ≤ ε p² n`; size preconditions are only checked when known.
    pub epsilon: Option<f64>,
    /// Node expansions allowed per connecting-path search.
    pub budget: usize,
}

impl PathConfig {
    pub fn strict(params: &JumbledParams) -> Self {
        PathConfig {
            mode: Mode::Strict,
            p: params.p,
            epsilon: Some(params.epsilon),
            budget: 200_000,
        }
    }

    pub fn practical(p: f64) -> Self {
        PathConfig {
            mode: Mode::Practical,
            p,
            epsilon: None,
            budget: 200_000,
        }
    }

    fn require(&self, what: &'static str, need: f64, have: f64) -> Result<(), PathError> {
        if self.mode.is_strict() && have < need {
            return Err(PathError::Precondition { what, need, have });
        }
        Ok(())
    }
}

/// A sequence of vertices; consecutive ones are adjacent. A closed path
/// (first equals last) is a cycle through that vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path(Vec<usize>);

impl Path {
    pub fn new(vertices: Vec<usize>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.0.len() > 1 && self.first() == self.last()
    }

    pub fn inner(&self) -> &[usize] {
        if self.0.len() < 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Distinct vertices (ends may coincide) joined by edges of `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), PathError> {
        let body = if self.is_closed() { &self.0[..self.0.len() - 1] } else { &self.0[..] };
        let mut seen = VertexSet::empty(g.n());
        for &v in body {
            if v >= g.n() {
                return Err(PathError::Invalid(format!("vertex {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(PathError::Invalid(format!("vertex {v} repeated")));
            }
        }
        if self.is_closed() && body.len() < 3 {
            return Err(PathError::Invalid("closed path shorter than a triangle".into()));
        }
        for w in self.0.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(PathError::Invalid(format!("missing edge {}-{}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

/// A path of length `ℓ - 2` whose ends share the `K` page vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BookCycle {
    pub spine: Path,
    pub pages: Vec<usize>,
}

impl BookCycle {
    pub fn validate(&self, g: &Graph) -> Result<(), PathError> {
        self.spine.validate(g)?;
        let (a, b) = (self.spine.first(), self.spine.last());
        for (i, &w) in self.pages.iter().enumerate() {
            if self.spine.vertices().contains(&w) || self.pages[..i].contains(&w) {
                return Err(PathError::Invalid(format!("page {w} repeated or on the spine")));
            }
            if !g.has_edge(a, w) || !g.has_edge(b, w) {
                return Err(PathError::Invalid(format!("page {w} misses a spine end")));
            }
        }
        Ok(())
    }

    /// Spine closed through `page` into a cycle.
    pub fn cycle_through(&self, page: usize) -> Vec<usize> {
        let mut c = self.spine.vertices().to_vec();
        c.push(page);
        c
    }
}

/// Pairs `(a_i, b_i)` in which each vertex occurs at most twice.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PairSystem {
    pairs: Vec<(usize, usize)>,
}

impl PairSystem {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self, PathError> {
        let mut count = std::collections::HashMap::new();
        for &(a, b) in &pairs {
            for v in [a, b] {
                let c = count.entry(v).or_insert(0u8);
                *c += 1;
                if *c > 2 {
                    return Err(PathError::Multiplicity { vertex: v });
                }
            }
        }
        Ok(PairSystem { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Lowest-id `w ∈ W` with `deg(w, U_i) ≥ p|U_i|/2` for every target.
pub fn find_good_vertex(g: &Graph, w: &VertexSet, targets: &[&VertexSet], cfg: &PathConfig) -> Result<usize, PathError> {
    if let Some(eps) = cfg.epsilon {
        let n = g.n() as f64;
        let need: f64 = targets
            .iter()
            .map(|u| 4.0 * eps * eps * cfg.p * cfg.p * n * n / u.len().max(1) as f64)
            .sum();
        if cfg.mode.is_strict() && w.len() as f64 <= need {
            return Err(PathError::Precondition {
                what: "|W| > sum 4 eps^2 p^2 n^2 / |U_i|",
                need,
                have: w.len() as f64,
            });
        }
    }
    let mut best = None;
    let mut best_ratio = f64::NEG_INFINITY;
    for v in w.iter() {
        let ratio = targets
            .iter()
            .map(|u| {
                let want = cfg.p * u.len() as f64 / 2.0;
                if want == 0.0 {
                    f64::INFINITY
                } else {
                    g.deg_into(v, u) as f64 / want
                }
            })
            .fold(f64::INFINITY, f64::min);
        if ratio >= 1.0 {
            return Ok(v);
        }
        if ratio > best_ratio {
            best_ratio = ratio;
            best = Some(v);
        }
    }
    Err(PathError::NoGoodVertex {
        best,
        ratio: best_ratio.max(0.0),
    })
}

/// An `A`-`B` path of length `ℓ` with inner vertices in `C`.
///
/// Follows the inductive construction: take `a ∈ A` with `deg(a, C) ≥ p|C|/2`
/// and recurse from `N(a) ∩ C`. Used vertices are removed from `B` and `C`, so
/// overlapping sets are allowed. Good candidates are tried first; practical
/// mode then backtracks through the rest, within `cfg.budget` expansions.
pub fn find_connecting_path(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    c: &VertexSet,
    ell: usize,
    cfg: &PathConfig,
) -> Result<Path, PathError> {
    if ell == 0 {
        return a
            .intersection(b)
            .first()
            .map(|v| Path(vec![v]))
            .ok_or(PathError::NoPath { length: 0, expanded: 0 });
    }
    if let Some(eps) = cfg.epsilon {
        let n = g.n() as f64;
        let scale = 2f64.powi(ell as i32 - 1) * eps * n;
        cfg.require("|A| >= 2^(l-1) eps p n", scale * cfg.p, a.len() as f64)?;
        cfg.require("|B| >= 2^(l-1) eps p n", scale * cfg.p, b.len() as f64)?;
        if ell >= 2 {
            cfg.require("|C| >= 2^(l-1) eps n", scale, c.len() as f64)?;
        }
    }
    let mut search = Search {
        g,
        cfg,
        expanded: 0,
        stack: Vec::with_capacity(ell + 1),
    };
    if search.extend(a.clone(), b.clone(), c.clone(), ell) {
        let path = Path(search.stack);
        debug_assert!(path.validate(g).is_ok());
        Ok(path)
    } else {
        Err(PathError::NoPath {
            length: ell,
            expanded: search.expanded,
        })
    }
}

struct Search<'a> {
    g: &'a Graph,
    cfg: &'a PathConfig,
    expanded: usize,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn extend(&mut self, mut a: VertexSet, mut b: VertexSet, mut c: VertexSet, ell: usize) -> bool {
        for &v in &self.stack {
            a.remove(v);
            b.remove(v);
            c.remove(v);
        }
        if ell == 1 {
            for x in a.iter() {
                self.expanded += 1;
                let mut bb = b.clone();
                bb.remove(x);
                if let Some(y) = self.g.first_neighbor_in(x, &bb) {
                    self.stack.extend([x, y]);
                    return true;
                }
                if self.expanded > self.cfg.budget {
                    return false;
                }
            }
            return false;
        }
        let half = self.cfg.p * c.len() as f64 / 2.0;
        let g = self.g;
        let good = |x: &usize| g.deg_into(*x, &c) as f64 >= half;
        let strict = self.cfg.mode.is_strict();
        // good candidates first, lazily; the rest only in practical mode
        let order: Vec<usize> = a.iter().collect();
        let firsts = order.iter().copied().filter(good);
        let seconds = order.iter().copied().filter(|x| !strict && !good(x));
        for x in firsts.chain(seconds) {
            self.expanded += 1;
            if self.expanded > self.cfg.budget {
                return false;
            }
            let mut next = self.g.neighbors_in(x, &c);
            next.remove(x);
            if next.is_empty() {
                continue;
            }
            self.stack.push(x);
            if self.extend(next, b.clone(), c.clone(), ell - 1) {
                return true;
            }
            self.stack.pop();
        }
        false
    }
}

/// Cap on first-vertex candidates and on spine attempts per book cycle.
const BOOK_ATTEMPTS: usize = 64;

/// A copy of `C_ℓ(1, …, 1, K)` inside `U`, keeping the `K` lowest-id pages.
pub fn find_book_cycle(g: &Graph, u: &VertexSet, ell: usize, k: usize, cfg: &PathConfig) -> Result<BookCycle, PathError> {
    if ell < 4 {
        return Err(PathError::Precondition {
            what: "book cycle length l >= 4",
            need: 4.0,
            have: ell as f64,
        });
    }
    if let Some(eps) = cfg.epsilon {
        let n = g.n() as f64;
        cfg.require("|U| >= 2^l eps n", 2f64.powi(ell as i32) * eps * n, u.len() as f64)?;
        cfg.require("eps p^2 n >= K/4", k as f64 / 4.0, eps * cfg.p * cfg.p * n)?;
    }
    let p = cfg.p;
    let half_u = p * u.len() as f64 / 2.0;
    let strict = cfg.mode.is_strict();
    let good_first = |v: &usize| g.deg_into(*v, u) as f64 >= half_u;
    // good vertices in id order, then (practical only) the rest
    let firsts = u
        .iter()
        .filter(good_first)
        .take(if strict { 1 } else { usize::MAX })
        .chain(u.iter().filter(move |v| !strict && !good_first(v)))
        .take(BOOK_ATTEMPTS);
    let mut attempts = 0usize;
    let mut stage = "u2";
    let mut any_first = false;
    for u1 in firsts {
        any_first = true;
        let nu1 = g.neighbors_in(u1, u);
        if nu1.len() < 2 {
            continue;
        }
        let half_n = p * nu1.len() as f64 / 2.0;
        let room = |v: usize| v != u1 && g.codeg_into(u1, v, u) >= k + usize::from(ell == 4);
        let good_second = |v: usize| g.deg_into(v, u) as f64 >= half_u && g.deg_into(v, &nu1) as f64 >= half_n;
        let seconds = u
            .iter()
            .filter(|&v| room(v) && good_second(v))
            .chain(u.iter().filter(|&v| !strict && room(v) && !good_second(v)));
        for u2 in seconds {
            attempts += 1;
            if attempts > BOOK_ATTEMPTS {
                return Err(PathError::NotFound { stage });
            }
            let common = g.neighbors_in(u1, &g.neighbors_in(u2, u));
            if ell == 4 {
                let mut it = common.iter();
                let mid = it.next().expect("co-degree checked");
                let pages: Vec<usize> = it.take(k).collect();
                let book = BookCycle {
                    spine: Path(vec![u1, mid, u2]),
                    pages,
                };
                debug_assert!(book.validate(g).is_ok());
                return Ok(book);
            }
            let pages: Vec<usize> = common.iter().take(k).collect();
            let mut reserved = VertexSet::from_ids(g.n(), pages.iter().copied());
            reserved.insert(u1);
            reserved.insert(u2);
            let pool = u.difference(&reserved);
            let from = g.neighbors_in(u1, &pool);
            let to = g.neighbors_in(u2, &pool);
            match find_connecting_path(g, &from, &to, &pool, ell - 4, cfg) {
                Ok(mid) => {
                    let mut spine = Vec::with_capacity(ell - 1);
                    spine.push(u1);
                    spine.extend(mid.into_vertices());
                    spine.push(u2);
                    let book = BookCycle {
                        spine: Path(spine),
                        pages,
                    };
                    debug_assert!(book.validate(g).is_ok());
                    return Ok(book);
                }
                Err(PathError::Precondition { .. }) => stage = "connecting path precondition",
                Err(_) => stage = "connecting path",
            }
        }
        if strict {
            break;
        }
    }
    if !any_first {
        return Err(PathError::NotFound { stage: "u1" });
    }
    Err(PathError::NotFound { stage })
}

const MAX_ROTATIONS: usize = 10_000;

/// Pósa rotation keeping `path[0]`: for `path[i]` adjacent to the end, the
/// tail after `i` is reversed so `path[i + 1]` becomes the end. New ends that
/// can take two more steps into `rest` are preferred, then ends with any
/// neighbour in `rest`; `salt` picks within the best class. Returns false
/// when no rotation exists.
fn rotate(g: &Graph, path: &mut [usize], rest: &VertexSet, salt: usize) -> bool {
    let k = path.len();
    let end = path[k - 1];
    let pivots: Vec<usize> = (0..k.saturating_sub(2)).filter(|&i| g.has_edge(end, path[i])).collect();
    if pivots.is_empty() {
        return false;
    }
    let class = |i: usize| {
        let nb = g.neighbors_in(path[i + 1], rest);
        if nb.iter().any(|v| g.first_neighbor_in(v, rest).is_some()) {
            2
        } else {
            usize::from(!nb.is_empty())
        }
    };
    let classes: Vec<usize> = pivots.iter().map(|&i| class(i)).collect();
    let top = *classes.iter().max().expect("non-empty");
    let best: Vec<usize> = pivots.iter().zip(&classes).filter(|(_, &c)| c == top).map(|(&i, _)| i).collect();
    let i = best[salt.wrapping_mul(0x9e37_79b9) % best.len()];
    path[i + 1..].reverse();
    true
}

/// A path with exactly `ℓ` edges inside `U`, grown greedily while the
/// endpoint keeps `deg(u_t, U \ P) ≥ p|U \ P|/2`. Practical mode falls back
/// to the neighbour of largest remaining degree when no extension qualifies,
/// and to rotations of the path when the end has no neighbour left.
pub fn greedy_long_path(g: &Graph, u: &VertexSet, ell: usize, cfg: &PathConfig) -> Result<Path, PathError> {
    if let Some(eps) = cfg.epsilon {
        let n = g.n() as f64;
        cfg.require("|U| > eps n", eps * n, u.len() as f64)?;
        cfg.require("l <= |U| - eps n", ell as f64, u.len() as f64 - eps * n)?;
    }
    cfg.require("p <= 1/2", cfg.p, 0.5)?;
    let p = cfg.p;
    let mut rest = u.clone();
    let start = find_good_vertex(g, u, &[u], cfg).or_else(|e| {
        if cfg.mode.is_strict() {
            Err(e)
        } else {
            u.iter().max_by_key(|&v| (g.deg_into(v, u), std::cmp::Reverse(v))).ok_or(e)
        }
    })?;
    rest.remove(start);
    let mut path = vec![start];
    let mut cur = start;
    let mut rotations = 0;
    while path.len() <= ell {
        let target = p * (rest.len() - 1) as f64 / 2.0;
        let mut pick = None;
        let mut fallback: Option<(usize, usize)> = None;
        for v in g.neighbors_in(cur, &rest).iter() {
            let d = g.deg_into(v, &rest);
            if d as f64 >= target {
                pick = Some(v);
                break;
            }
            if fallback.is_none_or(|(bd, _)| d > bd) {
                fallback = Some((d, v));
            }
        }
        let next = match (pick, fallback) {
            (Some(v), _) => v,
            (None, Some((d, v))) if !cfg.mode.is_strict() && (d > 0 || path.len() == ell) => v,
            (None, _) if !cfg.mode.is_strict() && rotations < MAX_ROTATIONS => {
                rotations += 1;
                if !rotate(g, &mut path, &rest, rotations) {
                    return Err(PathError::Stuck { reached: path.len() - 1 });
                }
                cur = *path.last().expect("non-empty");
                continue;
            }
            _ => return Err(PathError::Stuck { reached: path.len() - 1 }),
        };
        rest.remove(next);
        path.push(next);
        cur = next;
    }
    let path = Path(path);
    debug_assert!(path.validate(g).is_ok());
    Ok(path)
}

/// Length-`ℓ` paths joining each pair, inner vertices disjoint and inside `U`.
///
/// `U` is halved by a degree-preserving split. Pairs keeping
/// `δ' p |U| / 8` neighbours on both sides of the first half are connected
/// there in index order; the rest are swept through the second half. Practical
/// mode skips the split when it is infeasible and retries failures in the
/// union of what remains.
pub fn connect_pairs(
    g: &Graph,
    system: &PairSystem,
    u: &VertexSet,
    ell: usize,
    delta_prime: f64,
    cfg: &PathConfig,
) -> Result<Vec<Path>, PathError> {
    if ell < 3 {
        return Err(PathError::Precondition {
            what: "connection length l >= 3",
            need: 3.0,
            have: ell as f64,
        });
    }
    let r = system.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let n = g.n();
    let mut ends = VertexSet::empty(n);
    for &(a, b) in system.pairs() {
        for v in [a, b] {
            if u.contains(v) {
                return Err(PathError::EndpointInPool { vertex: v });
            }
            ends.insert(v);
        }
    }
    let size = u.len() as f64;
    cfg.require("|U| / (8 l) >= r", r as f64, size / (8.0 * ell as f64))?;
    let wanted = delta_prime * cfg.p * size;
    for v in ends.iter() {
        cfg.require("deg(a_i, U), deg(b_i, U) >= delta' p |U|", wanted, g.deg_into(v, u) as f64)?;
    }

    let split = degree_preserving_partition(
        g,
        u,
        &ends,
        1,
        delta_prime,
        cfg.p,
        &PartitionOptions {
            mode: cfg.mode,
            factor: 0.5,
        },
    );
    let (mut pool1, mut pool2) = match split {
        Ok(part) => (part.parts[0].clone(), part.parts[1].clone()),
        Err(e) if cfg.mode.is_strict() => return Err(e.into()),
        Err(_) => (u.clone(), VertexSet::empty(n)),
    };

    let threshold = wanted / 8.0;
    let mut out: Vec<Option<Path>> = vec![None; r];
    let mut leftover = Vec::new();
    for (i, &(a, b)) in system.pairs().iter().enumerate() {
        let ok = g.deg_into(a, &pool1) as f64 >= threshold && g.deg_into(b, &pool1) as f64 >= threshold;
        match ok.then(|| join(g, a, b, &pool1, ell, cfg)).flatten() {
            Some(path) => {
                for &v in path.inner() {
                    pool1.remove(v);
                }
                out[i] = Some(path);
            }
            None => leftover.push(i),
        }
    }
    let bound = delta_prime * cfg.p * size / (8.0 * ell as f64);
    if cfg.mode.is_strict() && leftover.len() as f64 > bound {
        return Err(PathError::PhaseTwoOverflow {
            leftover: leftover.len(),
            bound,
        });
    }
    for i in leftover {
        let (a, b) = system.pairs()[i];
        let path = match join(g, a, b, &pool2, ell, cfg) {
            Some(path) => path,
            None if !cfg.mode.is_strict() => {
                let both = pool1.union(&pool2);
                join(g, a, b, &both, ell, cfg).ok_or(PathError::Unconnected { index: i, a, b })?
            }
            None => return Err(PathError::Unconnected { index: i, a, b }),
        };
        for &v in path.inner() {
            pool1.remove(v);
            pool2.remove(v);
        }
        out[i] = Some(path);
    }
    Ok(out.into_iter().map(|p| p.expect("every pair connected")).collect())
}

/// `a`-`P`-`b` with `P` a path of length `ℓ - 2` in `pool`.
fn join(g: &Graph, a: usize, b: usize, pool: &VertexSet, ell: usize, cfg: &PathConfig) -> Option<Path> {
    let from = g.neighbors_in(a, pool);
    let to = g.neighbors_in(b, pool);
    let inner_cfg = PathConfig {
        epsilon: None,
        ..*cfg
    };
    let mid = find_connecting_path(g, &from, &to, pool, ell - 2, &inner_cfg).ok()?;
    let mut v = Vec::with_capacity(ell + 1);
    v.push(a);
    v.extend(mid.into_vertices());
    v.push(b);
    let path = Path(v);
    debug_assert!(path.validate(g).is_ok());
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;

    fn cfg(p: f64) -> PathConfig {
        PathConfig::practical(p)
    }

    #[test]
    fn good_vertex_in_complete_graph() {
        let g = Graph::complete(50);
        let u = VertexSet::range(50, 10, 20);
        let w = VertexSet::full(50);
        assert_eq!(find_good_vertex(&g, &w, &[&u], &cfg(49.0 / 50.0)), Ok(0));
    }

    #[test]
    fn no_good_vertex_in_edgeless_graph() {
        let g = Graph::edgeless(20);
        let u = VertexSet::range(20, 0, 5);
        let w = VertexSet::full(20);
        assert!(matches!(
            find_good_vertex(&g, &w, &[&u], &cfg(0.5)),
            Err(PathError::NoGoodVertex { .. })
        ));
    }

    #[test]
    fn connecting_path_in_complete_graph() {
        let g = Graph::complete(20);
        let a = VertexSet::from_ids(20, [0]);
        let b = VertexSet::from_ids(20, [1]);
        let c = VertexSet::range(20, 2, 10);
        let path = find_connecting_path(&g, &a, &b, &c, 3, &cfg(0.95)).unwrap();
        assert_eq!(path.vertices(), &[0, 2, 3, 1]);
    }

    #[test]
    fn unit_length_path_is_an_edge() {
        let g = Graph::complete(5);
        let a = VertexSet::from_ids(5, [3]);
        let b = VertexSet::from_ids(5, [4]);
        let path = find_connecting_path(&g, &a, &b, &VertexSet::empty(5), 1, &cfg(1.0)).unwrap();
        assert_eq!(path.vertices(), &[3, 4]);
    }

    #[test]
    fn book_cycles_in_complete_graph() {
        let g = Graph::complete(30);
        let all = VertexSet::full(30);
        let b4 = find_book_cycle(&g, &all, 4, 3, &cfg(29.0 / 30.0)).unwrap();
        assert_eq!(b4.spine.len(), 2);
        assert_eq!(b4.pages.len(), 3);
        b4.validate(&g).unwrap();
        let b6 = find_book_cycle(&g, &all, 6, 2, &cfg(29.0 / 30.0)).unwrap();
        assert_eq!(b6.spine.len(), 4);
        assert_eq!(b6.pages.len(), 2);
        b6.validate(&g).unwrap();
    }

    #[test]
    fn long_path_in_complete_graph() {
        let g = Graph::complete(100);
        let all = VertexSet::full(100);
        let path = greedy_long_path(&g, &all, 50, &cfg(0.5)).unwrap();
        assert_eq!(path.len(), 50);
        assert_eq!(path.vertices(), (0..=50).collect::<Vec<_>>().as_slice());
        let zero = greedy_long_path(&g, &all, 0, &cfg(0.5)).unwrap();
        assert_eq!(zero.vertices(), &[0]);
    }

    #[test]
    fn pairs_in_complete_graph() {
        let g = Graph::complete(40);
        let sys = PairSystem::new(vec![(0, 1)]).unwrap();
        let u = VertexSet::range(40, 2, 40);
        let paths = connect_pairs(&g, &sys, &u, 3, 0.5, &cfg(39.0 / 40.0)).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].len(), 3);
        assert_eq!((paths[0].first(), paths[0].last()), (0, 1));
        assert!(connect_pairs(&g, &PairSystem::default(), &u, 3, 0.5, &cfg(0.9)).unwrap().is_empty());
    }

    #[test]
    fn loops_become_cycles() {
        let g = sample_gnp(600, 0.3, 3);
        let sys = PairSystem::new(vec![(0, 0), (1, 2)]).unwrap();
        let u = VertexSet::range(600, 10, 600);
        let paths = connect_pairs(&g, &sys, &u, 4, 0.5, &cfg(0.3)).unwrap();
        assert!(paths[0].is_closed());
        for p in &paths {
            p.validate(&g).unwrap();
            assert_eq!(p.len(), 4);
        }
    }

    #[test]
    fn multiplicity_and_pool_checks() {
        assert_eq!(PairSystem::new(vec![(0, 0), (0, 1)]), Err(PathError::Multiplicity { vertex: 0 }));
        let g = Graph::complete(10);
        let sys = PairSystem::new(vec![(0, 1)]).unwrap();
        let u = VertexSet::full(10);
        assert_eq!(connect_pairs(&g, &sys, &u, 3, 0.5, &cfg(0.9)), Err(PathError::EndpointInPool { vertex: 0 }));
    }

    #[test]
    fn strict_mode_checks_sizes() {
        let g = sample_gnp(400, 0.3, 1);
        let params = JumbledParams::new(0.3, 40.0, 40.0 / (0.09 * 400.0), 0.5);
        let s = PathConfig::strict(&params);
        let a = VertexSet::range(400, 0, 5);
        let b = VertexSet::range(400, 5, 10);
        let c = VertexSet::range(400, 10, 400);
        assert!(matches!(
            find_connecting_path(&g, &a, &b, &c, 3, &s),
            Err(PathError::Precondition { .. })
        ));
    }
}
