//! Chains of `K₄⁻` copies and their use as triangle absorbers.
//!
//! Copy `i` of an `ℓ`-chain has joints `j_i, j_{i+1}` (its two degree-2
//! vertices) and a middle edge `x_i y_i`. Deleting joint `j_k` leaves the
//! triangles `j_i x_i y_i` for `i < k` and `x_i y_i j_{i+1}` for `i ≥ k`.

use thiserror::Error;

use crate::config::{GateError, JumbledParams, Mode};
use crate::graph::{Graph, VertexSet};

/// Triangle searches at the `1/16` constant of the rebalancing step.
const LOW_DEGREE_EPS: f64 = 1.0 / 16.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("{what} not found")]
    NotFound { what: &'static str },
    #[error("strict gate: {0}")]
    Gate(#[from] GateError),
    #[error("invalid chain input: {0}")]
    Invalid(String),
    #[error("{stage}: {detail}")]
    Stage { stage: &'static str, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    joints: Vec<usize>,
    middles: Vec<[usize; 2]>,
}

impl Chain {
    pub fn from_parts(joints: Vec<usize>, middles: Vec<[usize; 2]>) -> Result<Self, ChainError> {
        if middles.is_empty() || joints.len() != middles.len() + 1 {
            return Err(ChainError::Invalid(format!(
                "{} joints for {} copies",
                joints.len(),
                middles.len()
            )));
        }
        Ok(Chain { joints, middles })
    }

    /// Number `ℓ_c` of `K₄⁻` copies.
    pub fn length(&self) -> usize {
        self.middles.len()
    }

    /// The `ℓ_c + 1` removable vertices, in chain order.
    pub fn removable(&self) -> &[usize] {
        &self.joints
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.joints.clone();
        v.extend(self.middles.iter().flatten());
        v
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::with_capacity(5 * self.length());
        for (i, &[x, y]) in self.middles.iter().enumerate() {
            let (a, b) = (self.joints[i], self.joints[i + 1]);
            e.extend([(a, x), (a, y), (x, y), (x, b), (y, b)]);
        }
        e
    }

    /// Triangle-factor of the chain minus its `k`-th removable vertex.
    pub fn factor_without(&self, k: usize) -> Vec<[usize; 3]> {
        self.middles
            .iter()
            .enumerate()
            .map(|(i, &[x, y])| if i < k { [self.joints[i], x, y] } else { [x, y, self.joints[i + 1]] })
            .collect()
    }

    /// Index of `v` among the removable vertices.
    pub fn removable_index(&self, v: usize) -> Option<usize> {
        self.joints.iter().position(|&j| j == v)
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ChainError> {
        let v = self.vertices();
        let set = VertexSet::from_ids(g.n(), v.iter().copied());
        if set.len() != v.len() {
            return Err(ChainError::Invalid("repeated vertex".into()));
        }
        match self.edges().into_iter().find(|&(a, b)| !g.has_edge(a, b)) {
            Some((a, b)) => Err(ChainError::Invalid(format!("missing edge {a}-{b}"))),
            None => Ok(()),
        }
    }
}

/// An `ℓ_c`-chain avoiding `forbidden`, grown by depth-first search: each
/// step picks an edge `xy` in the common neighbourhood of the current joint
/// and a new joint adjacent to both, backtracking on dead ends within
/// `budget` expansions.
pub fn build_chain(g: &Graph, len: usize, forbidden: &VertexSet, budget: usize) -> Result<Chain, ChainError> {
    if len == 0 {
        return Err(ChainError::Invalid("a chain has at least one copy of K4-".into()));
    }
    let n = g.n();
    let mut free = VertexSet::full(n).difference(forbidden);
    if free.len() < 3 * len + 1 {
        return Err(ChainError::NotFound { what: "room for the chain" });
    }
    struct Search<'a> {
        g: &'a Graph,
        len: usize,
        left: usize,
        joints: Vec<usize>,
        middles: Vec<[usize; 2]>,
    }
    impl Search<'_> {
        fn grow(&mut self, free: &mut VertexSet) -> bool {
            if self.middles.len() == self.len {
                return true;
            }
            let a = *self.joints.last().expect("started");
            let na = self.g.neighbors_in(a, free);
            for x in na.iter() {
                let nax = self.g.neighbors_in(x, &na);
                for y in nax.iter().filter(|&y| y > x) {
                    let nxy = self.g.neighbors_in(y, &self.g.neighbors_in(x, free));
                    for b in nxy.iter() {
                        if self.left == 0 {
                            return false;
                        }
                        self.left -= 1;
                        for v in [x, y, b] {
                            free.remove(v);
                        }
                        self.joints.push(b);
                        self.middles.push([x, y]);
                        if self.grow(free) {
                            return true;
                        }
                        self.joints.pop();
                        self.middles.pop();
                        for v in [x, y, b] {
                            free.insert(v);
                        }
                    }
                }
            }
            false
        }
    }
    let mut search = Search {
        g,
        len,
        left: budget,
        joints: Vec::new(),
        middles: Vec::new(),
    };
    for start in free.clone().iter() {
        if search.left == 0 {
            break;
        }
        free.remove(start);
        search.joints = vec![start];
        if search.grow(&mut free) {
            let chain = Chain {
                joints: search.joints,
                middles: search.middles,
            };
            debug_assert!(chain.validate(g).is_ok());
            return Ok(chain);
        }
        free.insert(start);
    }
    Err(ChainError::NotFound { what: "chain" })
}

/// First triangle `(x, y, z)` with `x, y, z` removable in `a, b, c`
/// respectively, enumerating each chain's removable vertices by id.
pub fn find_traversing_triangle(g: &Graph, a: &Chain, b: &Chain, c: &Chain) -> Result<[usize; 3], ChainError> {
    let n = g.n();
    let sets: Vec<VertexSet> = [a, b, c].iter().map(|d| VertexSet::from_ids(n, d.vertices())).collect();
    if !sets[0].is_disjoint(&sets[1]) || !sets[0].is_disjoint(&sets[2]) || !sets[1].is_disjoint(&sets[2]) {
        return Err(ChainError::Invalid("chains are not disjoint".into()));
    }
    let rb = VertexSet::from_ids(n, b.removable().iter().copied());
    let rc = VertexSet::from_ids(n, c.removable().iter().copied());
    let mut ra = a.removable().to_vec();
    ra.sort_unstable();
    for x in ra {
        let nc = g.neighbors_in(x, &rc);
        for y in g.neighbors_in(x, &rb).iter() {
            if let Some(z) = g.first_neighbor_in(y, &nc) {
                return Ok([x, y, z]);
            }
        }
    }
    Err(ChainError::NotFound { what: "traversing triangle" })
}

#[derive(Clone, Debug)]
pub struct RebalanceOptions {
    pub mode: Mode,
    /// Expansions allowed per chain search.
    pub chain_budget: usize,
}

impl Default for RebalanceOptions {
    fn default() -> Self {
        RebalanceOptions {
            mode: Mode::Strict,
            chain_budget: 100_000,
        }
    }
}

/// `ℓ`-chains `D'_1 … D'_t` split into four groups, and `2t` half-length
/// chains `D_1 … D_{2t}` in `W` that can always be completed to a
/// triangle-factor by some of the `D'_i`.
#[derive(Clone, Debug)]
pub struct Rebalanced {
    pub long: Vec<Chain>,
    pub half: Vec<Chain>,
    /// Indices into `long`: group `g` holds the chains with index `≡ g (mod 4)`.
    pub groups: [Vec<usize>; 4],
    threshold: f64,
    strict: bool,
}

/// A triangle-factor on `⋃_{i∈L} V(D_i) ∪ ⋃_{i∈L'} V(D'_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCompletion {
    pub l_prime: Vec<usize>,
    pub triangles: Vec<[usize; 3]>,
}

/// Builds the `2t` half-chains inside `W`, avoiding vertices with few
/// neighbours among the removable vertices of the third or fourth group.
pub fn rebalance_chains(
    g: &Graph,
    chains: &[Chain],
    w: &VertexSet,
    params: &JumbledParams,
    opts: &RebalanceOptions,
) -> Result<Rebalanced, ChainError> {
    let n = g.n();
    let t = chains.len();
    let Some(ell) = chains.first().map(Chain::length) else {
        return Err(ChainError::Invalid("no chains given".into()));
    };
    if chains.iter().any(|c| c.length() != ell) {
        return Err(ChainError::Invalid("chains of different lengths".into()));
    }
    if ell % 2 != 0 {
        return Err(GateError::ChainParity { ell }.into());
    }
    let mut taken = VertexSet::empty(n);
    for c in chains {
        c.validate(g)?;
        for v in c.vertices() {
            if !taken.insert(v) {
                return Err(ChainError::Invalid(format!("vertex {v} shared by two chains")));
            }
        }
    }
    if !w.is_disjoint(&taken) {
        return Err(ChainError::Invalid("W meets the given chains".into()));
    }
    let strict = opts.mode.is_strict();
    let mass = t * (ell + 1);
    if strict {
        if t < crate::config::STRICT_MIN_CHAINS {
            return Err(GateError::ChainCount { t }.into());
        }
        let low = 400.0 * params.lambda / (params.p * params.p);
        if (mass as f64) < low {
            return Err(GateError::ChainMassLow { mass, bound: low }.into());
        }
        let high = n as f64 / 24.0;
        if mass as f64 > high {
            return Err(GateError::ChainMassHigh { mass, bound: high }.into());
        }
        if (w.len() as f64) < n as f64 / 4.0 {
            return Err(GateError::Size {
                what: "|W| >= n/4",
                need: n as f64 / 4.0,
                have: w.len() as f64,
            }
            .into());
        }
    }

    let mut groups: [Vec<usize>; 4] = Default::default();
    for i in 0..t {
        groups[i % 4].push(i);
    }
    let threshold = LOW_DEGREE_EPS * params.p * (t * ell) as f64;
    let removable_of = |ix: &[usize]| VertexSet::from_ids(n, ix.iter().flat_map(|&i| chains[i].removable().iter().copied()));
    let (r3, r4) = (removable_of(&groups[2]), removable_of(&groups[3]));
    let mut forbidden = VertexSet::full(n).difference(w);
    for v in w.iter() {
        if (g.deg_into(v, &r3) as f64) < threshold || (g.deg_into(v, &r4) as f64) < threshold {
            forbidden.insert(v);
        }
    }
    let mut half = Vec::with_capacity(2 * t);
    for _ in 0..2 * t {
        let c = build_chain(g, ell / 2, &forbidden, opts.chain_budget).map_err(|e| ChainError::Stage {
            stage: "half chains",
            detail: format!("chain {} of {}: {e}", half.len() + 1, 2 * t),
        })?;
        for v in c.vertices() {
            forbidden.insert(v);
        }
        half.push(c);
    }
    Ok(Rebalanced {
        long: chains.to_vec(),
        half,
        groups,
        threshold,
        strict,
    })
}

impl Rebalanced {
    /// Completes the half-chains in `l` to a triangle-factor: traversing
    /// triangles among them until `t/8` remain, then each remaining one is
    /// matched with one long chain from each of groups 1 and 2 while degrees
    /// allow, and the rest with groups 3 and 4.
    pub fn complete(&self, g: &Graph, l: &[usize]) -> Result<ChainCompletion, ChainError> {
        let n = g.n();
        let t = self.long.len();
        let mut active: Vec<usize> = l.to_vec();
        active.sort_unstable();
        active.dedup();
        if let Some(&i) = active.iter().find(|&&i| i >= self.half.len()) {
            return Err(ChainError::Invalid(format!("half-chain index {i} out of range")));
        }
        let mut triangles = Vec::new();
        let mut l_prime = Vec::new();
        let emit = |tri: [usize; 3], owners: [&Chain; 3], triangles: &mut Vec<[usize; 3]>| {
            triangles.push(tri);
            for (v, c) in tri.into_iter().zip(owners) {
                triangles.extend(c.factor_without(c.removable_index(v).expect("removable")));
            }
        };

        // traversing triangles among the half-chains
        let mut owner = vec![usize::MAX; n];
        for &i in &active {
            for &v in self.half[i].removable() {
                owner[v] = i;
            }
        }
        while active.len() as f64 > t as f64 / 8.0 && active.len() >= 3 {
            let rem = VertexSet::from_ids(n, active.iter().flat_map(|&i| self.half[i].removable().iter().copied()));
            let hit = rem.iter().find_map(|x| {
                let nx = g.neighbors_in(x, &rem);
                nx.iter().filter(|&y| owner[y] != owner[x]).find_map(|y| {
                    g.neighbors_in(y, &nx)
                        .iter()
                        .find(|&z| owner[z] != owner[x] && owner[z] != owner[y])
                        .map(|z| [x, y, z])
                })
            });
            let Some(tri) = hit else {
                if self.strict {
                    return Err(ChainError::NotFound {
                        what: "triangle traversing three half-chains",
                    });
                }
                break;
            };
            let ix = tri.map(|v| owner[v]);
            emit(tri, ix.map(|i| &self.half[i]), &mut triangles);
            for i in ix {
                for &v in self.half[i].removable() {
                    owner[v] = usize::MAX;
                }
            }
            active.retain(|i| !ix.contains(i));
        }

        // matching against the long chains, two groups at a time
        let mut free_long = vec![true; t];
        for (pair, threshold) in [([0, 1], self.threshold), ([2, 3], 0.0)] {
            loop {
                let rem = |gi: usize| {
                    VertexSet::from_ids(
                        n,
                        self.groups[gi]
                            .iter()
                            .filter(|&&i| free_long[i])
                            .flat_map(|&i| self.long[i].removable().iter().copied()),
                    )
                };
                let (ra, rb) = (rem(pair[0]), rem(pair[1]));
                let hit = active.iter().find_map(|&h| {
                    self.half[h].removable().iter().find_map(|&v| {
                        let (na, nb) = (g.neighbors_in(v, &ra), g.neighbors_in(v, &rb));
                        if (na.len() as f64) <= threshold || (nb.len() as f64) <= threshold {
                            return None;
                        }
                        na.iter().find_map(|a| g.first_neighbor_in(a, &nb).map(|b| (h, [v, a, b])))
                    })
                });
                let Some((h, tri)) = hit else {
                    break;
                };
                let la = self.long_owner(tri[1]);
                let lb = self.long_owner(tri[2]);
                emit(tri, [&self.half[h], &self.long[la], &self.long[lb]], &mut triangles);
                free_long[la] = false;
                free_long[lb] = false;
                l_prime.extend([la, lb]);
                active.retain(|&i| i != h);
            }
        }
        if !active.is_empty() {
            return Err(ChainError::Stage {
                stage: "chain matching",
                detail: format!("{} half-chains left unmatched", active.len()),
            });
        }
        l_prime.sort_unstable();
        Ok(ChainCompletion { l_prime, triangles })
    }

    fn long_owner(&self, v: usize) -> usize {
        self.long
            .iter()
            .position(|c| c.removable().contains(&v))
            .expect("vertex is removable in some long chain")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::exact_triangle_factor;

    #[test]
    fn one_chain_on_k4() {
        let g = Graph::complete(4);
        let c = build_chain(&g, 1, &VertexSet::empty(4), 1000).unwrap();
        assert_eq!(c.removable(), &[0, 3]);
        assert_eq!(c.vertices().len(), 4);
        for k in 0..2 {
            let rest: Vec<usize> = c.vertices().into_iter().filter(|&v| v != c.removable()[k]).collect();
            assert!(exact_triangle_factor(&g, &rest).is_some());
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        let g = Graph::complete(4);
        assert!(matches!(build_chain(&g, 0, &VertexSet::empty(4), 10), Err(ChainError::Invalid(_))));
    }

    #[test]
    fn factor_without_covers_the_rest() {
        let g = Graph::complete(30);
        let c = build_chain(&g, 4, &VertexSet::empty(30), 1000).unwrap();
        for k in 0..=4 {
            let f = c.factor_without(k);
            let mut covered: Vec<usize> = f.iter().flatten().copied().collect();
            covered.sort_unstable();
            let mut want: Vec<usize> = c.vertices().into_iter().filter(|&v| v != c.removable()[k]).collect();
            want.sort_unstable();
            assert_eq!(covered, want);
            assert!(f.iter().all(|t| g.has_edge(t[0], t[1]) && g.has_edge(t[1], t[2]) && g.has_edge(t[0], t[2])));
        }
    }

    #[test]
    fn odd_length_is_a_gate() {
        let g = Graph::complete(12);
        let c = build_chain(&g, 1, &VertexSet::empty(12), 100).unwrap();
        let err = rebalance_chains(
            &g,
            &[c],
            &VertexSet::range(12, 6, 12),
            &JumbledParams::new(1.0, 0.0, 0.0, 1.0),
            &RebalanceOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, ChainError::Gate(GateError::ChainParity { ell: 1 }));
    }
}
