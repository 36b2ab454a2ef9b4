use std::collections::HashMap;
use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::primes::{is_prime, legendre, pow_mod, sqrt_minus_one, sqrt_mod};
use super::TemplateError;
use crate::graph::{Graph, GraphBuilder};

type Mat = [u64; 4];

/// Cayley graph of `PSL(2, q)` or `PGL(2, q)` on the `p_R + 1` quaternion
/// generators.
#[derive(Clone, Debug)]
pub struct RamanujanGraph {
    pub graph: Graph,
    pub p_r: u64,
    pub q: u64,
    pub degree: usize,
    /// `p_R` is a non-residue mod `q`: the `PGL` variant, which is bipartite.
    pub bipartite: bool,
    elements: Vec<Mat>,
}

struct Group {
    q: u64,
    projective_general: bool,
}

impl Group {
    fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        let q = self.q;
        let m = |a: u64, b: u64| a * b % q;
        [
            (m(x[0], y[0]) + m(x[1], y[2])) % q,
            (m(x[0], y[1]) + m(x[1], y[3])) % q,
            (m(x[2], y[0]) + m(x[3], y[2])) % q,
            (m(x[2], y[1]) + m(x[3], y[3])) % q,
        ]
    }

    fn scale(&self, x: &Mat, s: u64) -> Mat {
        x.map(|a| a * s % self.q)
    }

    /// `PGL`: first nonzero entry 1. `PSL`: first nonzero entry in `[1, (q-1)/2]`.
    fn canon(&self, x: &Mat) -> Mat {
        let q = self.q;
        let lead = *x.iter().find(|&&a| a != 0).expect("invertible matrix");
        if self.projective_general {
            self.scale(x, pow_mod(lead, q - 2, q))
        } else if lead > (q - 1) / 2 {
            self.scale(x, q - 1)
        } else {
            *x
        }
    }

    fn key(&self, x: &Mat) -> u64 {
        x.iter().fold(0, |k, &a| k * self.q + a)
    }
}

/// Solutions of `a² + b² + c² + d² = p` with `a > 0` odd and `b, c, d` even,
/// in lexicographic order.
pub fn quaternion_generators(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let r = (p as f64).sqrt() as i64 + 1;
    let mut out = Vec::new();
    for a in (1..=r).step_by(2) {
        for b in (-r..=r).filter(|b| b % 2 == 0) {
            for c in (-r..=r).filter(|c| c % 2 == 0) {
                for d in (-r..=r).filter(|d| d % 2 == 0) {
                    if a * a + b * b + c * c + d * d == p {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// LPS graph for primes `p_R ≠ q`, both `≡ 1 (mod 4)`. Vertex ids follow
/// breadth-first order from the identity; `g ~ g·s`.
pub fn build_lps_graph(p_r: u64, q: u64) -> Result<RamanujanGraph, TemplateError> {
    for (name, v) in [("p_R", p_r), ("q", q)] {
        if !is_prime(v) || v % 4 != 1 {
            return Err(TemplateError::Parameter(format!("{name} = {v} must be a prime = 1 (mod 4)")));
        }
    }
    if p_r == q {
        return Err(TemplateError::Parameter("p_R and q must differ".into()));
    }
    if q > 1 << 16 {
        return Err(TemplateError::Parameter(format!("q = {q} too large for an explicit graph")));
    }
    let residue = legendre(p_r, q) == 1;
    let group = Group {
        q,
        projective_general: !residue,
    };
    let i = sqrt_minus_one(q);
    let md = |x: i64| x.rem_euclid(q as i64) as u64;
    let inv_root = if residue {
        let r = sqrt_mod(p_r, q).expect("residue has a root");
        pow_mod(r, q - 2, q)
    } else {
        1
    };
    let sols = quaternion_generators(p_r);
    if sols.len() as u64 != p_r + 1 {
        return Err(TemplateError::Parameter(format!(
            "found {} quaternion generators, expected {}",
            sols.len(),
            p_r + 1
        )));
    }
    let gens: Vec<Mat> = sols
        .iter()
        .map(|&[a, b, c, d]| {
            let ii = i as i64;
            let m = [md(a + b * ii), md(c + d * ii), md(-c + d * ii), md(a - b * ii)];
            group.canon(&group.scale(&m, inv_root))
        })
        .collect();

    let identity = group.canon(&[1, 0, 0, 1]);
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut elements = vec![identity];
    ids.insert(group.key(&identity), 0);
    let mut nbrs: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let g = elements[v];
        let mut row = Vec::with_capacity(gens.len());
        for s in &gens {
            let h = group.canon(&group.mul(&g, s));
            let next = elements.len();
            let id = *ids.entry(group.key(&h)).or_insert_with(|| {
                elements.push(h);
                queue.push_back(next);
                next
            });
            row.push(id);
        }
        if nbrs.len() <= v {
            nbrs.resize(v + 1, Vec::new());
        }
        nbrs[v] = row;
    }
    let n = elements.len();
    let expected = (q * q * q - q) / if residue { 2 } else { 1 };
    if n as u64 != expected {
        return Err(TemplateError::Parameter(format!(
            "generated group has {n} elements, expected {expected}"
        )));
    }
    let mut b = GraphBuilder::new(n);
    for (v, row) in nbrs.iter().enumerate() {
        for &w in row {
            if w == v {
                return Err(TemplateError::Parameter(format!("generator fixes vertex {v}")));
            }
            if v < w {
                b.add_edge(v, w)
                    .map_err(|e| TemplateError::Parameter(format!("generators collide: {e}")))?;
            }
        }
    }
    let graph = b.build();
    let degree = (p_r + 1) as usize;
    if let Some(v) = (0..n).find(|&v| graph.degree(v) != degree) {
        return Err(TemplateError::Parameter(format!(
            "vertex {v} has degree {}, expected {degree}",
            graph.degree(v)
        )));
    }
    Ok(RamanujanGraph {
        graph,
        p_r,
        q,
        degree,
        bipartite: !residue,
        elements,
    })
}

impl RamanujanGraph {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Full adjacency spectrum, ascending.
    ///
    /// Left multiplication by `u = [[1,1],[0,1]]` is a fixed-point-free graph
    /// automorphism of order `q`. On each character `k` of `⟨u⟩` the adjacency
    /// restricts to the Hermitian matrix
    /// `M_k[r][r'] = Σ_{u^x r' ∈ N(r)} ω^{kx}` over orbit representatives,
    /// and the spectrum is the union of the `q` block spectra.
    pub fn spectrum(&self) -> Vec<f64> {
        let q = self.q;
        let group = Group {
            q,
            projective_general: self.bipartite,
        };
        let ids: HashMap<u64, usize> = self.elements.iter().enumerate().map(|(i, m)| (group.key(m), i)).collect();
        let shift = [1, 1, 0, 1];
        let n = self.n();
        let mut orbit = vec![(usize::MAX, 0usize); n];
        let mut reps = Vec::new();
        for v in 0..n {
            if orbit[v].0 != usize::MAX {
                continue;
            }
            let r = reps.len();
            reps.push(v);
            let mut cur = self.elements[v];
            for x in 0..q as usize {
                let id = ids[&group.key(&cur)];
                orbit[id] = (r, x);
                cur = group.canon(&group.mul(&shift, &cur));
            }
        }
        let size = reps.len();
        let mut eig = Vec::with_capacity(n);
        for k in 0..q as usize {
            let mut m = DMatrix::<Complex64>::zeros(size, size);
            for (ri, &r) in reps.iter().enumerate() {
                for w in self.graph.neighbors(r) {
                    let (rj, x) = orbit[w];
                    let angle = 2.0 * std::f64::consts::PI * ((k * x) % q as usize) as f64 / q as f64;
                    m[(ri, rj)] += Complex64::from_polar(1.0, angle);
                }
            }
            eig.extend(m.symmetric_eigenvalues().iter().copied());
        }
        eig.sort_by(f64::total_cmp);
        eig
    }

    /// Largest `|λ|` after removing `d` (and `-d` when bipartite).
    pub fn nontrivial_bound(&self) -> f64 {
        nontrivial_abs(self.spectrum(), self.degree as f64, self.bipartite)
    }
}

/// Drops one eigenvalue nearest `d` (and one nearest `-d` when bipartite) and
/// returns the largest remaining absolute value.
pub fn nontrivial_abs(mut spectrum: Vec<f64>, d: f64, bipartite: bool) -> f64 {
    let mut drop_nearest = |target: f64| {
        if let Some(k) = (0..spectrum.len()).min_by(|&a, &b| (spectrum[a] - target).abs().total_cmp(&(spectrum[b] - target).abs())) {
            spectrum.swap_remove(k);
        }
    };
    drop_nearest(d);
    if bipartite {
        drop_nearest(-d);
    }
    spectrum.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_counts() {
        assert_eq!(quaternion_generators(5).len(), 6);
        assert_eq!(quaternion_generators(13).len(), 14);
        assert_eq!(quaternion_generators(17).len(), 18);
        for [a, b, c, d] in quaternion_generators(13) {
            assert!(a > 0 && a % 2 == 1 && b % 2 == 0 && c % 2 == 0 && d % 2 == 0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_lps_graph(5, 5).is_err());
        assert!(build_lps_graph(7, 13).is_err());
        assert!(build_lps_graph(5, 15).is_err());
    }

    #[test]
    fn block_spectrum_matches_dense_solve() {
        let g = build_lps_graph(5, 13).unwrap();
        let n = g.n();
        assert_eq!(n, 2184);
        assert!(g.bipartite);
        let dense = DMatrix::from_fn(n, n, |a, b| f64::from(u8::from(g.graph.has_edge(a, b))));
        let mut want: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(f64::total_cmp);
        let got = g.spectrum();
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }
}
