//! Derandomised balanced signings and degree-preserving equipartitions.

use thiserror::Error;

use crate::config::Mode;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRows { row: usize, len: usize, expected: usize },
    #[error("matrix has no columns")]
    NoColumns,
    #[error("row {row} has |sum| = {sum} above the bound {bound}")]
    DiscrepancyBound { row: usize, sum: i64, bound: f64 },
    #[error("vertex {vertex} has deg(w, U) = {degree} < delta*p*|U| = {needed}")]
    LowDegree {
        vertex: usize,
        degree: usize,
        needed: f64,
    },
    #[error("U has {size} vertices, fewer than the {parts} parts requested")]
    TooSmall { size: usize, parts: usize },
    #[error("2k*g(n) = {slack} exceeds delta*p*|U|/(2s) = {margin}; the guarantee is out of reach at this n")]
    SlackTooLarge { slack: f64, margin: f64 },
    #[error("vertex {vertex} has deg = {degree} into part {part}, below the guaranteed {needed}")]
    Infeasible {
        vertex: usize,
        part: usize,
        degree: usize,
        needed: f64,
    },
}

/// Signs `ε_1, …, ε_n ∈ {-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ_j ε_j a_j`.
    pub fn dot(&self, row: &[bool]) -> i64 {
        self.0
            .iter()
            .zip(row)
            .filter(|(_, &a)| a)
            .map(|(&e, _)| i64::from(e))
            .sum()
    }
}

/// `sqrt(2 n ln(2N))` for an `N`-row, `n`-column instance, `N` taken as at
/// least `n`.
pub fn discrepancy_bound(rows: usize, cols: usize) -> f64 {
    let big = rows.max(cols) as f64;
    (2.0 * cols as f64 * (2.0 * big).ln()).sqrt()
}

/// Conditional expectations with the pessimistic estimator
/// `Σ_i 2cosh(λ S_i) cosh(λ)^{r_i}`, `S_i` the partial sum of row `i` and `r_i`
/// its unsigned entries. `column_rows(j, out)` lists the rows with `a_ij = 1`.
///
/// Each row keeps `e^{±λ S_i} cosh(λ)^{r_i}` separately; choosing `ε_j = +1`
/// is no worse exactly when the affected rows have `Σ (pos_i - neg_i) ≤ 0`.
fn signs_by_columns<F>(row_lens: &[usize], cols: usize, mut column_rows: F) -> (Vec<i8>, Vec<i64>)
where
    F: FnMut(usize, &mut Vec<usize>),
{
    let rows = row_lens.len();
    let big = rows.max(cols).max(1) as f64;
    let lambda = (2.0 * (2.0 * big).ln() / cols.max(1) as f64).sqrt();
    let ch = lambda.cosh();
    let (up, down) = (lambda.exp() / ch, (-lambda).exp() / ch);
    let mut pos: Vec<f64> = row_lens.iter().map(|&r| ch.powi(r as i32)).collect();
    let mut neg = pos.clone();
    let mut sums = vec![0i64; rows];
    let mut signs = Vec::with_capacity(cols);
    let mut buf = Vec::new();
    for j in 0..cols {
        buf.clear();
        column_rows(j, &mut buf);
        let bias: f64 = buf.iter().map(|&i| pos[i] - neg[i]).sum();
        let e: i8 = if bias <= 0.0 { 1 } else { -1 };
        let (fp, fn_) = if e > 0 { (up, down) } else { (down, up) };
        for &i in &buf {
            pos[i] *= fp;
            neg[i] *= fn_;
            sums[i] += i64::from(e);
        }
        signs.push(e);
    }
    (signs, sums)
}

/// Signs for a dense `0/1` matrix with `|Σ_j ε_j a_ij| ≤ sqrt(2n ln 2n)` on
/// every row (`n` columns, at most `n` rows). The bound is re-checked on
/// every call.
pub fn balanced_signs(rows: &[Vec<bool>]) -> Result<SignVector, PartitionError> {
    let cols = rows.first().map_or(0, Vec::len);
    for (row, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(PartitionError::RaggedRows {
                row,
                len: r.len(),
                expected: cols,
            });
        }
    }
    if cols == 0 {
        return Err(PartitionError::NoColumns);
    }
    let row_lens: Vec<usize> = rows.iter().map(|r| r.iter().filter(|&&a| a).count()).collect();
    let (signs, sums) = signs_by_columns(&row_lens, cols, |j, out| {
        out.extend((0..rows.len()).filter(|&i| rows[i][j]));
    });
    check_bound(&sums, rows.len(), cols)?;
    Ok(SignVector(signs))
}

fn check_bound(sums: &[i64], rows: usize, cols: usize) -> Result<(), PartitionError> {
    let bound = discrepancy_bound(rows, cols);
    match sums.iter().position(|&s| s.unsigned_abs() as f64 > bound) {
        Some(row) => Err(PartitionError::DiscrepancyBound {
            row,
            sum: sums[row],
            bound,
        }),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionOptions {
    pub mode: Mode,
    /// Each part must keep `factor · δ p |U_i|`; `1/2` is the textbook value.
    pub factor: f64,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions {
            mode: Mode::Strict,
            factor: 0.5,
        }
    }
}

impl PartitionOptions {
    pub fn practical() -> Self {
        PartitionOptions {
            mode: Mode::Practical,
            factor: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegreePartition {
    pub parts: Vec<VertexSet>,
    pub delta: f64,
    pub p: f64,
    pub factor: f64,
    /// `s` does not divide `|U|`; sizes differ by one.
    pub near_equal: bool,
    /// `min_{w,i} deg(w, U_i) - factor·δ p |U_i|`.
    pub min_margin: f64,
}

/// `g(n) = sqrt(2(n+1) ln(2n+1))`, the per-round imbalance of the signing.
pub fn round_slack(n: usize) -> f64 {
    let n = n as f64;
    (2.0 * (n + 1.0) * (2.0 * n + 1.0).ln()).sqrt()
}

/// Splits `U` into `s = 2^k` near-equal parts such that every `w ∈ W` keeps
/// `deg(w, U_i) ≥ factor · δ p |U_i|`.
///
/// Each round signs the current part with rows `N(w) ∩ part` for `w ∈ W` and
/// an all-ones row; the smaller side then takes lowest-id vertices from the
/// larger until the first half has `⌈|part|/2⌉`.
pub fn degree_preserving_partition(
    g: &Graph,
    u: &VertexSet,
    w: &VertexSet,
    k: u32,
    delta: f64,
    p: f64,
    opts: &PartitionOptions,
) -> Result<DegreePartition, PartitionError> {
    let s = 1usize << k;
    let size = u.len();
    if size < s {
        return Err(PartitionError::TooSmall { size, parts: s });
    }
    let whole = delta * p * size as f64;
    for v in w.iter() {
        let degree = g.deg_into(v, u);
        // absorbs round-off when delta was itself computed from min degree
        if (degree as f64) + 1e-9 < whole {
            return Err(PartitionError::LowDegree {
                vertex: v,
                degree,
                needed: whole,
            });
        }
    }
    if opts.mode.is_strict() {
        let slack = 2.0 * f64::from(k) * round_slack(g.n());
        let margin = delta * p * size as f64 / (2.0 * s as f64);
        if slack > margin {
            return Err(PartitionError::SlackTooLarge { slack, margin });
        }
    }

    let wv = w.to_vec();
    let mut row_of = vec![usize::MAX; g.n()];
    for (i, &v) in wv.iter().enumerate() {
        row_of[v] = i;
    }
    let mut parts = vec![u.clone()];
    for _ in 0..k {
        parts = parts
            .iter()
            .flat_map(|part| {
                let (a, b) = split(g, part, &wv, &row_of);
                [a, b]
            })
            .collect();
    }

    let mut min_margin = f64::INFINITY;
    for (i, part) in parts.iter().enumerate() {
        let needed = opts.factor * delta * p * part.len() as f64;
        for &v in &wv {
            let degree = g.deg_into(v, part);
            let margin = degree as f64 - needed;
            if margin < 0.0 {
                return Err(PartitionError::Infeasible {
                    vertex: v,
                    part: i,
                    degree,
                    needed,
                });
            }
            min_margin = min_margin.min(margin);
        }
    }
    Ok(DegreePartition {
        parts,
        delta,
        p,
        factor: opts.factor,
        near_equal: !size.is_multiple_of(s),
        min_margin,
    })
}

fn split(g: &Graph, part: &VertexSet, wv: &[usize], row_of: &[usize]) -> (VertexSet, VertexSet) {
    let cols = part.to_vec();
    let ones = wv.len();
    let mut row_lens: Vec<usize> = wv.iter().map(|&v| g.deg_into(v, part)).collect();
    row_lens.push(cols.len());
    let (signs, _) = signs_by_columns(&row_lens, cols.len(), |j, out| {
        out.extend(g.neighbors(cols[j]).filter_map(|v| {
            let r = row_of[v];
            (r != usize::MAX).then_some(r)
        }));
        out.push(ones);
    });
    let n = part.universe();
    let mut first = VertexSet::from_ids(n, cols.iter().zip(&signs).filter(|(_, &e)| e < 0).map(|(&v, _)| v));
    let mut second = part.difference(&first);
    let want = cols.len().div_ceil(2);
    let have = first.len();
    if have < want {
        for v in second.lowest(want - have).iter() {
            second.remove(v);
            first.insert(v);
        }
    } else if have > want {
        for v in first.lowest(have - want).iter() {
            first.remove(v);
            second.insert(v);
        }
    }
    (first, second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::sample_gnp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rows_sum_to_zero() {
        let rows = vec![vec![false; 8]; 3];
        let s = balanced_signs(&rows).unwrap();
        assert_eq!(s.len(), 8);
        assert!(rows.iter().all(|r| s.dot(r) == 0));
    }

    #[test]
    fn single_pair_cancels() {
        let s = balanced_signs(&[vec![true, true]]).unwrap();
        assert_eq!(s.dot(&[true, true]), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = balanced_signs(&[vec![true, false], vec![true]]).unwrap_err();
        assert_eq!(err, PartitionError::RaggedRows { row: 1, len: 1, expected: 2 });
    }

    #[test]
    fn random_square_matrix_meets_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let rows: Vec<Vec<bool>> = (0..64).map(|_| (0..64).map(|_| rng.gen_bool(0.5)).collect()).collect();
        let s = balanced_signs(&rows).unwrap();
        let bound = (128.0f64 * 128.0f64.ln()).sqrt();
        assert!((bound - 24.9).abs() < 0.05);
        for r in &rows {
            assert!((s.dot(r).abs() as f64) <= bound);
        }
    }

    #[test]
    fn complete_graph_halves() {
        let g = Graph::complete(200);
        let all = VertexSet::full(200);
        let part = degree_preserving_partition(&g, &all, &all, 1, 1.0, 199.0 / 200.0, &PartitionOptions::practical()).unwrap();
        assert_eq!(part.parts.iter().map(VertexSet::len).collect::<Vec<_>>(), vec![100, 100]);
        for v in 0..200 {
            for p in &part.parts {
                assert!(g.deg_into(v, p) >= 99);
            }
        }
    }

    #[test]
    fn odd_size_splits_four_three() {
        let g = Graph::complete(7);
        let all = VertexSet::full(7);
        let part = degree_preserving_partition(&g, &all, &VertexSet::empty(7), 1, 0.5, 1.0, &PartitionOptions::practical()).unwrap();
        assert_eq!(part.parts[0].len(), 4);
        assert_eq!(part.parts[1].len(), 3);
        assert!(part.near_equal);
    }

    #[test]
    fn gnp_four_way_recount() {
        let g = sample_gnp(4000, 0.2, 11);
        let all = VertexSet::full(4000);
        let part = degree_preserving_partition(&g, &all, &all, 2, 0.5, 0.2, &PartitionOptions::practical()).unwrap();
        assert_eq!(part.parts.len(), 4);
        let mut union = VertexSet::empty(4000);
        for p in &part.parts {
            assert_eq!(p.len(), 1000);
            assert!(union.is_disjoint(p));
            union.union_with(p);
            for v in 0..4000 {
                let d = (0..4000).filter(|&x| p.contains(x) && g.has_edge(v, x)).count();
                assert!(d as f64 >= 0.5 * 0.2 * 1000.0 / 2.0);
            }
        }
        assert_eq!(union, all);
    }

    #[test]
    fn strict_mode_reports_slack() {
        let g = sample_gnp(500, 0.2, 1);
        let all = VertexSet::full(500);
        let err = degree_preserving_partition(&g, &all, &all, 2, 0.5, 0.2, &PartitionOptions::default()).unwrap_err();
        assert!(matches!(err, PartitionError::SlackTooLarge { .. }));
    }

    #[test]
    fn precondition_names_vertex() {
        let g = Graph::cycle(10);
        let all = VertexSet::full(10);
        let err = degree_preserving_partition(&g, &all, &all, 1, 1.0, 0.5, &PartitionOptions::practical()).unwrap_err();
        assert!(matches!(err, PartitionError::LowDegree { vertex: 0, degree: 2, .. }));
    }
}
