//! Segment budget for the long-cycle phases.
//!
//! Row `i` assigns `q_{i1}` absorber segments, `q_{i2}` low-degree vertices
//! and `q_{i3}` spare vertices to cycle `i`, subject to
//! `6q_{i1} + 3q_{i2} + 3q_{i3} ≤ l_i - 10`.

use thiserror::Error;

/// Slack every cycle keeps for its two end connections and the greedy path.
pub const ROW_RESERVE: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BudgetError {
    #[error("cycle {index} has length {length}, below the minimum {min}")]
    TooShort { index: usize, length: usize, min: usize },
    #[error("segment column needs {need} pairs of 3-units, rows offer {have} (deficit {deficit})")]
    Segments { need: usize, have: usize, deficit: usize },
    #[error("budget needs {need} 3-units, rows offer {have} (deficit {deficit})")]
    Units { need: usize, have: usize, deficit: usize },
}

/// The matrix `(q_{i1}, q_{i2}, q_{i3})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentBudget {
    pub rows: Vec<[usize; 3]>,
}

impl SegmentBudget {
    pub fn column_sums(&self) -> [usize; 3] {
        self.rows.iter().fold([0; 3], |acc, r| [acc[0] + r[0], acc[1] + r[1], acc[2] + r[2]])
    }

    /// Path lengths of the four pieces of cycle `i`: the first-phase chain,
    /// the greedy path, the spare-vertex connections and the two end links.
    pub fn pieces(&self, i: usize, length: usize) -> [usize; 4] {
        let [q1, q2, q3] = self.rows[i];
        [6 * q1 + 3 * q2 + 3, length - 6 * q1 - 3 * q2 - 3 * q3 - 9, 3 * q3, 6]
    }

    /// Row and column constraints for `lengths` and targets `(r, |V₀|, m')`.
    pub fn satisfies(&self, lengths: &[usize], targets: [usize; 3]) -> bool {
        self.rows.len() == lengths.len()
            && self.column_sums() == targets
            && self
                .rows
                .iter()
                .zip(lengths)
                .all(|(q, &l)| l >= ROW_RESERVE && 6 * q[0] + 3 * q[1] + 3 * q[2] <= l - ROW_RESERVE)
    }
}

/// Water-filling in row order: `q_{i1}` up to `⌊(l_i - 10)/6⌋`, then `q_{i2}`
/// and `q_{i3}` in the remaining row slack.
///
/// Counting in units of 3, row `i` offers `c_i = ⌊(l_i - 10)/3⌋`; a plan
/// exists iff `Σ⌊c_i/2⌋ ≥ r` and `Σc_i ≥ 2r + v₀ + m'`, and then this fill
/// finds one.
pub fn plan_segment_budget(lengths: &[usize], r: usize, v0: usize, m_prime: usize) -> Result<SegmentBudget, BudgetError> {
    let mut caps = Vec::with_capacity(lengths.len());
    for (index, &l) in lengths.iter().enumerate() {
        if l < ROW_RESERVE {
            return Err(BudgetError::TooShort {
                index,
                length: l,
                min: ROW_RESERVE,
            });
        }
        caps.push((l - ROW_RESERVE) / 3);
    }
    let pairs: usize = caps.iter().map(|c| c / 2).sum();
    if pairs < r {
        return Err(BudgetError::Segments {
            need: r,
            have: pairs,
            deficit: r - pairs,
        });
    }
    let units: usize = caps.iter().sum();
    let need = 2 * r + v0 + m_prime;
    if units < need {
        return Err(BudgetError::Units {
            need,
            have: units,
            deficit: need - units,
        });
    }
    let (mut r, mut v0, mut m_prime) = (r, v0, m_prime);
    let rows = caps
        .iter()
        .map(|&c| {
            let q1 = r.min(c / 2);
            r -= q1;
            let q2 = v0.min(c - 2 * q1);
            v0 -= q2;
            let q3 = m_prime.min(c - 2 * q1 - q2);
            m_prime -= q3;
            [q1, q2, q3]
        })
        .collect();
    let budget = SegmentBudget { rows };
    debug_assert_eq!((r, v0, m_prime), (0, 0, 0));
    for (i, &l) in lengths.iter().enumerate() {
        assert_eq!(budget.pieces(i, l).iter().sum::<usize>(), l, "length arithmetic broken on row {i}");
    }
    Ok(budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row() {
        let b = plan_segment_budget(&[100], 5, 3, 4).unwrap();
        assert_eq!(b.rows, vec![[5, 3, 4]]);
        assert_eq!(6 * 5 + 3 * 3 + 3 * 4, 51);
        assert!(b.satisfies(&[100], [5, 3, 4]));
    }

    #[test]
    fn zero_targets() {
        let b = plan_segment_budget(&[40, 50, 60], 0, 0, 0).unwrap();
        assert!(b.rows.iter().all(|r| *r == [0, 0, 0]));
    }

    #[test]
    fn two_short_rows_are_infeasible() {
        let err = plan_segment_budget(&[16, 16], 3, 0, 0).unwrap_err();
        assert_eq!(err, BudgetError::Segments { need: 3, have: 2, deficit: 1 });
    }

    #[test]
    fn unit_deficit_is_named() {
        assert!(plan_segment_budget(&[31], 1, 5, 0).is_ok());
        let err = plan_segment_budget(&[31], 1, 6, 0).unwrap_err();
        assert_eq!(err, BudgetError::Units { need: 8, have: 7, deficit: 1 });
    }
}
