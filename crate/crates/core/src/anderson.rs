//! Algebraic shadows of Anderson self-duality of Tmf1(3): the Serre pairing
//! on the weighted projective line P(1,3), the dual-cell correspondence of
//! the slice cells, and the universal-coefficient sequence on homotopy.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::grading::Degree;
use crate::group::FGAbelianGroup;
use crate::slice::{pi_compactified, CellKind, SliceCell};

#[derive(Debug, Error)]
pub enum AndersonError {
    #[error("pairing matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
}

/// Shift of the self-duality `I Tmf1(3) = S^{5+2rho} Tmf1(3)`.
pub const DUALITY_SHIFT: Degree = Degree { a: 7, b: 2 };

/// `HZ* = S^{4-2rho} HZ`.
pub const DUAL_COEFFICIENT_SHIFT: Degree = Degree { a: 2, b: -2 };

/// `H^0(O(k)) x H^1(O(-4-k)) -> H^1(O(-4))`, read as the coefficient of
/// `D = 1/(a1 a3)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingMatrix {
    pub k: i64,
    /// `(i, j)` for `a1^i a3^j`.
    pub rows: Vec<(i64, i64)>,
    /// `(i, j)` for `1/(a1^i a3^j)`.
    pub cols: Vec<(i64, i64)>,
    pub entries: Vec<Vec<i64>>,
}

fn exponents(weight: i64, min: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let mut j = min;
    while weight - 3 * j >= min {
        out.push((weight - 3 * j, j));
        j += 1;
    }
    out.sort();
    out
}

pub fn serre_pairing(k: i64) -> PairingMatrix {
    let rows = if k < 0 { vec![] } else { exponents(k, 0) };
    let cols = if k < 0 { vec![] } else { exponents(k + 4, 1) };
    let entries = rows
        .iter()
        .map(|&(i, j)| cols.iter().map(|&(p, q)| i64::from((i - p, j - q) == (-1, -1))).collect())
        .collect();
    PairingMatrix { k, rows, cols, entries }
}

/// Fraction-free determinant.
fn bareiss(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Unimodular over `Z[1/3]`: determinant `±3^e`.
pub fn certify_perfect(m: &PairingMatrix) -> Result<bool, AndersonError> {
    if m.entries.len() != m.cols.len() || m.rows.len() != m.cols.len() || m.entries.iter().any(|r| r.len() != m.cols.len())
    {
        return Err(AndersonError::NotSquare(m.rows.len(), m.cols.len()));
    }
    let mut d = bareiss(&m.entries).abs();
    while d != 0 && d % 3 == 0 {
        d /= 3;
    }
    Ok(d == 1)
}

/// Partner of a cell under the duality: `P` at `|P|` goes to the cell at
/// `-|P| - 5 - 2rho` with `HZ*` coefficients, which is `-|P| - 4rho - 1`
/// with `HZ` coefficients.
pub fn dual_cell(cell: &SliceCell) -> SliceCell {
    match cell.kind {
        CellKind::Positive => SliceCell::negative(cell.g, cell.h),
        CellKind::Negative => SliceCell::positive(cell.g, cell.h),
    }
}

/// Dimension of the dual cell in `HZ` form, computed from the shifts alone.
pub fn dual_dimension(cell: &SliceCell) -> Degree {
    match cell.kind {
        CellKind::Positive => Degree::new(0, 0) - cell.dimension - DUALITY_SHIFT + DUAL_COEFFICIENT_SHIFT,
        CellKind::Negative => Degree::new(0, 0) - (cell.dimension - DUAL_COEFFICIENT_SHIFT) - DUALITY_SHIFT,
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DualCellReport {
    pub cells: usize,
    pub matched: usize,
    pub unmatched: Vec<String>,
    /// Cells whose partner's dimension disagrees with the shift formula.
    pub dimension_errors: Vec<String>,
    pub involution: bool,
}

impl DualCellReport {
    pub fn passed(&self) -> bool {
        self.unmatched.is_empty() && self.dimension_errors.is_empty() && self.involution
    }
}

pub fn dual_cell_check(cells: &[SliceCell]) -> DualCellReport {
    let mut counts: BTreeMap<(CellKind, Degree), usize> = BTreeMap::new();
    for c in cells {
        *counts.entry((c.kind, c.dimension)).or_default() += 1;
    }
    let mut report = DualCellReport { cells: cells.len(), involution: true, ..Default::default() };
    let mut used: BTreeMap<(CellKind, Degree), usize> = BTreeMap::new();
    for c in cells {
        let d = dual_cell(c);
        if d.dimension != dual_dimension(c) {
            report.dimension_errors.push(format!("{} at {}", c.label(), c.dimension));
        }
        if dual_cell(&d) != *c {
            report.involution = false;
        }
        let key = (d.kind, d.dimension);
        let have = counts.get(&key).copied().unwrap_or(0);
        let u = used.entry(key).or_default();
        if *u < have {
            *u += 1;
            report.matched += 1;
        } else {
            report.unmatched.push(format!("{} at {}", c.label(), c.dimension));
        }
    }
    report
}

/// One stem of the universal-coefficient check
/// `0 -> Ext(pi_{-n-1}) -> pi_{n-9} -> Hom(pi_{-n}) -> 0`.
#[derive(Clone, Debug, Serialize)]
pub struct UctRow {
    pub n: i64,
    pub predicted: FGAbelianGroup,
    pub actual: FGAbelianGroup,
    pub holds: bool,
}

/// Underlying shift of the duality.
pub fn underlying_shift() -> i64 {
    DUALITY_SHIFT.underlying_dimension()
}

pub fn uct_shadow(lo: i64, hi: i64) -> Vec<UctRow> {
    let shift = underlying_shift();
    (lo..=hi)
        .map(|n| {
            let predicted = pi_compactified(-n).hom_to_ground().direct_sum(&pi_compactified(-n - 1).ext_to_ground());
            let actual = pi_compactified(n - shift);
            let holds = predicted.same_group(&actual);
            UctRow { n, predicted, actual, holds }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingRow {
    pub k: i64,
    pub size: usize,
    pub perfect: bool,
    /// Rows match `pi_{2k}` and columns match `pi_{-2k-9}`.
    pub ranks_agree: bool,
}

pub fn pairing_rows(kmax: i64) -> Vec<PairingRow> {
    (0..=kmax)
        .into_par_iter()
        .map(|k| {
            let m = serre_pairing(k);
            let perfect = certify_perfect(&m).unwrap_or(false);
            let ranks_agree = m.rows.len() == pi_compactified(2 * k).free_rank
                && m.cols.len() == pi_compactified(-2 * k - 9).free_rank;
            PairingRow { k, size: m.rows.len(), perfect, ranks_agree }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::regular_multiple;
    use crate::slice::slice_cells;

    #[test]
    fn small_pairings() {
        assert_eq!(serre_pairing(0).entries, vec![vec![1]]);
        assert_eq!(serre_pairing(1).entries, vec![vec![1]]);
        assert_eq!(serre_pairing(1).cols, vec![(2, 1)]);
        let m = serre_pairing(3);
        assert_eq!(m.rows, vec![(0, 1), (3, 0)]);
        assert_eq!(m.cols, vec![(1, 2), (4, 1)]);
        assert_eq!(m.entries, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn perfectness() {
        for k in 0..=30 {
            assert!(certify_perfect(&serre_pairing(k)).unwrap(), "k = {k}");
        }
        let zero = PairingMatrix { k: 0, rows: vec![(0, 0)], cols: vec![(1, 1)], entries: vec![vec![0]] };
        assert!(!certify_perfect(&zero).unwrap());
        let bad = PairingMatrix { k: 0, rows: vec![(0, 0)], cols: vec![], entries: vec![vec![]] };
        assert!(certify_perfect(&bad).is_err());
    }

    #[test]
    fn bareiss_matches_cofactors() {
        assert_eq!(bareiss(&[vec![2, 1], vec![1, 3]]), 5);
        assert_eq!(bareiss(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]), -1);
        assert_eq!(bareiss(&[vec![3, 0, 0], vec![0, 9, 0], vec![1, 1, 1]]), 27);
    }

    #[test]
    fn dual_cells() {
        let one = SliceCell::positive(0, 0);
        assert_eq!(dual_cell(&one).dimension, regular_multiple(-4) - Degree::new(1, 0));
        // the HZ* form of that cell sits at -5 - 2rho
        assert_eq!(dual_cell(&one).dimension - DUAL_COEFFICIENT_SHIFT, Degree::new(-5, 0) - regular_multiple(2));
        let a1 = SliceCell::positive(1, 0);
        assert_eq!(dual_cell(&a1).dimension - DUAL_COEFFICIENT_SHIFT, Degree::new(-5, 0) - regular_multiple(3));
        for t in [0, 10, 31, 60] {
            let r = dual_cell_check(&slice_cells(-9 - t, t));
            assert!(r.passed(), "{r:?}");
        }
        assert!(dual_cell_check(&[]).passed());
        let lopsided = dual_cell_check(&slice_cells(0, 4));
        assert_eq!(lopsided.unmatched.len(), lopsided.cells);
    }

    #[test]
    fn uct() {
        assert!(uct_shadow(-40, 40).iter().all(|r| r.holds));
        assert_eq!(underlying_shift(), 9);
    }
}
