//! Slice cells of Tmf1(3), the slice E2 chart, forced differentials in the
//! negative region and the integer homotopy of the compactified spectrum.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::grading::{regular_multiple, Degree};
use crate::group::{FGAbelianGroup, Ground};
use crate::mackey::{
    bredon_cohomology_sigma_sphere, bredon_homology_sigma_sphere, homotopy_near_rho, named_mackey, pi_hz,
    MackeyError, MackeyFunctor,
};

#[derive(Debug, Error)]
pub enum SliceError {
    #[error("negative index map fails anchor: {0}")]
    Anchor(String),
    #[error(transparent)]
    Mackey(#[from] MackeyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Positive,
    Negative,
}

/// `S^dimension ∧ HZ[1/3]` attached to the monomial `a1bar^g a3bar^h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SliceCell {
    pub kind: CellKind,
    pub g: i64,
    pub h: i64,
    pub dimension: Degree,
    pub index: i64,
}

impl SliceCell {
    pub fn positive(g: i64, h: i64) -> Self {
        let n = g + 3 * h;
        SliceCell { kind: CellKind::Positive, g, h, dimension: regular_multiple(n), index: 2 * n }
    }

    pub fn negative(g: i64, h: i64) -> Self {
        let m = g + 3 * h + 4;
        SliceCell { kind: CellKind::Negative, g, h, dimension: regular_multiple(-m) - Degree::new(1, 0), index: -2 * m - 1 }
    }

    pub fn weight(&self) -> i64 {
        self.g + 3 * self.h
    }

    pub fn label(&self) -> String {
        let p = monomial_label(self.g, self.h);
        match self.kind {
            CellKind::Positive => p,
            CellKind::Negative => format!("D/{p}"),
        }
    }

    /// `pi_V` of the cell as a Mackey functor.
    pub fn homotopy(&self, v: Degree) -> MackeyFunctor {
        pi_hz(v - self.dimension)
    }
}

fn monomial_label(g: i64, h: i64) -> String {
    let part = |name: &str, e: i64| match e {
        0 => String::new(),
        1 => name.to_string(),
        e => format!("{name}^{e}"),
    };
    let parts: Vec<String> = [part("a1bar", g), part("a3bar", h)].into_iter().filter(|s| !s.is_empty()).collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Monomials `a1bar^g a3bar^h` with `g, h >= 0` and `g + 3h = n`.
fn monomials(n: i64) -> Vec<(i64, i64)> {
    if n < 0 {
        return vec![];
    }
    (0..=n / 3).map(|h| (n - 3 * h, h)).collect()
}

/// Cells of Tmf1(3) with slice index in `[lo, hi]`.
pub fn slice_cells(lo: i64, hi: i64) -> Vec<SliceCell> {
    let mut out = Vec::new();
    for t in lo..=hi {
        if t >= 0 && t % 2 == 0 {
            out.extend(monomials(t / 2).into_iter().map(|(g, h)| SliceCell::positive(g, h)));
        } else if t <= -9 && t.rem_euclid(2) == 1 {
            out.extend(monomials((-t - 9) / 2).into_iter().map(|(g, h)| SliceCell::negative(g, h)));
        }
    }
    out
}

/// Every cell contributing to integer stems in `[lo, hi]`.
pub fn cells_for_stems(lo: i64, hi: i64) -> Vec<SliceCell> {
    slice_cells((2 * lo - 1).min(-9), (2 * hi).max(0))
}

/// Position of a negative cell's class at stem `j`: `(d, k, s)` with the
/// group `H^k(S^{d sigma})`. A negative cell `S^{-m rho - 1}` at `j + c rho`
/// reads off `H^k(S^{(m+c) sigma})`, `k = -j - 1 - (m + c)`.
pub fn negative_index(cell: &SliceCell, j: i64, c: i64) -> (i64, i64, i64) {
    let m = cell.weight() + 4;
    let d = m + c;
    (d, -j - 1 - d, cell.index - j)
}

/// Fixed-level group of a cell at integer stem `j`, with its filtration.
pub fn cell_group(cell: &SliceCell, j: i64) -> (i64, FGAbelianGroup) {
    match cell.kind {
        CellKind::Positive => {
            let n = cell.weight();
            let s = 2 * n - j;
            (s, bredon_homology_sigma_sphere(n, s))
        }
        CellKind::Negative => {
            let (d, k, s) = negative_index(cell, j, 0);
            (s, bredon_cohomology_sigma_sphere(d, k))
        }
    }
}

/// Checks the negative-cell index map against `pi_{-9} = Z[1/3]`, the
/// `Z/2` at `(-8, -1)`, and `pi_{-5-2rho} = Z*`, and against the cellular
/// model of `pi_V H Z`.
pub fn validate_index_map() -> Result<(), SliceError> {
    let d = SliceCell::negative(0, 0);
    let (s, g) = cell_group(&d, -9);
    if s != 0 || g != FGAbelianGroup::z3(1) {
        return Err(SliceError::Anchor(format!("stem -9 gives {g} at s={s}")));
    }
    let (s, g) = cell_group(&d, -8);
    if s != -1 || g.to_string() != "Z/2" {
        return Err(SliceError::Anchor(format!("stem -8 gives {g} at s={s}")));
    }
    let v = Degree::new(-5, 0) + regular_multiple(-2);
    let (dd, k, _) = negative_index(&d, -5, -2);
    let closed = bredon_cohomology_sigma_sphere(dd, k);
    let m = d.homotopy(v);
    let zstar = named_mackey("Zstar", &FGAbelianGroup::z3(1))?;
    if m != zstar || closed != m.fixed() {
        return Err(SliceError::Anchor(format!("pi_(-5-2rho) gives {:?}, closed form {closed}", m)));
    }
    for cell in slice_cells(-60, -9) {
        for j in -40..0 {
            let (_, g) = cell_group(&cell, j);
            let cellular = cell.homotopy(Degree::new(j, 0)).fixed();
            if g != cellular {
                return Err(SliceError::Anchor(format!("{} at stem {j}: {g} vs {cellular}", cell.label())));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartClass {
    pub cell: SliceCell,
    pub group: FGAbelianGroup,
}

/// Slice E2 at the fixed level, keyed by `(stem, s)`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SliceChart {
    pub stems: [i64; 2],
    pub entries: BTreeMap<(i64, i64), Vec<ChartClass>>,
}

impl SliceChart {
    pub fn group(&self, stem: i64, s: i64) -> FGAbelianGroup {
        self.entries
            .get(&(stem, s))
            .map(|cs| cs.iter().fold(FGAbelianGroup::zero(Ground::ZThird), |a, c| a.direct_sum(&c.group)))
            .unwrap_or_else(|| FGAbelianGroup::zero(Ground::ZThird))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn covers(&self, stem: i64) -> bool {
        self.stems[0] <= stem && stem <= self.stems[1]
    }

    fn has(&self, pos: (i64, i64)) -> bool {
        self.entries.contains_key(&pos)
    }

    fn find(&self, pos: (i64, i64), g: i64, h: i64) -> Option<&ChartClass> {
        self.entries.get(&pos)?.iter().find(|c| c.cell.g == g && c.cell.h == h)
    }

    /// Total group in a stem, summed over filtrations.
    pub fn stem_total(&self, stem: i64) -> FGAbelianGroup {
        self.entries
            .range((stem, i64::MIN)..=(stem, i64::MAX))
            .flat_map(|(_, cs)| cs.iter())
            .fold(FGAbelianGroup::zero(Ground::ZThird), |a, c| a.direct_sum(&c.group))
    }
}

pub fn slice_e2(cells: &[SliceCell], stems: [i64; 2]) -> Result<SliceChart, SliceError> {
    validate_index_map()?;
    let parts: Vec<((i64, i64), ChartClass)> = cells
        .par_iter()
        .flat_map_iter(|cell| {
            (stems[0]..=stems[1]).filter_map(move |j| {
                let (s, group) = cell_group(cell, j);
                (!group.is_zero()).then_some(((j, s), ChartClass { cell: *cell, group }))
            })
        })
        .collect();
    let mut chart = SliceChart { stems, entries: BTreeMap::new() };
    for (pos, c) in parts {
        chart.entries.entry(pos).or_default().push(c);
    }
    for cs in chart.entries.values_mut() {
        cs.sort_by_key(|c| (c.cell.kind, -c.cell.g, c.cell.h));
    }
    Ok(chart)
}

/// Underlying free rank per stem of the slice E2. All underlying classes sit
/// in filtration 0, so no differential is possible and this is also E-infinity.
pub fn underlying_ranks(cells: &[SliceCell], stems: [i64; 2]) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for j in stems[0]..=stems[1] {
        let r: usize = cells.iter().map(|c| c.homotopy(Degree::new(j, 0)).underlying().free_rank).sum();
        out.insert(j, r);
    }
    out
}

/// `pi_n Tmf1(3)` from `H^0` and `H^1` of the powers of omega.
pub fn pi_compactified(n: i64) -> FGAbelianGroup {
    let rank = if n.rem_euclid(2) == 0 {
        monomials(n / 2).len()
    } else {
        // H^1 monomials 1/(a1^i a3^j), i, j >= 1, in degree n = -2(i + 3j) - 1
        let w = (-n - 1) / 2;
        if w < 4 {
            0
        } else {
            monomials(w - 4).len()
        }
    };
    FGAbelianGroup::z3(rank)
}

/// A class of the chart identified by position and cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassRef {
    pub stem: i64,
    pub s: i64,
    pub g: i64,
    pub h: i64,
}

impl ClassRef {
    fn pos(&self) -> (i64, i64) {
        (self.stem, self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Forcing {
    /// `eta^3 y` is a class on L that is not hit.
    EtaDivisibility,
    /// `nu^3 y` is a class on L that is not hit, and `y` supports no d3.
    NuDivisibility,
    /// `y * w` supports the differential, for a d_r-cycle `w` in stem `2n`.
    ModuleAction { n: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForcedDifferential {
    pub r: i64,
    pub source: ClassRef,
    pub target: ClassRef,
    pub reason: Forcing,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NegativeForcing {
    /// Classes on the line of slope one through `(-8, -1)`.
    pub line: Vec<ClassRef>,
    pub not_hit: Vec<ClassRef>,
    pub differentials: Vec<ForcedDifferential>,
    /// Classes with no forced differential that could still support or
    /// receive one.
    pub undetermined: Vec<ClassRef>,
    /// Classes that can neither support nor receive a differential.
    pub permanent: Vec<ClassRef>,
}

fn torsion_classes(chart: &SliceChart) -> Vec<ClassRef> {
    chart
        .entries
        .iter()
        .flat_map(|(&(stem, s), cs)| {
            cs.iter()
                .filter(|c| c.cell.kind == CellKind::Negative && c.group.free_rank == 0)
                .map(move |c| ClassRef { stem, s, g: c.cell.g, h: c.cell.h })
        })
        .collect()
}

/// Whether some `d_r`, `2 <= r <= r_max`, could hit `pos`; `None` if the
/// chart does not cover the source stem.
fn could_be_hit(chart: &SliceChart, pos: (i64, i64), r_max: i64) -> Option<bool> {
    if !chart.covers(pos.0 + 1) {
        return None;
    }
    Some((2..=r_max).any(|r| chart.has((pos.0 + 1, pos.1 - r))))
}

fn could_support(chart: &SliceChart, pos: (i64, i64), r_max: i64) -> Option<bool> {
    if !chart.covers(pos.0 - 1) {
        return None;
    }
    Some((2..=r_max).any(|r| chart.has((pos.0 - 1, pos.1 + r))))
}

/// The d3 and d7 in the negative region forced by eta- and nu-divisibility
/// of the line L, propagated along multiplication by d_r-cycles
/// `P u^{n/2}` of stem `2n`; a multiplier is a d3-cycle when `4 | n` and a
/// d7-cycle when `8 | n`.
pub fn forced_negative_differentials(chart: &SliceChart, r_max: i64) -> NegativeForcing {
    let mut out = NegativeForcing::default();
    let classes = torsion_classes(chart);
    let on_l = |c: &ClassRef| c.stem - c.s == -7;
    out.line = classes.iter().copied().filter(on_l).collect();
    if !out.line.iter().any(|c| (c.stem, c.s) == (-8, -1)) {
        return out;
    }
    out.not_hit = out.line.iter().copied().filter(|c| could_be_hit(chart, c.pos(), r_max) == Some(false)).collect();
    let not_hit: BTreeSet<(i64, i64)> = out.not_hit.iter().map(|c| (c.g, c.h)).collect();

    let mut sources: BTreeMap<ClassRef, (i64, Forcing)> = BTreeMap::new();
    for y in &out.line {
        if y.g >= 3 && not_hit.contains(&(y.g - 3, y.h)) {
            sources.insert(*y, (3, Forcing::EtaDivisibility));
        } else if y.h >= 3 && not_hit.contains(&(y.g, y.h - 3)) {
            sources.insert(*y, (7, Forcing::NuDivisibility));
        }
    }
    // propagate to z with z * w = y
    let mut frontier: Vec<ClassRef> = sources.keys().copied().collect();
    while let Some(y) = frontier.pop() {
        let (r, _) = sources[&y];
        let step = if r == 3 { 4 } else { 8 };
        let mut n = step;
        while chart.covers(y.stem - 2 * n) {
            for (gw, hw) in monomials(n) {
                let z = ClassRef { stem: y.stem - 2 * n, s: y.s, g: y.g + gw, h: y.h + hw };
                if sources.contains_key(&z) || chart.find(z.pos(), z.g, z.h).is_none_or(|c| c.group.free_rank > 0) {
                    continue;
                }
                sources.insert(z, (r, Forcing::ModuleAction { n }));
                frontier.push(z);
            }
            n += step;
        }
    }
    let mut targets: BTreeSet<ClassRef> = BTreeSet::new();
    let mut broken: BTreeSet<ClassRef> = BTreeSet::new();
    for (y, &(r, reason)) in &sources {
        // d3 divides by a1bar, d7 by a3bar
        let (g, h) = if r == 3 { (y.g - 1, y.h) } else { (y.g, y.h - 1) };
        let t = ClassRef { stem: y.stem - 1, s: y.s + r, g, h };
        if !chart.covers(t.stem) {
            continue;
        }
        if chart.find(t.pos(), g, h).is_some() {
            targets.insert(t);
            out.differentials.push(ForcedDifferential { r, source: *y, target: t, reason });
        } else {
            broken.insert(*y);
        }
    }
    out.differentials.sort_by_key(|d| (d.r, std::cmp::Reverse(d.source.stem), d.source.g, d.source.h));
    for c in classes {
        if sources.contains_key(&c) && !broken.contains(&c) || targets.contains(&c) {
            continue;
        }
        let out_possible = could_support(chart, c.pos(), r_max);
        let in_possible = could_be_hit(chart, c.pos(), r_max);
        if out_possible == Some(false) && in_possible == Some(false) {
            out.permanent.push(c);
        } else {
            out.undetermined.push(c);
        }
    }
    out
}

/// Underlying homotopy ring of a (localized) connective scenario, truncated
/// to exponents of absolute value at most `bound`.
pub fn ring_monomials(scenario: &str, n: i64, bound: i64) -> Vec<(i64, i64)> {
    let (g_inv, h_inv) = match scenario {
        "tmf13" => (false, false),
        "tmf13_a1inv" => (true, false),
        "tmf13_a3inv" => (false, true),
        "tmf13_a1a3inv" => (true, true),
        _ => return vec![],
    };
    let h_lo = if h_inv { -bound } else { 0 };
    (h_lo..=bound)
        .rev()
        .filter_map(|h| {
            let g = n - 3 * h;
            let ok = g.abs() <= bound && (g_inv || g >= 0);
            ok.then_some((g, h))
        })
        .collect()
}

/// `pi_{2n}` of the truncated underlying ring, keyed by `2n`.
pub fn ring_coefficients(scenario: &str, n_range: [i64; 2], bound: i64) -> BTreeMap<i64, FGAbelianGroup> {
    (n_range[0]..=n_range[1])
        .map(|n| (2 * n, FGAbelianGroup::z3(ring_monomials(scenario, n, bound).len())))
        .filter(|(_, g)| !g.is_zero())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct NearRhoRow {
    pub k: i64,
    pub j: i64,
    pub table: serde_json::Value,
    pub slices: serde_json::Value,
    pub agree: bool,
}

/// Mackey functors at `k rho + j`, `j in -2..=1`, from the table and from
/// the positive slice cells of the truncated ring.
pub fn near_rho_rows(scenario: &str, ks: [i64; 2], bound: i64) -> Result<Vec<NearRhoRow>, SliceError> {
    let coeffs = ring_coefficients(scenario, [ks[0] - 3, ks[1] + 3], bound);
    let mut rows = Vec::new();
    for k in ks[0]..=ks[1] {
        for j in -2..=1 {
            let table = homotopy_near_rho(&coeffs, k, j)?;
            let v = regular_multiple(k) + Degree::new(j, 0);
            let mut sum = MackeyFunctor::zero(Ground::ZThird);
            for n in k - 3..=k + 3 {
                for (g, h) in ring_monomials(scenario, n, bound) {
                    let cell = SliceCell::positive(g, h);
                    sum = sum.direct_sum(&cell.homotopy(v));
                }
            }
            let agree = sum == table;
            rows.push(NearRhoRow { k, j, table: table.to_json(), slices: sum.to_json(), agree });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells() {
        let pos: Vec<String> = slice_cells(0, 6).iter().map(|c| format!("{}:{}", c.index, c.label())).collect();
        assert_eq!(pos, ["0:1", "2:a1bar", "4:a1bar^2", "6:a1bar^3", "6:a3bar"]);
        let neg = slice_cells(-9, -9);
        assert_eq!(neg.len(), 1);
        assert_eq!(neg[0].dimension, regular_multiple(-4) - Degree::new(1, 0));
        assert!(slice_cells(1, 1).is_empty());
    }

    #[test]
    fn anchors() {
        validate_index_map().unwrap();
        let chart = slice_e2(&cells_for_stems(-12, 0), [-12, 0]).unwrap();
        let from_d: Vec<&ChartClass> = chart
            .entries
            .range((-9, i64::MIN)..=(-9, i64::MAX))
            .flat_map(|(_, cs)| cs)
            .filter(|c| c.cell == SliceCell::negative(0, 0))
            .collect();
        assert_eq!(from_d.len(), 1);
        assert_eq!(from_d[0].group, FGAbelianGroup::z3(1));
        assert_eq!(chart.group(0, 0), FGAbelianGroup::z3(1));
    }

    #[test]
    fn compactified() {
        assert_eq!(pi_compactified(0), FGAbelianGroup::z3(1));
        assert_eq!(pi_compactified(-9), FGAbelianGroup::z3(1));
        for n in -8..=-1 {
            assert!(pi_compactified(n).is_zero());
        }
    }

    #[test]
    fn forcing_starts_on_l() {
        let chart = slice_e2(&cells_for_stems(-40, 8), [-40, 8]).unwrap();
        let f = forced_negative_differentials(&chart, 15);
        let first = f.differentials.iter().find(|d| d.reason == Forcing::EtaDivisibility).unwrap();
        assert_eq!((first.source.stem, first.source.s, first.source.g), (-11, -4, 3));
        assert!(f.not_hit.iter().any(|c| (c.stem, c.s) == (-8, -1)));
        assert!(forced_negative_differentials(&SliceChart::default(), 15).differentials.is_empty());
    }
}
