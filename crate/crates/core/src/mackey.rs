//! C2-Mackey functors and Bredon (co)homology of sign-representation spheres.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::group::{FGAbelianGroup, Ground};
use crate::grading::Degree;
use crate::snf::{coordinates, identity, left_kernel, matmul, smith_normal_form, Mat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MackeyError {
    #[error("unknown Mackey functor `{0}`")]
    UnknownName(String),
    #[error("coefficient group {0} has 2-torsion")]
    TwoTorsion(String),
    #[error("j must lie in -2..=1, got {0}")]
    BadOffset(i64),
}

/// Values at `C2/C2` and `C2/e` as lists of cyclic summands (`0` for a
/// free summand), with the structure maps as integer matrices acting on
/// column vectors of summand coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyFunctor {
    pub ground: Ground,
    pub fixed_orders: Vec<i64>,
    pub underlying_orders: Vec<i64>,
    /// fixed -> underlying
    pub res: Vec<Vec<i64>>,
    /// underlying -> fixed
    pub tr: Vec<Vec<i64>>,
    /// underlying -> underlying
    pub weyl: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct MackeyJson {
    fixed: FGAbelianGroup,
    underlying: FGAbelianGroup,
    res: Vec<Vec<i64>>,
    tr: Vec<Vec<i64>>,
    weyl: Vec<Vec<i64>>,
}

fn block(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; cols]; rows];
    for &(i, j, x) in entries {
        m[i][j] = x;
    }
    m
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl MackeyFunctor {
    pub fn zero(ground: Ground) -> Self {
        MackeyFunctor { ground, fixed_orders: vec![], underlying_orders: vec![], res: vec![], tr: vec![], weyl: vec![] }
    }

    pub fn fixed(&self) -> FGAbelianGroup {
        FGAbelianGroup::from_orders(self.ground, &self.fixed_orders)
    }

    pub fn underlying(&self) -> FGAbelianGroup {
        FGAbelianGroup::from_orders(self.ground, &self.underlying_orders)
    }

    pub fn is_zero(&self) -> bool {
        self.fixed().is_zero() && self.underlying().is_zero()
    }

    fn equal_mod(&self, x: &[Vec<i64>], y: &[Vec<i64>], orders: &[i64]) -> bool {
        x.iter().zip(y).enumerate().all(|(i, (rx, ry))| {
            let n = orders[i];
            rx.iter().zip(ry).all(|(a, b)| if n == 0 { a == b } else { (a - b).rem_euclid(n) == 0 })
        })
    }

    /// The four identities `w^2 = 1`, `w res = res`, `tr w = tr`, `res tr = 1 + w`.
    pub fn satisfies_axioms(&self) -> bool {
        let (f, u) = (self.fixed_orders.len(), self.underlying_orders.len());
        let id_u = block(u, u, &(0..u).map(|i| (i, i, 1)).collect::<Vec<_>>());
        let w2 = mat_mul(&self.weyl, &self.weyl, u);
        let wres = mat_mul(&self.weyl, &self.res, u);
        let trw = mat_mul(&self.tr, &self.weyl, u);
        let restr = mat_mul(&self.res, &self.tr, f);
        let one_plus_w: Vec<Vec<i64>> =
            id_u.iter().zip(&self.weyl).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        self.equal_mod(&w2, &id_u, &self.underlying_orders)
            && self.equal_mod(&wres, &self.res, &self.underlying_orders)
            && self.equal_mod(&trw, &self.tr, &self.fixed_orders)
            && self.equal_mod(&restr, &one_plus_w, &self.underlying_orders)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let blocks = |a: &[Vec<i64>], b: &[Vec<i64>], ar: usize, ac: usize, br: usize, bc: usize| {
            let mut m = vec![vec![0; ac + bc]; ar + br];
            for i in 0..ar {
                m[i][..ac].copy_from_slice(&a[i]);
            }
            for i in 0..br {
                m[ar + i][ac..].copy_from_slice(&b[i]);
            }
            m
        };
        let (f1, u1) = (self.fixed_orders.len(), self.underlying_orders.len());
        let (f2, u2) = (other.fixed_orders.len(), other.underlying_orders.len());
        MackeyFunctor {
            ground: self.ground,
            fixed_orders: [self.fixed_orders.clone(), other.fixed_orders.clone()].concat(),
            underlying_orders: [self.underlying_orders.clone(), other.underlying_orders.clone()].concat(),
            res: blocks(&self.res, &other.res, u1, f1, u2, f2),
            tr: blocks(&self.tr, &other.tr, f1, u1, f2, u2),
            weyl: blocks(&self.weyl, &other.weyl, u1, u1, u2, u2),
        }
    }

    /// Entries reduced modulo the orders, and signs of free generators
    /// chosen so the first nonzero entry of each `res` row and `tr` row is
    /// positive.
    pub fn reduced(mut self) -> Self {
        for i in 0..self.underlying_orders.len() {
            if self.res[i].iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                self.res[i].iter_mut().for_each(|x| *x = -*x);
                self.tr.iter_mut().for_each(|r| r[i] = -r[i]);
                self.weyl[i].iter_mut().for_each(|x| *x = -*x);
                self.weyl.iter_mut().for_each(|r| r[i] = -r[i]);
            }
        }
        for j in 0..self.fixed_orders.len() {
            if self.tr[j].iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                self.tr[j].iter_mut().for_each(|x| *x = -*x);
                self.res.iter_mut().for_each(|r| r[j] = -r[j]);
            }
        }
        let modulo = |m: &mut Vec<Vec<i64>>, orders: &[i64]| {
            for (row, &n) in m.iter_mut().zip(orders) {
                if n != 0 {
                    row.iter_mut().for_each(|x| *x = x.rem_euclid(n));
                }
            }
        };
        modulo(&mut self.res, &self.underlying_orders);
        modulo(&mut self.tr, &self.fixed_orders);
        modulo(&mut self.weyl, &self.underlying_orders);
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MackeyJson {
            fixed: self.fixed(),
            underlying: self.underlying(),
            res: self.res.clone(),
            tr: self.tr.clone(),
            weyl: self.weyl.clone(),
        })
        .expect("serializable")
    }
}

/// `Z`, `Zminus`, `Zstar` or `G`, tensored levelwise with `scalars`.
pub fn named_mackey(name: &str, scalars: &FGAbelianGroup) -> Result<MackeyFunctor, MackeyError> {
    let ground = scalars.ground;
    let summands: Vec<i64> =
        scalars.invariant_factors.iter().copied().chain(std::iter::repeat_n(0, scalars.free_rank)).collect();
    let n = summands.len();
    let diag = |x: i64| block(n, n, &(0..n).map(|i| (i, i, x)).collect::<Vec<_>>());
    let m = match name {
        "Z" => MackeyFunctor {
            ground,
            fixed_orders: summands.clone(),
            underlying_orders: summands.clone(),
            res: diag(1),
            tr: diag(2),
            weyl: diag(1),
        },
        "Zminus" => MackeyFunctor {
            ground,
            fixed_orders: vec![],
            underlying_orders: summands.clone(),
            res: vec![vec![]; n],
            tr: vec![],
            weyl: diag(-1),
        },
        "Zstar" => MackeyFunctor {
            ground,
            fixed_orders: summands.clone(),
            underlying_orders: summands.clone(),
            res: diag(2),
            tr: diag(1),
            weyl: diag(1),
        },
        "G" => {
            let orders: Vec<i64> = summands.iter().map(|&k| if k == 0 { 2 } else { gcd(2, k) }).filter(|&k| k > 1).collect();
            let f = orders.len();
            MackeyFunctor {
                ground,
                fixed_orders: orders,
                underlying_orders: vec![],
                res: vec![],
                tr: vec![vec![]; f],
                weyl: vec![],
            }
        }
        other => return Err(MackeyError::UnknownName(other.to_string())),
    };
    Ok(m)
}

/// `H_{k-s}(S^{k sigma}; Z[1/3])` at the fixed level.
pub fn bredon_homology_sigma_sphere(k: i64, s: i64) -> FGAbelianGroup {
    let top = 2 * k - s;
    if s == 0 && top.rem_euclid(4) == 0 {
        FGAbelianGroup::z3(1)
    } else if 0 < s && s <= top && (top - s).rem_euclid(4) == 0 {
        FGAbelianGroup::cyclic(Ground::ZThird, 2)
    } else {
        FGAbelianGroup::zero(Ground::ZThird)
    }
}

/// `H^k(S^{d sigma}; Z[1/3])` at the fixed level.
pub fn bredon_cohomology_sigma_sphere(d: i64, k: i64) -> FGAbelianGroup {
    if d.rem_euclid(2) == 0 && k == d {
        FGAbelianGroup::z3(1)
    } else if k.rem_euclid(2) == 1 && 1 < k && k <= d {
        FGAbelianGroup::cyclic(Ground::ZThird, 2)
    } else {
        FGAbelianGroup::zero(Ground::ZThird)
    }
}

/// Homology of a chain complex of single-generator groups given by the
/// integer boundary maps `d[i]: C_i -> C_{i-1}` (`d[0]` unused).
fn homology_of_line(ground: Ground, ranks: &[usize], maps: &[Option<i64>], degree: usize) -> FGAbelianGroup {
    // each C_i is Z or 0; maps[i] is the scalar C_i -> C_{i-1} when both exist
    if ranks[degree] == 0 {
        return FGAbelianGroup::zero(ground);
    }
    let out = if degree == 0 { None } else { maps[degree] };
    let inc = maps.get(degree + 1).copied().flatten();
    let cycles = out.is_none_or(|x| x == 0);
    if !cycles {
        return FGAbelianGroup::zero(ground);
    }
    let rel = inc.unwrap_or(0);
    let snf = smith_normal_form(&[vec![rel]]);
    FGAbelianGroup::from_orders(ground, &[snf.diag[0]])
}

/// Reduced cellular Bredon homology `H_i(S^{k sigma}; M)` for a Mackey
/// functor with a single `Z` summand at each level, from the C2-CW
/// structure with one fixed 0-cell and free cells in dimensions 1..k.
pub fn cellular_homology_sigma_sphere(m: &MackeyFunctor, k: usize, i: usize) -> FGAbelianGroup {
    assert!(m.fixed_orders.len() <= 1 && m.underlying_orders.len() <= 1);
    let tr = m.tr.first().and_then(|r| r.first()).copied();
    let w = m.weyl.first().and_then(|r| r.first()).copied().unwrap_or(0);
    let mut ranks = vec![m.fixed_orders.len()];
    ranks.extend(std::iter::repeat_n(m.underlying_orders.len(), k));
    let mut maps: Vec<Option<i64>> = vec![None];
    for j in 1..=k {
        let x = if j == 1 { tr } else { Some(1 + if (j - 1) % 2 == 0 { w } else { -w }) };
        maps.push(if ranks[j] > 0 && ranks[j - 1] > 0 { x } else { None });
    }
    if i > k {
        return FGAbelianGroup::zero(m.ground);
    }
    homology_of_line(m.ground, &ranks, &maps, i)
}

/// Reduced cellular Bredon cohomology `H^i(S^{d sigma}; M)`, dual to the
/// chain structure above.
pub fn cellular_cohomology_sigma_sphere(m: &MackeyFunctor, d: usize, i: usize) -> FGAbelianGroup {
    assert!(m.fixed_orders.len() <= 1 && m.underlying_orders.len() <= 1);
    if i > d {
        return FGAbelianGroup::zero(m.ground);
    }
    let res = m.res.first().and_then(|r| r.first()).copied();
    let w = m.weyl.first().and_then(|r| r.first()).copied().unwrap_or(0);
    let mut ranks = vec![m.fixed_orders.len()];
    ranks.extend(std::iter::repeat_n(m.underlying_orders.len(), d));
    // delta^{j-1}: C^{j-1} -> C^j
    let delta = |j: usize| -> Option<i64> {
        if ranks[j] == 0 || ranks[j - 1] == 0 {
            return None;
        }
        if j == 1 {
            res
        } else {
            Some(1 + if (j - 1).is_multiple_of(2) { w } else { -w })
        }
    };
    if ranks[i] == 0 {
        return FGAbelianGroup::zero(m.ground);
    }
    let out = if i < d { delta(i + 1) } else { None };
    if out.is_some_and(|x| x != 0) {
        return FGAbelianGroup::zero(m.ground);
    }
    let inc = if i >= 1 { delta(i) } else { None }.unwrap_or(0);
    FGAbelianGroup::from_orders(m.ground, &[smith_normal_form(&[vec![inc]]).diag[0]])
}

/// The homotopy Mackey functors near `k*rho` for a spectrum whose slices
/// are `S^{n rho} ∧ H(Z ⊗ pi_{2n})`. `coefficients[n]` is `pi_n` of the
/// underlying ring; missing entries are zero.
pub fn homotopy_near_rho(
    coefficients: &BTreeMap<i64, FGAbelianGroup>,
    k: i64,
    j: i64,
) -> Result<MackeyFunctor, MackeyError> {
    let get = |n: i64| -> Result<FGAbelianGroup, MackeyError> {
        let g = coefficients.get(&n).cloned().unwrap_or_else(|| FGAbelianGroup::zero(Ground::ZThird));
        if g.invariant_factors.iter().any(|f| f % 2 == 0) {
            return Err(MackeyError::TwoTorsion(g.to_string()));
        }
        Ok(g)
    };
    match j {
        1 => named_mackey("G", &get(2 * k + 2)?),
        0 => named_mackey("Z", &get(2 * k)?),
        -1 => Ok(MackeyFunctor::zero(Ground::ZThird)),
        -2 => named_mackey("Zminus", &get(2 * k - 2)?),
        other => Err(MackeyError::BadOffset(other)),
    }
}

/// `ker(out) / im(inc)` on row vectors, with generator cycles.
struct Subquotient {
    kernel: Mat,
    v: Mat,
    keep: Vec<usize>,
    orders: Vec<i64>,
    gens: Mat,
}

impl Subquotient {
    fn new(n: usize, out: Option<&Mat>, inc: Option<&Mat>) -> Self {
        let kernel = match out {
            Some(m) => left_kernel(m, m.first().map_or(0, |r| r.len())),
            None => identity(n),
        };
        let k = kernel.len();
        let rel: Mat = inc
            .map(|m| m.iter().map(|row| coordinates(row, &kernel).expect("boundary is a cycle")).collect())
            .unwrap_or_default();
        let (v, vi, diag) = if rel.is_empty() || k == 0 {
            (identity(k), identity(k), vec![0; k])
        } else {
            let snf = smith_normal_form(&rel);
            let mut d = snf.diag.clone();
            d.resize(k, 0);
            (snf.v, snf.v_inv, d)
        };
        let keep: Vec<usize> = (0..k).filter(|&j| diag[j] != 1).collect();
        let orders = keep.iter().map(|&j| diag[j]).collect();
        let gens = keep.iter().map(|&j| matmul(&[vi[j].clone()], &kernel).remove(0)).collect();
        Subquotient { kernel, v, keep, orders, gens }
    }

    fn coords(&self, z: &[i64]) -> Vec<i64> {
        let x = coordinates(z, &self.kernel).expect("not a cycle");
        let y = matmul(&[x], &self.v).remove(0);
        self.keep.iter().zip(&self.orders).map(|(&j, &n)| if n == 0 { y[j] } else { y[j].rem_euclid(n) }).collect()
    }

    /// Matrix of the induced map, acting on column vectors.
    fn induced(&self, f: &Mat, target: &Subquotient) -> Mat {
        let cols: Vec<Vec<i64>> = self.gens.iter().map(|g| target.coords(&matmul(std::slice::from_ref(g), f).remove(0))).collect();
        (0..target.orders.len()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }
}

/// Cellular chains of `S^{k sigma}` with constant `Z` coefficients at both
/// levels, row-vector convention. Underlying cells are `p, e_i, g e_i`.
struct SigmaCells {
    fixed: Vec<Mat>,
    under: Vec<Mat>,
    res: Vec<Mat>,
    tr: Vec<Mat>,
    weyl: Vec<Mat>,
}

fn sigma_cells(k: usize, cohomology: bool) -> SigmaCells {
    let mut c = SigmaCells { fixed: vec![], under: vec![], res: vec![], tr: vec![], weyl: vec![] };
    for i in 0..=k {
        if i == 0 {
            c.fixed.push(vec![]);
            c.under.push(vec![]);
            c.res.push(vec![vec![1]]);
            c.tr.push(vec![vec![2]]);
            c.weyl.push(vec![vec![1]]);
            continue;
        }
        let e = if i % 2 == 0 { -1 } else { 1 };
        if i == 1 {
            c.fixed.push(vec![vec![if cohomology { 1 } else { 2 }]]);
            c.under.push(vec![vec![1], vec![1]]);
        } else {
            c.fixed.push(vec![vec![1 + e]]);
            c.under.push(vec![vec![1, e], vec![e, 1]]);
        }
        c.res.push(vec![vec![1, 1]]);
        c.tr.push(vec![vec![1], vec![1]]);
        c.weyl.push(vec![vec![0, 1], vec![1, 0]]);
    }
    c
}

fn transpose(m: &Mat) -> Mat {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// Reduced Bredon (co)homology Mackey functor of `S^{k sigma}` with `Z[1/3]`
/// coefficients in degree `i`.
pub fn sigma_sphere_mackey(k: i64, i: i64, cohomology: bool) -> MackeyFunctor {
    if k < 0 || i < 0 || i > k {
        return MackeyFunctor::zero(Ground::ZThird);
    }
    let (k, i) = (k as usize, i as usize);
    let c = sigma_cells(k, cohomology);
    let dims = |level_under: bool, j: usize| if level_under && j > 0 { 2 } else { 1 };
    let level = |maps: &Vec<Mat>, under: bool| -> Subquotient {
        let n = dims(under, i);
        if cohomology {
            // delta: C^{j-1} -> C^j is the transpose of d_j
            let out = (i < k).then(|| transpose(&maps[i + 1]));
            let inc = (i > 0).then(|| transpose(&maps[i]));
            Subquotient::new(n, out.as_ref(), inc.as_ref())
        } else {
            let out = (i > 0).then(|| maps[i].clone());
            let inc = (i < k).then(|| maps[i + 1].clone());
            Subquotient::new(n, out.as_ref(), inc.as_ref())
        }
    };
    let f = level(&c.fixed, false);
    let u = level(&c.under, true);
    MackeyFunctor {
        ground: Ground::ZThird,
        res: f.induced(&c.res[i], &u),
        tr: u.induced(&c.tr[i], &f),
        weyl: u.induced(&c.weyl[i], &u),
        fixed_orders: f.orders,
        underlying_orders: u.orders,
    }
    .reduced()
}

/// `pi_V H Z[1/3]` for `V = a + b sigma`.
pub fn pi_hz(v: Degree) -> MackeyFunctor {
    if v.b <= 0 {
        sigma_sphere_mackey(-v.b, v.a, false)
    } else {
        sigma_sphere_mackey(v.b, -v.a, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3() -> FGAbelianGroup {
        FGAbelianGroup::z3(1)
    }

    #[test]
    fn named_functors() {
        for name in ["Z", "Zminus", "Zstar", "G"] {
            let m = named_mackey(name, &FGAbelianGroup::free(Ground::Z, 1)).unwrap();
            assert!(m.satisfies_axioms(), "{name}");
        }
        let z = named_mackey("Z", &z3()).unwrap();
        assert_eq!((z.res[0][0], z.tr[0][0]), (1, 2));
        let zs = named_mackey("Zstar", &FGAbelianGroup::free(Ground::Z, 1)).unwrap();
        assert_eq!((zs.res[0][0], zs.tr[0][0]), (2, 1));
        let g = named_mackey("G", &FGAbelianGroup::free(Ground::Z, 1)).unwrap();
        assert_eq!(g.fixed().to_string(), "Z/2");
        assert!(g.underlying().is_zero());
        assert!(named_mackey("W", &z3()).is_err());
    }

    #[test]
    fn sphere_formulas() {
        assert_eq!(bredon_homology_sigma_sphere(0, 0), z3());
        assert_eq!(bredon_homology_sigma_sphere(3, 1).to_string(), "Z/2");
        assert!(bredon_homology_sigma_sphere(1, 0).is_zero());
        assert_eq!(bredon_cohomology_sigma_sphere(2, 2), z3());
        assert_eq!(bredon_cohomology_sigma_sphere(4, 3).to_string(), "Z/2");
        assert!(bredon_cohomology_sigma_sphere(4, 1).is_zero());
    }

    #[test]
    fn near_rho_table() {
        let mut pi = BTreeMap::new();
        pi.insert(0, z3());
        pi.insert(2, z3());
        let m = homotopy_near_rho(&pi, 0, 0).unwrap();
        assert_eq!(m, named_mackey("Z", &z3()).unwrap());
        assert!(homotopy_near_rho(&pi, 5, -1).unwrap().is_zero());
        let m = homotopy_near_rho(&pi, 1, -2).unwrap();
        assert_eq!(m, named_mackey("Zminus", &z3()).unwrap());
        pi.insert(4, FGAbelianGroup::cyclic(Ground::ZThird, 2));
        assert!(homotopy_near_rho(&pi, 2, 0).is_err());
    }
}
