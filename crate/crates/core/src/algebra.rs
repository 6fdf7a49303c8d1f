//! Graded-commutative monomial algebras over `Z[1/3]` with 2-torsion
//! generators, their bases per bidegree, localization and degree-zero
//! subrings.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grading::{BiDegree, Degree};
use crate::group::{FGAbelianGroup, Ground};
use crate::snf::left_kernel;

pub const DEFAULT_EXPONENT_BOUND: i64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` is torsion and cannot be inverted")]
    TorsionGenerator(String),
    #[error("negative exponent on non-invertible generator `{0}`")]
    NegativeExponent(String),
    #[error("enumeration is unbounded without an exponent window")]
    Unbounded,
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("cannot parse element `{0}`")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("monomial {0} lies outside the rewrite window")]
    OutsideRewriteWindow(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: Degree,
    pub filtration: i64,
    #[serde(default)]
    pub annihilator: i64,
    #[serde(default)]
    pub invertible: bool,
}

impl Generator {
    pub fn new(name: &str, degree: Degree, filtration: i64, annihilator: i64, invertible: bool) -> Self {
        Generator { name: name.to_string(), degree, filtration, annihilator, invertible }
    }
}

/// A formal invertible generator `g` that stands for a polynomial in the
/// other generators. Normal forms keep the exponent of `g` pinned at
/// `-floor`; higher powers are expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub generator: usize,
    pub expansion: Element,
    pub floor: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialAlgebra {
    pub generators: Vec<Generator>,
    #[serde(skip)]
    pub rewrite: Option<Rewrite>,
}

/// Exponent vector indexed like the generators of its algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial(self.0.iter().map(|a| a * k).collect())
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

/// Integer combination of monomials; absent means zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element {
    pub terms: BTreeMap<Monomial, i64>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        Element { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: i64) -> Element {
        Element { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).filter(|(_, x)| *x != 0).collect() }
    }
}

fn content_without_threes(x: &Element) -> (i64, Element) {
    // strip the largest power of 3 dividing every coefficient
    let mut e = x.clone();
    let mut k = 0;
    while !e.is_zero() && e.terms.values().all(|c| c % 3 == 0) {
        for c in e.terms.values_mut() {
            *c /= 3;
        }
        k += 1;
    }
    (k, e)
}

/// `x == 3^k y` for some integer `k`: equality up to a unit of the ground ring.
pub fn equal_up_to_three(x: &Element, y: &Element) -> bool {
    content_without_threes(x).1 == content_without_threes(y).1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeZeroRing {
    /// Generators of the unit lattice of monomials (Laurent variables).
    pub laurent: Vec<String>,
    /// Generators of the pointed part (polynomial variables).
    pub polynomial: Vec<String>,
    pub shape: RingShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RingShape {
    Constants,
    Polynomial,
    Laurent,
    Mixed,
    /// Pointed cone whose Hilbert basis is not free.
    Monoid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    Equivariant,
    Underlying,
}

impl MonomialAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, AlgebraError> {
        let alg = MonomialAlgebra { generators, rewrite: None };
        alg.validate()?;
        Ok(alg)
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        for (i, g) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::Invalid(format!("duplicate generator `{}`", g.name)));
            }
            if g.annihilator != 0 && g.annihilator != 2 {
                return Err(AlgebraError::Invalid(format!("annihilator of `{}` must be 0 or 2", g.name)));
            }
            if g.annihilator == 2 && g.invertible {
                return Err(AlgebraError::Invalid(format!("torsion generator `{}` cannot be invertible", g.name)));
            }
            if g.filtration < 0 {
                return Err(AlgebraError::Invalid(format!("negative filtration on `{}`", g.name)));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(AlgebraError::Invalid(format!("bad generator name `{}`", g.name)));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, AlgebraError> {
        let alg: MonomialAlgebra = serde_json::from_str(s).map_err(|e| AlgebraError::Invalid(e.to_string()))?;
        alg.validate()?;
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators.iter().position(|g| g.name == name).ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.rank())
    }

    pub fn gen(&self, name: &str) -> Result<Monomial, AlgebraError> {
        let i = self.index(name)?;
        let mut m = self.one();
        m.0[i] = 1;
        Ok(m)
    }

    pub fn degree(&self, m: &Monomial) -> Degree {
        self.generators.iter().zip(&m.0).fold(Degree::ZERO, |acc, (g, &e)| acc + e * g.degree)
    }

    pub fn filtration(&self, m: &Monomial) -> i64 {
        self.generators.iter().zip(&m.0).map(|(g, &e)| e * g.filtration).sum()
    }

    pub fn bidegree(&self, m: &Monomial) -> BiDegree {
        BiDegree::new(self.degree(m), self.filtration(m))
    }

    pub fn annihilator(&self, m: &Monomial) -> i64 {
        if self.generators.iter().zip(&m.0).any(|(g, &e)| g.annihilator == 2 && e >= 1) {
            2
        } else {
            0
        }
    }

    pub fn is_torsion(&self, m: &Monomial) -> bool {
        self.annihilator(m) == 2
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<(), AlgebraError> {
        for (g, &e) in self.generators.iter().zip(&m.0) {
            if e < 0 && !g.invertible {
                return Err(AlgebraError::NegativeExponent(g.name.clone()));
            }
        }
        Ok(())
    }

    /// Drop zeros and reduce coefficients of torsion monomials mod 2.
    pub fn normalize(&self, x: Element) -> Element {
        Element {
            terms: x
                .terms
                .into_iter()
                .map(|(m, c)| {
                    let c = if self.is_torsion(&m) { c.rem_euclid(2) } else { c };
                    (m, c)
                })
                .filter(|(_, c)| *c != 0)
                .collect(),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        let mut t = x.terms.clone();
        for (m, c) in &y.terms {
            *t.entry(m.clone()).or_insert(0) += c;
        }
        self.normalize(Element { terms: t })
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &y.scale(-1))
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        let mut t: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (m, a) in &x.terms {
            for (n, b) in &y.terms {
                let p = m.mul(n);
                self.check_monomial(&p)?;
                *t.entry(p).or_insert(0) += a * b;
            }
        }
        Ok(self.normalize(Element { terms: t }))
    }

    pub fn power(&self, x: &Element, k: u32) -> Result<Element, AlgebraError> {
        let mut acc = Element::monomial(self.one(), 1);
        for _ in 0..k {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn localize(&self, name: &str) -> Result<MonomialAlgebra, AlgebraError> {
        let i = self.index(name)?;
        if self.generators[i].annihilator != 0 {
            return Err(AlgebraError::TorsionGenerator(name.to_string()));
        }
        let mut out = self.clone();
        out.generators[i].invertible = true;
        Ok(out)
    }

    /// Rewrite every monomial so that the rewrite generator has exponent
    /// `-floor`, expanding the surplus through the defining polynomial.
    pub fn normalize_rewrite(&self, x: &Element) -> Result<Element, AlgebraError> {
        let Some(rw) = &self.rewrite else { return Ok(x.clone()) };
        let mut out = Element::zero();
        for (m, &c) in &x.terms {
            let e = m.0[rw.generator];
            let surplus = e + rw.floor;
            if surplus < 0 {
                return Err(AlgebraError::OutsideRewriteWindow(self.monomial_string(m)));
            }
            let mut base = m.clone();
            base.0[rw.generator] = -rw.floor;
            let mut term = Element::monomial(base, c);
            for _ in 0..surplus {
                term = self.multiply(&term, &rw.expansion)?;
            }
            out = self.add(&out, &term);
        }
        Ok(out)
    }

    fn exponent_range(&self, i: usize, bound: i64) -> (i64, i64) {
        if let Some(rw) = &self.rewrite {
            if rw.generator == i {
                return (-rw.floor, -rw.floor);
            }
        }
        if self.generators[i].invertible {
            (-bound, bound)
        } else {
            (0, bound)
        }
    }

    /// Exponent bound implied by positivity when no window is supplied.
    fn implied_bound(&self, target: BiDegree) -> Result<i64, AlgebraError> {
        let mut min_w = i64::MAX;
        for (i, g) in self.generators.iter().enumerate() {
            let pinned = self.rewrite.as_ref().is_some_and(|r| r.generator == i);
            if pinned {
                continue;
            }
            let w = g.degree.underlying_dimension() + 2 * g.filtration;
            if g.invertible || w <= 0 {
                return Err(AlgebraError::Unbounded);
            }
            min_w = min_w.min(w);
        }
        let total = target.degree.underlying_dimension() + 2 * target.s;
        Ok((total / min_w.max(1)).max(0))
    }

    /// All monomials of bidegree `(d, s)` with exponents inside the window,
    /// highest power of the alphabetically first generator first.
    pub fn basis_in_bidegree(&self, d: Degree, s: i64, bound: Option<i64>) -> Result<Vec<Monomial>, AlgebraError> {
        self.enumerator().basis(d, s, bound)
    }

    /// Reusable solver for repeated basis enumeration.
    pub fn enumerator(&self) -> BasisEnumerator<'_> {
        let cols: Vec<[i64; 3]> = self.generators.iter().map(|g| [g.degree.a, g.degree.b, g.filtration]).collect();
        let (pivots, rows) = pivot_columns(&cols);
        let r = pivots.len();
        let m: Vec<Vec<i64>> = rows.iter().map(|&row| pivots.iter().map(|&c| cols[c][row]).collect()).collect();
        let det_m = det(&m);
        // cofactors: x_j = sum_i cof[i][j] * b_i / det
        let cof: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let minor: Vec<Vec<i64>> = (0..r)
                            .filter(|&k| k != i)
                            .map(|k| (0..r).filter(|&l| l != j).map(|l| m[k][l]).collect())
                            .collect();
                        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                        sign * det(&minor)
                    })
                    .collect()
            })
            .collect();
        let free = (0..self.rank()).filter(|i| !pivots.contains(i)).collect();
        BasisEnumerator { alg: self, cols, pivots, rows, cof, det: det_m, free, order: self.name_order() }
    }

    fn name_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.rank()).collect();
        idx.sort_by(|&a, &b| self.generators[a].name.cmp(&self.generators[b].name));
        idx
    }

    pub fn monomial_string(&self, m: &Monomial) -> String {
        let parts: Vec<String> = self
            .generators
            .iter()
            .zip(&m.0)
            .filter(|(_, &e)| e != 0)
            .map(|(g, &e)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn element_string(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let order = self.name_order();
        let key = |m: &Monomial| order.iter().map(|&i| m.0[i]).collect::<Vec<i64>>();
        let mut terms: Vec<(&Monomial, &i64)> = x.terms.iter().collect();
        terms.sort_by_key(|p| std::cmp::Reverse(key(p.0)));
        let mut s = String::new();
        for (i, (m, &c)) in terms.into_iter().enumerate() {
            let ms = self.monomial_string(m);
            let sign = if c < 0 { "-" } else { "+" };
            let a = c.abs();
            let body = match (a, ms.as_str()) {
                (1, _) => ms.clone(),
                (_, "1") => a.to_string(),
                _ => format!("{a}*{ms}"),
            };
            if i == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            s.push_str(&body);
        }
        s
    }

    /// Parse sums like `a3bar^3*a1bar^3 - 27*a3bar^4` or `2*u_2sigma^-1`.
    pub fn parse_element(&self, text: &str) -> Result<Element, AlgebraError> {
        let err = || AlgebraError::Parse(text.to_string());
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut sign = 1;
        let mut cur = String::new();
        let chars: Vec<char> = t.chars().collect();
        for (i, &ch) in chars.iter().enumerate() {
            let after_caret = i > 0 && chars[i - 1] == '^';
            if (ch == '+' || ch == '-') && !after_caret {
                if !cur.is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                } else if i != 0 {
                    return Err(err());
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((sign, cur));
        let mut out = Element::zero();
        for (sign, term) in terms {
            let mut coeff = sign;
            let mut m = self.one();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err());
                }
                if let Ok(c) = factor.parse::<i64>() {
                    coeff *= c;
                    continue;
                }
                let (name, e) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i64>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                m.0[self.index(name)?] += e;
            }
            self.check_monomial(&m)?;
            out = self.add(&out, &Element::monomial(m, coeff));
        }
        Ok(out)
    }

    /// Subring of degree-zero monomials in the filtration-0, torsion-free
    /// generators.
    pub fn degree_zero_subring(&self, grading: Grading) -> Result<DegreeZeroRing, AlgebraError> {
        let gens: Vec<usize> =
            (0..self.rank()).filter(|&i| self.generators[i].filtration == 0 && self.generators[i].annihilator == 0).collect();
        let rows: Vec<Vec<i64>> = gens
            .iter()
            .map(|&i| {
                let d = self.generators[i].degree;
                match grading {
                    Grading::Equivariant => vec![d.a, d.b],
                    Grading::Underlying => vec![d.underlying_dimension()],
                }
            })
            .collect();
        let width = rows.first().map_or(0, |r| r.len());
        let kernel = if gens.is_empty() { vec![] } else { left_kernel(&rows, width) };
        let k = kernel.len();
        if k > 4 {
            return Err(AlgebraError::Unsupported(format!("degree-zero lattice of rank {k}")));
        }
        let inv: Vec<bool> = gens.iter().map(|&i| self.generators[i].invertible).collect();
        let to_mono = |v: &[i64]| {
            let mut m = self.one();
            for (&g, &e) in gens.iter().zip(v) {
                m.0[g] = e;
            }
            self.monomial_string(&m)
        };
        if k == 0 {
            return Ok(DegreeZeroRing { laurent: vec![], polynomial: vec![], shape: RingShape::Constants });
        }
        // lattice points of the kernel inside a coefficient box
        const RADIUS: i64 = 12;
        let mut points: Vec<Vec<i64>> = Vec::new();
        let mut coeffs = vec![-RADIUS; k];
        loop {
            let v: Vec<i64> = (0..gens.len()).map(|j| (0..k).map(|t| coeffs[t] * kernel[t][j]).sum()).collect();
            if v.iter().any(|&x| x != 0) && v.iter().zip(&inv).all(|(&x, &iv)| iv || x >= 0) {
                points.push(v);
            }
            let mut t = 0;
            while t < k && coeffs[t] == RADIUS {
                coeffs[t] = -RADIUS;
                t += 1;
            }
            if t == k {
                break;
            }
            coeffs[t] += 1;
        }
        let in_cone = |v: &[i64]| v.iter().zip(&inv).all(|(&x, &iv)| iv || x >= 0);
        let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        // lineality: directions whose negatives also lie in the cone
        let lineal: Vec<Vec<i64>> = points.iter().filter(|v| in_cone(&neg(v))).cloned().collect();
        let lineal_basis = crate::snf::hermite(&lineal, gens.len());
        let pointed: Vec<Vec<i64>> = points.iter().filter(|v| !in_cone(&neg(v))).cloned().collect();
        // irreducible elements of the pointed part modulo the lineality space
        let lin_rank = lineal_basis.len();
        let mut hilbert: Vec<Vec<i64>> = Vec::new();
        for v in &pointed {
            let reducible = pointed.iter().any(|w| {
                let rest: Vec<i64> = v.iter().zip(w).map(|(a, b)| a - b).collect();
                rest.iter().any(|&x| x != 0) && in_cone(&rest) && !in_cone(&neg(&rest))
            });
            if !reducible {
                hilbert.push(v.clone());
            }
        }
        if lin_rank > 0 {
            // keep one representative per class modulo the lineality space
            let mut reps: Vec<Vec<i64>> = Vec::new();
            for v in hilbert {
                let r = crate::snf::reduce(&v, &lineal_basis);
                if !reps.contains(&r) {
                    reps.push(r);
                }
            }
            hilbert = reps;
        }
        hilbert.sort();
        let laurent: Vec<String> = lineal_basis.iter().map(|v| to_mono(v)).collect();
        let polynomial: Vec<String> = hilbert.iter().map(|v| to_mono(v)).collect();
        let pointed_rank = k - lin_rank;
        let shape = match (laurent.is_empty(), polynomial.is_empty()) {
            (true, true) => RingShape::Constants,
            (false, true) => RingShape::Laurent,
            (true, false) if polynomial.len() == pointed_rank => RingShape::Polynomial,
            (false, false) if polynomial.len() == pointed_rank => RingShape::Mixed,
            _ => RingShape::Monoid,
        };
        Ok(DegreeZeroRing { laurent, polynomial, shape })
    }
}

/// Units of a polynomial or Laurent ring over `Z[1/3]`: `-1`, `3` and the
/// Laurent variables.
pub fn unit_group(r: &DegreeZeroRing) -> Result<FGAbelianGroup, AlgebraError> {
    if r.shape == RingShape::Monoid {
        return Err(AlgebraError::Unsupported("unit group of a non-free monoid ring".into()));
    }
    let mut orders = vec![2, 0];
    orders.extend(std::iter::repeat_n(0, r.laurent.len()));
    let mut labels = vec!["-1".to_string(), "3".to_string()];
    labels.extend(r.laurent.iter().cloned());
    Ok(FGAbelianGroup::from_orders(Ground::Z, &orders).with_labels(labels))
}

/// Known polynomials in `a1, a3` (or their barred forms when present).
pub fn expand_named(alg: &MonomialAlgebra, name: &str) -> Result<Element, AlgebraError> {
    let (a1, a3) = if alg.index("a1bar").is_ok() { ("a1bar", "a3bar") } else { ("a1", "a3") };
    let text = match name {
        "c4" => format!("{a1}^4 - 24*{a1}*{a3}"),
        "Delta" | "Δ" | "Dbar" | "Δ̄" => format!("{a3}^3*{a1}^3 - 27*{a3}^4"),
        other => return Err(AlgebraError::UnknownGenerator(other.to_string())),
    };
    alg.parse_element(&text)
}

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Greedy choice of independent columns together with rows giving a
/// nonsingular square minor.
fn pivot_columns(cols: &[[i64; 3]]) -> (Vec<usize>, Vec<usize>) {
    let mut best: (Vec<usize>, Vec<usize>) = (vec![], vec![]);
    let n = cols.len();
    let row_sets: [&[usize]; 7] = [&[0, 1, 2], &[0, 1], &[0, 2], &[1, 2], &[0], &[1], &[2]];
    for rows in row_sets {
        let r = rows.len();
        if r <= best.0.len() {
            continue;
        }
        // lexicographically first column subset of size r with nonzero minor
        let mut pick: Vec<usize> = Vec::new();
        fn search(n: usize, r: usize, start: usize, pick: &mut Vec<usize>, cols: &[[i64; 3]], rows: &[usize]) -> bool {
            if pick.len() == r {
                let m: Vec<Vec<i64>> = rows.iter().map(|&row| pick.iter().map(|&c| cols[c][row]).collect()).collect();
                return det(&m) != 0;
            }
            for c in start..n {
                pick.push(c);
                if search(n, r, c + 1, pick, cols, rows) {
                    return true;
                }
                pick.pop();
            }
            false
        }
        if search(n, r, 0, &mut pick, cols, rows) {
            best = (pick, rows.to_vec());
        }
    }
    best
}

/// Integer solution of the square system on the chosen rows and columns.
pub struct BasisEnumerator<'a> {
    alg: &'a MonomialAlgebra,
    cols: Vec<[i64; 3]>,
    pivots: Vec<usize>,
    rows: Vec<usize>,
    cof: Vec<Vec<i64>>,
    det: i64,
    free: Vec<usize>,
    order: Vec<usize>,
}

impl BasisEnumerator<'_> {
    pub fn basis(&self, d: Degree, s: i64, bound: Option<i64>) -> Result<Vec<Monomial>, AlgebraError> {
        let bound = match bound {
            Some(b) => b,
            None => self.alg.implied_bound(BiDegree::new(d, s))?,
        };
        let rhs = [d.a, d.b, s];
        let mut out = Vec::new();
        let mut exps = vec![0i64; self.cols.len()];
        self.walk(0, bound, &rhs, &mut exps, &mut out);
        out.sort_by(|x, y| {
            for &i in &self.order {
                match y.0[i].cmp(&x.0[i]) {
                    std::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            std::cmp::Ordering::Equal
        });
        Ok(out)
    }

    /// Generators of positive filtration are bounded by `s`, not the box.
    fn range(&self, i: usize, bound: i64, s: i64) -> (i64, i64) {
        let (lo, hi) = self.alg.exponent_range(i, bound);
        let f = self.cols[i][2];
        if f > 0 && lo >= 0 {
            (lo, s.div_euclid(f))
        } else {
            (lo, hi)
        }
    }

    fn walk(&self, k: usize, bound: i64, rhs: &[i64; 3], exps: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if k == self.free.len() {
            let mut res = *rhs;
            for &f in &self.free {
                for (r, x) in res.iter_mut().enumerate() {
                    *x -= exps[f] * self.cols[f][r];
                }
            }
            for (j, &p) in self.pivots.iter().enumerate() {
                let num: i64 = self.rows.iter().enumerate().map(|(i, &row)| self.cof[i][j] * res[row]).sum();
                if num % self.det != 0 {
                    return;
                }
                let v = num / self.det;
                let (lo, hi) = self.range(p, bound, rhs[2]);
                if v < lo || v > hi {
                    return;
                }
                exps[p] = v;
            }
            // equations outside the chosen rows
            for (r, &want) in rhs.iter().enumerate().take(3) {
                let lhs: i64 = (0..self.cols.len()).map(|i| exps[i] * self.cols[i][r]).sum();
                if lhs != want {
                    return;
                }
            }
            out.push(Monomial(exps.clone()));
            return;
        }
        let f = self.free[k];
        let (lo, hi) = self.range(f, bound, rhs[2]);
        for e in lo..=hi {
            exps[f] = e;
            self.walk(k + 1, bound, rhs, exps, out);
        }
        exps[f] = 0;
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |{}| s={}", self.name, self.degree, self.filtration)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> MonomialAlgebra {
        MonomialAlgebra::new(vec![
            Generator::new("a_sigma", Degree::new(0, -1), 1, 2, false),
            Generator::new("u_2sigma", Degree::new(2, -2), 0, 0, true),
            Generator::new("a1bar", Degree::new(1, 1), 0, 0, false),
            Generator::new("a3bar", Degree::new(3, 3), 0, 0, false),
        ])
        .unwrap()
    }

    #[test]
    fn small_bases() {
        let a = e2();
        let b = a.basis_in_bidegree(Degree::ZERO, 0, Some(64)).unwrap();
        assert_eq!(b, vec![a.one()]);
        let b = a.basis_in_bidegree(Degree::new(0, -1), 1, Some(64)).unwrap();
        assert_eq!(b, vec![a.gen("a_sigma").unwrap()]);
        let b = a.basis_in_bidegree(Degree::new(3, 3), 0, Some(64)).unwrap();
        let names: Vec<String> = b.iter().map(|m| a.monomial_string(m)).collect();
        assert_eq!(names, vec!["a1bar^3", "a3bar"]);
    }

    #[test]
    fn products() {
        let a = e2();
        let s = Element::monomial(a.gen("a_sigma").unwrap(), 1);
        assert_eq!(a.element_string(&a.multiply(&s, &s).unwrap()), "a_sigma^2");
        let two = Element::monomial(a.one(), 2);
        assert!(a.multiply(&two, &s).unwrap().is_zero());
        let u = a.parse_element("u_2sigma").unwrap();
        let ui = a.parse_element("u_2sigma^-1").unwrap();
        assert_eq!(a.multiply(&u, &ui).unwrap(), Element::monomial(a.one(), 1));
        assert!(a.parse_element("a1bar^-1").is_err());
    }

    #[test]
    fn localization() {
        let a = e2();
        let l = a.localize("a1bar").unwrap();
        assert!(l.generators[2].invertible);
        assert_eq!(l.localize("a1bar").unwrap(), l);
        assert_eq!(a.localize("a_sigma"), Err(AlgebraError::TorsionGenerator("a_sigma".into())));
        assert!(a.localize("nope").is_err());
    }

    #[test]
    fn named_polynomials() {
        let a = e2();
        let d = expand_named(&a, "Delta").unwrap();
        assert_eq!(a.element_string(&d), "a1bar^3*a3bar^3 - 27*a3bar^4");
        for m in d.terms.keys() {
            assert_eq!(a.degree(m), Degree::new(12, 12));
        }
        let c4 = expand_named(&a, "c4").unwrap();
        assert_eq!(a.element_string(&c4), "a1bar^4 - 24*a1bar*a3bar");
    }
}
