//! Page engine for multiplicative RO(C2)-graded spectral sequences whose
//! E2 page is a monomial algebra.
//!
//! Each piece `E_r(X)` is stored as a subquotient `Z_r / B_r` of the free
//! abelian group on the E2 monomial basis of `X`, with `2*m` in `B_2` for
//! every torsion monomial `m`. Homology is taken over `Z` and 3 is inverted
//! when groups are read off.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, Monomial, MonomialAlgebra, DEFAULT_EXPONENT_BOUND};
use crate::grading::{differential_source, differential_target, BiDegree, Degree};
use crate::group::{FGAbelianGroup, Ground};
use crate::snf::{coordinates, contains, hermite, left_kernel, reduce, smith_normal_form, Mat};

#[derive(Debug, Error)]
pub enum SseqError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("differential d_{0} applied to a page E_{1}")]
    PageMismatch(i64, i64),
    #[error("value of d_{r} on {generator} has bidegree {got}, expected {expected}")]
    WrongTarget { r: i64, generator: String, got: BiDegree, expected: BiDegree },
    #[error("d_{r} out of {at} leaves the computed window")]
    WindowTooSmall { r: i64, at: BiDegree },
    #[error("d_{r} is not well defined on E_{r} at {at}: {what}")]
    IllDefined { r: i64, at: BiDegree, what: String },
    #[error("differentials must be sorted by r")]
    Unsorted,
    #[error("invalid spec: {0}")]
    Spec(String),
}

/// `d_r(g^power) = value`, extended by the signed Leibniz rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffRule {
    pub generator: usize,
    pub power: i64,
    pub value: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    pub r: i64,
    pub rules: Vec<DiffRule>,
}

impl Differential {
    pub fn zero(r: i64) -> Self {
        Differential { r, rules: vec![] }
    }

    /// Keys are `name` or `name^e`; values use the element syntax.
    pub fn parse(alg: &MonomialAlgebra, r: i64, values: &BTreeMap<String, String>) -> Result<Self, SseqError> {
        let mut rules = Vec::new();
        for (key, val) in values {
            let (name, power) = match key.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| SseqError::Spec(format!("bad key `{key}`")))?),
                None => (key.as_str(), 1),
            };
            if power < 1 {
                return Err(SseqError::Spec(format!("bad key `{key}`")));
            }
            let generator = alg.index(name)?;
            let value = alg.parse_element(val)?;
            rules.push(DiffRule { generator, power, value });
        }
        let d = Differential { r, rules };
        d.validate(alg)?;
        Ok(d)
    }

    pub fn validate(&self, alg: &MonomialAlgebra) -> Result<(), SseqError> {
        if self.r < 2 {
            return Err(SseqError::Spec(format!("differential index {} < 2", self.r)));
        }
        for rule in &self.rules {
            let mut key = alg.one();
            key.0[rule.generator] = rule.power;
            let expected = differential_target(alg.bidegree(&key), self.r);
            for m in rule.value.terms.keys() {
                let got = alg.bidegree(m);
                if got != expected {
                    return Err(SseqError::WrongTarget {
                        r: self.r,
                        generator: alg.monomial_string(&key),
                        got,
                        expected,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Signed Leibniz expansion of `d` on a monomial. Generators are ordered as
/// declared; the sign is `(-1)^{a_0}` for the trivial part `a_0` of the
/// degree of the factors to the left. A rule keyed on `g^e` acts on
/// `g^k = (g^e)^q * g^(k - e*q)` with `q = floor(k/e)`, the remainder
/// being treated as a cycle.
pub fn leibniz_extend(alg: &MonomialAlgebra, d: &Differential, m: &Monomial) -> Result<Element, AlgebraError> {
    let mut out = Element::zero();
    for rule in &d.rules {
        let i = rule.generator;
        let q = m.0[i].div_euclid(rule.power);
        if q == 0 {
            continue;
        }
        let a0: i64 = (0..i).map(|j| m.0[j] * alg.generators[j].degree.a).sum();
        let sign = if a0.rem_euclid(2) == 0 { 1 } else { -1 };
        let mut rest = m.clone();
        rest.0[i] -= rule.power;
        let term = alg.multiply(&Element::monomial(rest, sign * q), &rule.value)?;
        out = alg.add(&out, &term);
    }
    Ok(out)
}

/// Apply `d` to an element.
pub fn apply(alg: &MonomialAlgebra, d: &Differential, x: &Element) -> Result<Element, AlgebraError> {
    let mut out = Element::zero();
    for (m, &c) in &x.terms {
        let dm = leibniz_extend(alg, d, m)?;
        out = alg.add(&out, &dm.scale(c));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub a: [i64; 2],
    pub b: [i64; 2],
    pub s_max: i64,
    #[serde(default = "default_bound")]
    pub exponent_bound: i64,
}

fn default_bound() -> i64 {
    DEFAULT_EXPONENT_BOUND
}

impl Window {
    pub fn square(n: i64, s_max: i64) -> Self {
        Window { a: [-n, n], b: [-n, n], s_max, exponent_bound: DEFAULT_EXPONENT_BOUND }
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.exponent_bound = bound;
        self
    }

    pub fn contains(&self, x: BiDegree) -> bool {
        (self.a[0]..=self.a[1]).contains(&x.degree.a)
            && (self.b[0]..=self.b[1]).contains(&x.degree.b)
            && (0..=self.s_max).contains(&x.s)
    }

    fn grow(&self, da: i64, ds: i64) -> Window {
        Window { a: [self.a[0] - da, self.a[1] + da], b: self.b, s_max: self.s_max + ds, exponent_bound: self.exponent_bound }
    }

    fn bidegrees(&self) -> Vec<BiDegree> {
        let mut v = Vec::new();
        for a in self.a[0]..=self.a[1] {
            for b in self.b[0]..=self.b[1] {
                for s in 0..=self.s_max {
                    v.push(BiDegree::new(Degree::new(a, b), s));
                }
            }
        }
        v
    }
}

/// One bidegree of one page.
#[derive(Clone, Debug)]
pub struct Piece {
    pub basis: Arc<Vec<Monomial>>,
    pub torsion: Arc<Vec<bool>>,
    /// Hermite basis of the cycle lattice `Z_r`.
    pub cycles: Mat,
    /// Hermite basis of the boundary lattice `B_r` (contains `2*m` for torsion `m`).
    pub boundaries: Mat,
    /// False once the piece depends on data outside the computed window.
    pub reliable: bool,
    /// True when a differential value had terms outside the exponent box.
    pub truncated: bool,
    index: Arc<HashMap<Monomial, usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Class {
    pub label: String,
    /// Order of the class over Z[1/3]; 0 for infinite order.
    pub order: i64,
    /// Representative as coefficient vector over the E2 basis.
    #[serde(skip)]
    pub rep: Vec<i64>,
}

impl Piece {
    fn new(alg: &MonomialAlgebra, basis: Vec<Monomial>) -> Self {
        let n = basis.len();
        let torsion: Vec<bool> = basis.iter().map(|m| alg.is_torsion(m)).collect();
        let cycles = (0..n).map(|i| unit(n, i, 1)).collect();
        let boundaries = (0..n).filter(|&i| torsion[i]).map(|i| unit(n, i, 2)).collect();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Piece {
            basis: Arc::new(basis),
            torsion: Arc::new(torsion),
            cycles,
            boundaries,
            reliable: true,
            truncated: false,
            index: Arc::new(index),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of an element whose monomials all lie in this piece.
    pub fn vector(&self, x: &Element) -> Option<Vec<i64>> {
        let mut v = vec![0; self.dim()];
        for (m, &c) in &x.terms {
            v[self.position(m)?] += c;
        }
        Some(v)
    }

    fn element(&self, v: &[i64]) -> Element {
        let mut e = Element::zero();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                e.terms.insert(self.basis[i].clone(), c);
            }
        }
        e
    }

    /// The group `Z_r / B_r` over `Z[1/3]`.
    pub fn group(&self) -> FGAbelianGroup {
        let orders: Vec<i64> = self.classes_raw().into_iter().map(|(_, o)| o).collect();
        FGAbelianGroup::from_orders(Ground::ZThird, &orders)
    }

    /// Generators with their orders (3-power factors discarded).
    fn classes_raw(&self) -> Vec<(Vec<i64>, i64)> {
        if let Some(d) = self.diagonal() {
            return d;
        }
        let coords: Vec<Vec<i64>> = self
            .boundaries
            .iter()
            .map(|b| coordinates(b, &self.cycles).expect("boundaries lie in cycles"))
            .collect();
        let p = self.cycles.len();
        if p == 0 {
            return vec![];
        }
        let snf = if coords.is_empty() { None } else { Some(smith_normal_form(&coords)) };
        let gens: Mat = match &snf {
            Some(s) => crate::snf::matmul(&s.v_inv.to_vec(), &self.cycles),
            None => self.cycles.clone(),
        };
        let mut out = Vec::new();
        for (i, g) in gens.into_iter().enumerate() {
            let d = snf.as_ref().and_then(|s| s.diag.get(i).copied()).unwrap_or(0);
            let o = strip3(d);
            if o != 1 {
                out.push((g, o));
            }
        }
        out
    }

    /// Monomial-adapted description when both lattices are diagonal.
    fn diagonal(&self) -> Option<Vec<(Vec<i64>, i64)>> {
        let single = |row: &Vec<i64>| {
            let nz: Vec<usize> = (0..row.len()).filter(|&i| row[i] != 0).collect();
            (nz.len() == 1).then(|| (nz[0], row[nz[0]]))
        };
        let mut z: BTreeMap<usize, i64> = BTreeMap::new();
        for row in &self.cycles {
            let (i, c) = single(row)?;
            z.insert(i, c);
        }
        let mut b: BTreeMap<usize, i64> = BTreeMap::new();
        for row in &self.boundaries {
            let (i, c) = single(row)?;
            b.insert(i, c);
        }
        let mut out = Vec::new();
        for (&i, &c) in &z {
            let order = match b.get(&i) {
                Some(&bb) => strip3(bb / c),
                None => 0,
            };
            if order != 1 {
                out.push((unit(self.dim(), i, c), order));
            }
        }
        Some(out)
    }

    pub fn classes(&self, alg: &MonomialAlgebra) -> Vec<Class> {
        self.classes_raw()
            .into_iter()
            .map(|(rep, order)| Class { label: self.label(alg, &rep), order, rep })
            .collect()
    }

    fn label(&self, alg: &MonomialAlgebra, rep: &[i64]) -> String {
        let nz: Vec<usize> = (0..rep.len()).filter(|&i| rep[i] != 0).collect();
        if nz.len() == 1 {
            let m = alg.monomial_string(&self.basis[nz[0]]);
            return match rep[nz[0]] {
                1 => m,
                c => format!("{c}·{m}"),
            };
        }
        alg.element_string(&self.element(rep))
    }

    pub fn is_zero(&self) -> bool {
        self.classes_raw().is_empty()
    }
}

fn strip3(mut x: i64) -> i64 {
    x = x.abs();
    while x != 0 && x % 3 == 0 {
        x /= 3;
    }
    x
}

fn unit(n: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = c;
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    /// classes of this piece supported a nonzero `d_r`
    Supports,
    /// classes of this piece were hit by `d_r`
    Hit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    pub r: i64,
    pub kind: EventKind,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Page {
    pub r: i64,
    pub window: Window,
    pub pieces: BTreeMap<BiDegree, Piece>,
    pub provenance: BTreeMap<BiDegree, Vec<Event>>,
}

/// Membership status of an element on a page.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    NotACycle,
    Zero,
    NonZero,
    Unknown,
}

impl Page {
    /// The E2 page over `window`.
    pub fn e2(alg: &MonomialAlgebra, window: Window) -> Result<Page, SseqError> {
        let bds = window.bidegrees();
        let en = alg.enumerator();
        let bases: Vec<(BiDegree, Result<Vec<Monomial>, AlgebraError>)> =
            bds.into_iter().map(|x| (x, en.basis(x.degree, x.s, Some(window.exponent_bound)))).collect();
        let mut pieces = BTreeMap::new();
        for (x, b) in bases {
            let b = b?;
            if !b.is_empty() {
                pieces.insert(x, Piece::new(alg, b));
            }
        }
        Ok(Page { r: 2, window, pieces, provenance: BTreeMap::new() })
    }

    pub fn piece(&self, x: BiDegree) -> Option<&Piece> {
        self.pieces.get(&x)
    }

    /// Whether `x` is known to be zero at E2 even if outside the window.
    fn known_empty(alg: &MonomialAlgebra, window: &Window, x: BiDegree) -> bool {
        x.s < 0
            || alg.basis_in_bidegree(x.degree, x.s, Some(window.exponent_bound)).map(|b| b.is_empty()).unwrap_or(false)
    }

    pub fn group(&self, x: BiDegree) -> FGAbelianGroup {
        self.pieces.get(&x).map(|p| p.group()).unwrap_or_else(|| FGAbelianGroup::zero(Ground::ZThird))
    }

    pub fn reliable(&self, x: BiDegree) -> bool {
        self.pieces.get(&x).map_or(self.window.contains(x) || x.s < 0, |p| p.reliable)
    }

    /// Status of a homogeneous element. The element must be a cycle for the
    /// differentials of earlier pages.
    pub fn status(&self, alg: &MonomialAlgebra, x: &Element) -> Status {
        let Ok(x) = alg.normalize_rewrite(x) else { return Status::Unknown };
        let x = alg.normalize(x);
        let Some(m) = x.terms.keys().next() else { return Status::Zero };
        let bd = alg.bidegree(m);
        let Some(p) = self.pieces.get(&bd) else {
            return if self.window.contains(bd) { Status::Zero } else { Status::Unknown };
        };
        if !p.reliable {
            return Status::Unknown;
        }
        let Some(v) = p.vector(&x) else { return Status::Unknown };
        if !contains(&p.cycles, &v) {
            Status::NotACycle
        } else if contains(&p.boundaries, &v) {
            Status::Zero
        } else {
            Status::NonZero
        }
    }

    /// `E_{r+1}` from `E_r` and `d_r`.
    pub fn turn(&self, alg: &MonomialAlgebra, d: &Differential, check: bool) -> Result<Page, SseqError> {
        if d.r != self.r {
            return Err(SseqError::PageMismatch(d.r, self.r));
        }
        let r = d.r;
        let keys: Vec<BiDegree> = self.pieces.keys().copied().collect();
        let images: HashMap<BiDegree, Image> = keys
            .par_iter()
            .map(|&x| self.image(alg, d, x).map(|im| (x, im)))
            .collect::<Result<_, SseqError>>()?;
        if check {
            keys.par_iter().try_for_each(|&x| self.check_well_defined(d.r, x, &images[&x]))?;
        }
        let new: Vec<(BiDegree, Piece, Vec<Event>)> =
            keys.par_iter().map(|&x| self.update(x, r, &images)).collect();
        let mut pieces = BTreeMap::new();
        let mut provenance = self.provenance.clone();
        for (x, np, ev) in new {
            if !ev.is_empty() {
                provenance.entry(x).or_default().extend(ev);
            }
            pieces.insert(x, np);
        }
        Ok(Page { r: r + 1, window: self.window, pieces, provenance })
    }

    /// `d_r` on the basis and on the cycle generators of one piece.
    fn image(&self, alg: &MonomialAlgebra, d: &Differential, x: BiDegree) -> Result<Image, SseqError> {
        let p = &self.pieces[&x];
        let y = differential_target(x, d.r);
        if d.rules.is_empty() {
            return Ok(Image::Zero);
        }
        let Some(q) = self.pieces.get(&y) else {
            if Self::known_empty(alg, &self.window, y) {
                return Ok(Image::Zero);
            }
            let vanishes = p
                .cycles
                .iter()
                .map(|z| apply(alg, d, &p.element(z)).map(|e| e.is_zero()))
                .collect::<Result<Vec<bool>, _>>()?;
            return Ok(if vanishes.iter().all(|&v| v) { Image::Zero } else { Image::Unknown });
        };
        let mut truncated = false;
        let mut basis_images: Vec<Vec<(usize, i64)>> = Vec::with_capacity(p.dim());
        for m in p.basis.iter() {
            let dm = leibniz_extend(alg, d, m)?;
            let mut terms = Vec::new();
            for (t, &c) in &dm.terms {
                match q.position(t) {
                    Some(j) => terms.push((j, c)),
                    None => truncated = true,
                }
            }
            basis_images.push(terms);
        }
        let push = |v: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; q.dim()];
            for (i, &c) in v.iter().enumerate() {
                if c != 0 {
                    for &(j, e) in &basis_images[i] {
                        out[j] += c * e;
                    }
                }
            }
            for (j, o) in out.iter_mut().enumerate() {
                if q.torsion[j] {
                    *o = o.rem_euclid(2);
                }
            }
            out
        };
        let rows: Mat = p.cycles.iter().map(|z| push(z)).collect();
        let of_boundaries: Mat = p.boundaries.iter().map(|b| push(b)).collect();
        if rows.iter().all(|v| v.iter().all(|&c| c == 0)) && !truncated {
            return Ok(Image::Zero);
        }
        Ok(Image::Rows { rows, of_boundaries, truncated })
    }

    fn check_well_defined(&self, r: i64, x: BiDegree, image: &Image) -> Result<(), SseqError> {
        let Image::Rows { rows, of_boundaries, truncated: false } = image else { return Ok(()) };
        let y = differential_target(x, r);
        let q = &self.pieces[&y];
        if !q.reliable || !self.pieces[&x].reliable {
            return Ok(());
        }
        if rows.iter().any(|v| !contains(&q.cycles, v)) {
            return Err(SseqError::IllDefined { r, at: x, what: "image is not a cycle".into() });
        }
        if of_boundaries.iter().any(|v| !contains(&q.boundaries, v)) {
            return Err(SseqError::IllDefined { r, at: x, what: "boundary maps to a nonzero class".into() });
        }
        Ok(())
    }

    fn update(&self, x: BiDegree, r: i64, images: &HashMap<BiDegree, Image>) -> (BiDegree, Piece, Vec<Event>) {
        let p = &self.pieces[&x];
        let y = differential_target(x, r);
        let w = differential_source(x, r);
        let mut np = p.clone();
        let mut events = Vec::new();
        match &images[&x] {
            Image::Zero => {}
            Image::Unknown => np.reliable = false,
            Image::Rows { rows, truncated, .. } => {
                let q = &self.pieces[&y];
                np.truncated |= *truncated;
                np.reliable &= q.reliable;
                let newz = kernel_mod(&p.cycles, rows, &q.boundaries, p.dim(), q.dim());
                if newz != p.cycles {
                    events.push(Event { r, kind: EventKind::Supports, rank: p.cycles.len() - newz.len() });
                }
                np.cycles = newz;
            }
        }
        match images.get(&w) {
            Some(Image::Rows { rows, .. }) => {
                np.reliable &= self.pieces[&w].reliable;
                let newb = lattice_sum(&p.boundaries, rows, p.dim());
                if newb != p.boundaries {
                    events.push(Event { r, kind: EventKind::Hit, rank: newb.len() - p.boundaries.len() });
                }
                np.boundaries = newb;
            }
            Some(Image::Unknown) => np.reliable = false,
            Some(Image::Zero) => {}
            None => {
                if !(w.s < 0 || self.window.contains(w)) {
                    np.reliable = false;
                }
            }
        }
        (x, np, events)
    }

    /// `E_{r+1} = E_r` for a page with no listed differential.
    pub fn advance(&self) -> Page {
        Page { r: self.r + 1, window: self.window, pieces: self.pieces.clone(), provenance: self.provenance.clone() }
    }

    /// Reliable nonzero pieces inside `report`.
    pub fn nonzero_set(&self, report: &Window) -> HashSet<BiDegree> {
        self.pieces
            .par_iter()
            .filter(|(x, p)| report.contains(**x) && p.reliable && !p.is_zero())
            .map(|(x, _)| *x)
            .collect()
    }

    /// Bidegree pairs inside `report` where a `d_r` could be nonzero for
    /// degree reasons: source and target both nonzero. Also counts sources
    /// whose target leaves the report window.
    pub fn possible_differentials(&self, r: i64, report: &Window) -> (Vec<BiDegree>, usize) {
        possible_in(&self.nonzero_set(report), r, report)
    }
}

fn possible_in(nonzero: &HashSet<BiDegree>, r: i64, report: &Window) -> (Vec<BiDegree>, usize) {
    let mut found = Vec::new();
    let mut exits = 0;
    for &x in nonzero {
        let y = differential_target(x, r);
        if !report.contains(y) {
            exits += 1;
        } else if nonzero.contains(&y) {
            found.push(x);
        }
    }
    found.sort();
    (found, exits)
}

enum Image {
    /// `d_r` vanishes on the cycles
    Zero,
    /// target outside the computed window
    Unknown,
    Rows { rows: Mat, of_boundaries: Mat, truncated: bool },
}

/// Entries of a lattice basis in which every row has one nonzero entry.
fn diagonal_entries(m: &[Vec<i64>]) -> Option<Vec<(usize, i64)>> {
    m.iter()
        .map(|row| {
            let mut it = row.iter().enumerate().filter(|(_, &c)| c != 0);
            let first = it.next().map(|(i, &c)| (i, c));
            if it.next().is_some() {
                None
            } else {
                first
            }
        })
        .collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn diagonal_hnf(n: usize, entries: &BTreeMap<usize, i64>) -> Mat {
    entries.iter().filter(|(_, &c)| c != 0).map(|(&i, &c)| unit(n, i, c.abs())).collect()
}

/// `{z in Z : image(z) in B}` for `Z` given by Hermite rows and `rows[t]`
/// the image of `Z[t]`.
fn kernel_mod(cycles: &Mat, rows: &Mat, target_b: &Mat, n: usize, m: usize) -> Mat {
    // single-entry images on diagonal lattices: componentwise
    if let (Some(z), Some(b), Some(img)) = (diagonal_entries(cycles), diagonal_entries(target_b), monomial_rows(rows)) {
        let targets: Vec<usize> = img.iter().filter_map(|e| e.map(|(j, _)| j)).collect();
        let distinct = targets.iter().collect::<HashSet<_>>().len() == targets.len();
        if distinct {
            let bmap: HashMap<usize, i64> = b.into_iter().collect();
            let mut out = BTreeMap::new();
            for ((i, c), e) in z.into_iter().zip(img) {
                match e {
                    None => {
                        out.insert(i, c);
                    }
                    Some((j, v)) => {
                        let bj = bmap.get(&j).copied().unwrap_or(0);
                        if bj != 0 {
                            out.insert(i, c * (bj / gcd(bj, v)));
                        }
                    }
                }
            }
            return diagonal_hnf(n, &out);
        }
    }
    let mut stack = rows.clone();
    stack.extend(target_b.iter().cloned());
    let ker = left_kernel(&stack, m);
    let pz = cycles.len();
    let zs: Mat = ker
        .iter()
        .map(|k| (0..n).map(|j| (0..pz).map(|t| k[t] * cycles[t][j]).sum()).collect())
        .collect();
    hermite(&zs, n)
}

/// `Some(None)` for a zero row, `Some(Some((j, v)))` for `v e_j`.
fn monomial_rows(rows: &Mat) -> Option<Vec<Option<(usize, i64)>>> {
    rows.iter()
        .map(|row| {
            let nz: Vec<(usize, i64)> = row.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
            match nz.len() {
                0 => Some(None),
                1 => Some(Some(nz[0])),
                _ => None,
            }
        })
        .collect()
}

fn lattice_sum(b: &Mat, rows: &Mat, n: usize) -> Mat {
    if let (Some(bd), Some(img)) = (diagonal_entries(b), monomial_rows(rows)) {
        let mut out: BTreeMap<usize, i64> = bd.into_iter().collect();
        for (j, v) in img.into_iter().flatten() {
            let e = out.entry(j).or_insert(0);
            *e = gcd(*e, v);
        }
        return diagonal_hnf(n, &out);
    }
    let mut all = b.clone();
    all.extend(rows.iter().cloned());
    hermite(&all, n)
}

/// Outcome of running all pages.
#[derive(Clone, Debug)]
pub struct StableRun {
    pub e_inf: Page,
    /// Page from which nothing changes inside the report window.
    pub stable_page: i64,
    /// `(source, r)` for differentials possible by degree but not supplied.
    pub unresolved: Vec<(BiDegree, i64)>,
    /// Sources whose potential targets leave the report window.
    pub exits: usize,
    pub report: Window,
}

/// Run the listed differentials in order over `report`, computing on a
/// window enlarged just enough that every piece of `report` is exact.
pub fn run_to_stable(
    alg: &MonomialAlgebra,
    diffs: &[Differential],
    report: Window,
    r_max: i64,
) -> Result<StableRun, SseqError> {
    if diffs.windows(2).any(|w| w[0].r >= w[1].r) {
        return Err(SseqError::Unsorted);
    }
    for d in diffs {
        d.validate(alg)?;
    }
    let sum_r: i64 = diffs.iter().map(|d| d.r).sum();
    let compute = report.grow(diffs.len() as i64, sum_r);
    let mut page = Page::e2(alg, compute)?;
    let mut stable_page = 2;
    let mut unresolved = Vec::new();
    let mut exits = 0;
    let last = diffs.last().map_or(1, |d| d.r);
    let top = r_max.max(last);
    let mut nonzero: Option<HashSet<BiDegree>> = None;
    for r in 2..=top {
        if let Some(d) = diffs.iter().find(|d| d.r == r) {
            page.r = r;
            let next = page.turn(alg, d, true)?;
            let changed = next.pieces.par_iter().any(|(x, p)| {
                report.contains(*x) && {
                    let old = &page.pieces[x];
                    old.cycles != p.cycles || old.boundaries != p.boundaries
                }
            });
            if changed {
                stable_page = r + 1;
            }
            page = next;
            nonzero = None;
        } else {
            let nz = nonzero.get_or_insert_with(|| page.nonzero_set(&report));
            let (found, ex) = possible_in(nz, r, &report);
            exits = exits.max(ex);
            unresolved.extend(found.into_iter().map(|x| (x, r)));
        }
    }
    page.r = top + 1;
    Ok(StableRun { e_inf: page, stable_page, unresolved, exits, report })
}

/// `E_r` computed on a window grown enough for `report` to be exact.
pub fn page_at(alg: &MonomialAlgebra, diffs: &[Differential], report: &Window, r: i64) -> Result<Page, SseqError> {
    let sum_r: i64 = diffs.iter().map(|d| d.r).sum();
    let mut page = Page::e2(alg, report.grow(diffs.len() as i64, sum_r))?;
    for q in 2..r {
        page = match diffs.iter().find(|d| d.r == q) {
            Some(d) => {
                page.r = q;
                page.turn(alg, d, true)?
            }
            None => page.advance(),
        };
    }
    page.r = r;
    Ok(page)
}

/// Associated graded of `E_inf` in one degree and its assembly.
#[derive(Clone, Debug, Serialize)]
pub struct Abutment {
    pub degree: Degree,
    pub filtrations: Vec<(i64, FGAbelianGroup)>,
    pub assembled: Option<FGAbelianGroup>,
    pub extension_unresolved: bool,
}

pub fn abutment(e_inf: &Page, d: Degree) -> Abutment {
    let mut filtrations = Vec::new();
    let mut total = FGAbelianGroup::zero(Ground::ZThird);
    let mut torsion_classes = 0;
    for s in 0..=e_inf.window.s_max {
        let g = e_inf.group(BiDegree::new(d, s));
        if !g.is_zero() {
            torsion_classes += g.invariant_factors.len();
            total = total.direct_sum(&g);
            filtrations.push((s, g));
        }
    }
    let ok = torsion_classes <= 1;
    Abutment { degree: d, filtrations, assembled: ok.then_some(total), extension_unresolved: !ok }
}

/// Serialized form of a spectral-sequence input.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SseqSpec {
    pub algebra: MonomialAlgebra,
    pub differentials: Vec<DiffSpec>,
    pub window: Window,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffSpec {
    pub r: i64,
    pub values: BTreeMap<String, String>,
}

impl SseqSpec {
    pub fn from_json(text: &str) -> Result<Self, SseqError> {
        let spec: SseqSpec = serde_json::from_str(text).map_err(|e| SseqError::Spec(e.to_string()))?;
        spec.algebra.validate()?;
        Ok(spec)
    }

    pub fn differentials(&self) -> Result<Vec<Differential>, SseqError> {
        let mut v: Vec<Differential> =
            self.differentials.iter().map(|d| Differential::parse(&self.algebra, d.r, &d.values)).collect::<Result<_, _>>()?;
        v.sort_by_key(|d| d.r);
        Ok(v)
    }
}

/// Reduce `v` modulo the boundaries of a piece: canonical coset representative.
pub fn reduce_mod_boundaries(p: &Piece, v: &[i64]) -> Vec<i64> {
    reduce(v, &p.boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;

    fn e2() -> MonomialAlgebra {
        MonomialAlgebra::new(vec![
            Generator::new("a_sigma", Degree::new(0, -1), 1, 2, false),
            Generator::new("u_2sigma", Degree::new(2, -2), 0, 0, true),
            Generator::new("a1bar", Degree::new(1, 1), 0, 0, false),
            Generator::new("a3bar", Degree::new(3, 3), 0, 0, false),
        ])
        .unwrap()
    }

    fn d3(alg: &MonomialAlgebra) -> Differential {
        let mut v = BTreeMap::new();
        v.insert("u_2sigma".to_string(), "a_sigma^3*a1bar".to_string());
        Differential::parse(alg, 3, &v).unwrap()
    }

    #[test]
    fn leibniz_examples() {
        let a = e2();
        let d = d3(&a);
        let u = a.gen("u_2sigma").unwrap();
        assert_eq!(a.element_string(&leibniz_extend(&a, &d, &u).unwrap()), "a_sigma^3*a1bar");
        assert!(leibniz_extend(&a, &d, &u.pow(2)).unwrap().is_zero());
        assert!(leibniz_extend(&a, &d, &a.gen("a_sigma").unwrap()).unwrap().is_zero());
    }

    #[test]
    fn wrong_target_rejected() {
        let a = e2();
        let mut v = BTreeMap::new();
        v.insert("u_2sigma".to_string(), "a_sigma^2*a1bar".to_string());
        assert!(Differential::parse(&a, 3, &v).is_err());
    }

    #[test]
    fn first_page_turn() {
        let a = e2();
        let w = Window { a: [-4, 4], b: [-6, 4], s_max: 8, exponent_bound: 16 };
        let p = Page::e2(&a, w).unwrap();
        let q = p.advance().turn(&a, &d3(&a), true).unwrap();
        let ux = BiDegree::new(Degree::new(2, -2), 0);
        let cls = q.pieces[&ux].classes(&a);
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].label, "2·u_2sigma");
        assert_eq!(cls[0].order, 0);
        let tx = BiDegree::new(Degree::new(1, -2), 3);
        assert!(q.pieces[&tx].is_zero());
        let z = p.advance();
        assert_eq!(z.pieces[&ux].cycles, p.pieces[&ux].cycles);
    }
}
