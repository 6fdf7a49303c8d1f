//! Brute-force reference for the HFPSS pages: bases by direct enumeration,
//! differentials from closed forms, homology by Smith normal form.

use std::collections::HashMap;

use c2ss::grading::{BiDegree, Degree};
use c2ss::group::{FGAbelianGroup, Ground};
use c2ss::snf::{matmul, smith_normal_form, Mat};

/// Exponents (i, f, g, h) of a_sigma^i u^f a1bar^g a3bar^h.
pub type Mono = [i64; 4];

#[derive(Clone, Copy)]
pub struct Shape {
    pub a1_inv: bool,
    pub a3_inv: bool,
    pub bound: i64,
}

/// Brute-force basis of a bidegree: loop over a1bar and a3bar exponents.
pub fn basis(shape: Shape, x: BiDegree) -> Vec<Mono> {
    let (a, b, s) = (x.degree.a, x.degree.b, x.s);
    let range = |inv: bool| if inv { -shape.bound..=shape.bound } else { 0..=shape.bound };
    let mut out = Vec::new();
    if s < 0 {
        return out;
    }
    for g in range(shape.a1_inv) {
        for h in range(shape.a3_inv) {
            let n = g + 3 * h;
            if (a - n) % 2 != 0 {
                continue;
            }
            let f = (a - n) / 2;
            if f.abs() > shape.bound || -s - 2 * f + n != b {
                continue;
            }
            out.push([s, f, g, h]);
        }
    }
    out
}

/// Closed forms of the two differentials on a monomial.
pub fn d_closed(r: i64, m: Mono) -> Option<(i64, Mono)> {
    let [i, f, g, h] = m;
    match r {
        3 if f != 0 => Some((f, [i + 3, f - 1, g + 1, h])),
        7 if f.div_euclid(2) != 0 => Some((f.div_euclid(2), [i + 7, f - 2, g, h + 1])),
        _ => None,
    }
}

fn rowspace(rows: &Mat, n: usize) -> Mat {
    if rows.is_empty() {
        return vec![];
    }
    let s = smith_normal_form(rows);
    let vi = s.v_inv;
    (0..s.diag.len()).filter(|&i| s.diag[i] != 0).map(|i| vi[i].iter().map(|&x| x * s.diag[i]).collect()).collect::<Mat>()
        .into_iter()
        .filter(|r: &Vec<i64>| r.len() == n)
        .collect()
}

/// Rows `c` with `c * m = 0`, from the SNF of `m`.
fn left_null(m: &Mat) -> Mat {
    let s = smith_normal_form(m);
    let rank = s.rank();
    s.u[rank..].to_vec()
}

/// Invariants of `Z / B` with `B` inside `Z`, both given by generating rows.
pub fn quotient(z: &Mat, b: &Mat, n: usize) -> FGAbelianGroup {
    let z = rowspace(z, n);
    let p = z.len();
    if p == 0 {
        return FGAbelianGroup::zero(Ground::ZThird);
    }
    let s = smith_normal_form(&z);
    let bv = if b.is_empty() { vec![] } else { matmul(b, &s.v) };
    let mut scaled: Mat = Vec::new();
    for row in &bv {
        let r: Vec<i64> = (0..p)
            .map(|j| {
                assert_eq!(row[j] % s.diag[j], 0, "boundary outside cycles");
                row[j] / s.diag[j]
            })
            .collect();
        scaled.push(r);
    }
    let c = if scaled.is_empty() { vec![] } else { matmul(&scaled, &s.u[..p]) };
    let mut orders: Vec<i64> = vec![0; p];
    if !c.is_empty() {
        let t = smith_normal_form(&c);
        for (i, &d) in t.diag.iter().enumerate() {
            orders[i] = d;
        }
    }
    FGAbelianGroup::from_orders(Ground::ZThird, &orders)
}

pub struct OraclePage {
    pub basis: HashMap<BiDegree, Vec<Mono>>,
    pub z: HashMap<BiDegree, Mat>,
    pub b: HashMap<BiDegree, Mat>,
}

impl OraclePage {
    pub fn e2(shape: Shape, a: [i64; 2], bb: [i64; 2], s_max: i64) -> Self {
        let mut basis = HashMap::new();
        let mut z = HashMap::new();
        let mut b = HashMap::new();
        for x in a[0]..=a[1] {
            for y in bb[0]..=bb[1] {
                for s in 0..=s_max {
                    let k = BiDegree::new(Degree::new(x, y), s);
                    let bs = basis_of(shape, k);
                    if bs.is_empty() {
                        continue;
                    }
                    let n = bs.len();
                    z.insert(k, (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect());
                    b.insert(k, bs.iter().enumerate().filter(|(_, m)| m[0] > 0).map(|(i, _)| (0..n).map(|j| if i == j { 2 } else { 0 }).collect()).collect());
                    basis.insert(k, bs);
                }
            }
        }
        OraclePage { basis, z, b }
    }

    fn d_matrix(&self, r: i64, x: BiDegree) -> Option<Mat> {
        let src = &self.basis[&x];
        let y = BiDegree::new(Degree::new(x.degree.a - 1, x.degree.b), x.s + r);
        let tgt = self.basis.get(&y)?;
        let pos: HashMap<Mono, usize> = tgt.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Some(
            src.iter()
                .map(|m| {
                    let mut row = vec![0; tgt.len()];
                    if let Some((c, t)) = d_closed(r, *m) {
                        if let Some(&j) = pos.get(&t) {
                            row[j] = c;
                        }
                    }
                    row
                })
                .collect(),
        )
    }

    pub fn turn(&self, r: i64) -> Self {
        let mut z = self.z.clone();
        let mut b = self.b.clone();
        for (&x, zx) in &self.z {
            let y = BiDegree::new(Degree::new(x.degree.a - 1, x.degree.b), x.s + r);
            let Some(dm) = self.d_matrix(r, x) else { continue };
            if zx.is_empty() {
                continue;
            }
            let img = matmul(zx, &dm);
            let by = &self.b[&y];
            let mut stack = img.clone();
            stack.extend(by.iter().cloned());
            let null = left_null(&stack);
            let combos: Mat = null.iter().map(|c| c[..zx.len()].to_vec()).collect();
            let nz = if combos.is_empty() { vec![] } else { matmul(&combos, zx) };
            let mut nz = nz;
            nz.extend(self.b[&x].iter().cloned());
            z.insert(x, rowspace(&nz, self.basis[&x].len()));
            let e = b.get_mut(&y).unwrap();
            e.extend(img);
            *e = rowspace(e, self.basis[&y].len());
        }
        OraclePage { basis: self.basis.clone(), z, b }
    }

    pub fn group(&self, x: BiDegree) -> FGAbelianGroup {
        match self.basis.get(&x) {
            None => FGAbelianGroup::zero(Ground::ZThird),
            Some(bs) => quotient(&self.z[&x], &self.b[&x], bs.len()),
        }
    }
}

fn basis_of(shape: Shape, x: BiDegree) -> Vec<Mono> {
    basis(shape, x)
}
