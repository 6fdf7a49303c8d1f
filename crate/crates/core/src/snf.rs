//! Integer linear algebra: Smith normal form with transforms, Hermite
//! normal form of row lattices, kernels and lattice membership.

pub type Mat = Vec<Vec<i64>>;

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact linear algebra")
}

fn widen(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn shrink(m: Vec<Vec<i128>>) -> Mat {
    m.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| narrow((0..inner).map(|k| row[k] as i128 * b[k][j] as i128).sum()))
                .collect()
        })
        .collect()
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, the diagonal
/// a non-negative divisibility chain.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<i64>,
    pub u: Mat,
    pub v: Mat,
    pub v_inv: Mat,
    pub d: Mat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&x| x != 0).count()
    }
}

/// `(g, x, y)` with `g = gcd(a, b) >= 0` and `a x + b y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (a, b, 1i128, 0i128, 0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn transpose(m: &[Vec<i128>], cols: usize) -> Vec<Vec<i128>> {
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn mul128(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

/// Reduced row echelon form `h = t * a` with `t` unimodular; zero rows of
/// `h` last and the matching rows of `t` (a kernel basis) kept reduced.
fn hermite_transform(a: &[Vec<i128>], cols: usize) -> (Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let rows = a.len();
    let aug: Vec<Vec<i128>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut x = r.clone();
            x.extend((0..rows).map(|j| i128::from(i == j)));
            x
        })
        .collect();
    let (e, r) = echelon(aug, cols, true);
    let kernel: Vec<Vec<i128>> = e[r..].iter().map(|row| row[cols..].to_vec()).collect();
    let (kernel, _) = echelon(kernel, rows, true);
    let mut t: Vec<Vec<i128>> = Vec::with_capacity(rows);
    for row in &e[..r] {
        let mut x = row[cols..].to_vec();
        for k in &kernel {
            let Some(p) = k.iter().position(|&c| c != 0) else { continue };
            let q = x[p].div_euclid(k[p]);
            if q != 0 {
                for (xi, &ki) in x.iter_mut().zip(k) {
                    *xi -= q * ki;
                }
            }
        }
        t.push(x);
    }
    t.extend(kernel);
    let mut h: Vec<Vec<i128>> = e[..r].iter().map(|row| row[..cols].to_vec()).collect();
    h.extend((r..rows).map(|_| vec![0; cols]));
    (h, t)
}

fn is_diagonal(a: &[Vec<i128>]) -> bool {
    a.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| i == j || x == 0))
}

/// Inverse of a unimodular matrix.
fn unimodular_inverse(v: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = v.len();
    let (_, t) = hermite_transform(v, n);
    t
}

pub fn smith_normal_form(m: &[Vec<i64>]) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = widen(m);
    let mut u = widen(&identity(rows));
    let mut v = widen(&identity(cols));
    // alternate row and column Hermite forms until diagonal
    while !is_diagonal(&a) {
        let (h, t) = hermite_transform(&a, cols);
        a = h;
        u = mul128(&t, &u);
        if is_diagonal(&a) {
            break;
        }
        let (h, t) = hermite_transform(&transpose(&a, cols), rows);
        a = transpose(&h, rows);
        v = mul128(&v, &transpose(&t, cols));
    }
    let k = rows.min(cols);
    let mut d: Vec<i128> = (0..k).map(|i| a[i][i]).collect();
    // divisibility chain by 2x2 gcd/lcm steps
    for i in 0..k {
        for j in i + 1..k {
            let (p, q) = (d[i], d[j]);
            if q == 0 || (p != 0 && q % p == 0) {
                continue;
            }
            if p == 0 {
                d.swap(i, j);
                u.swap(i, j);
                for r in v.iter_mut() {
                    r.swap(i, j);
                }
                continue;
            }
            let (g, x, y) = ext_gcd(p, q);
            for c in 0..u[i].len() {
                let (ri, rj) = (u[i][c], u[j][c]);
                u[i][c] = x * ri + y * rj;
                u[j][c] = -q / g * ri + p / g * rj;
            }
            for r in v.iter_mut() {
                let (ci, cj) = (r[i], r[j]);
                r[i] = ci + cj;
                r[j] = -y * q / g * ci + x * p / g * cj;
            }
            d[i] = g;
            d[j] = p / g * q;
        }
    }
    for i in 0..k {
        if d[i] < 0 {
            d[i] = -d[i];
            for x in u[i].iter_mut() {
                *x = -*x;
            }
        }
    }
    let vi = unimodular_inverse(&v);
    let dm: Mat = (0..rows).map(|i| (0..cols).map(|j| if i == j { narrow(d[i]) } else { 0 }).collect()).collect();
    Snf { diag: d.into_iter().map(narrow).collect(), u: shrink(u), v: shrink(v), v_inv: shrink(vi), d: dm }
}

/// Echelonize `rows` on the first `width` columns with unimodular row
/// operations. Returns all rows, echelon rows first; rows whose first
/// `width` entries vanish come last.
fn echelon(mut rows: Vec<Vec<i128>>, width: usize, reduce_above: bool) -> (Vec<Vec<i128>>, usize) {
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        loop {
            let piv = (r..rows.len()).filter(|&i| rows[i][c] != 0).min_by_key(|&i| rows[i][c].abs());
            let Some(pi) = piv else { break };
            rows.swap(r, pi);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c] != 0 {
                    let q = rows[i][c].div_euclid(rows[r][c]);
                    let pr = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(pr) {
                        *x -= q * y;
                    }
                    if rows[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            for x in rows[r].iter_mut() {
                *x = -*x;
            }
        }
        if reduce_above {
            for i in 0..r {
                let q = rows[i][c].div_euclid(rows[r][c]);
                if q != 0 {
                    let pr = rows[r].clone();
                    for (x, y) in rows[i].iter_mut().zip(pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        r += 1;
    }
    (rows, r)
}

/// Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
/// Canonical: two generating sets of one lattice give the same output.
pub fn hermite(rows: &[Vec<i64>], width: usize) -> Mat {
    let w: Vec<Vec<i128>> = widen(rows);
    let (e, r) = echelon(w, width, true);
    shrink(e.into_iter().take(r).collect())
}

/// Basis of `{c : c * m = 0}` for an integer matrix `m` (rows of length `q`).
pub fn left_kernel(m: &[Vec<i64>], q: usize) -> Mat {
    let p = m.len();
    let aug: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<i128> = row.iter().map(|&x| x as i128).collect();
            v.extend((0..p).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    let (e, r) = echelon(aug, q, false);
    let ker: Vec<Vec<i64>> = e.into_iter().skip(r).map(|row| row[q..].iter().map(|&x| narrow(x)).collect()).collect();
    hermite(&ker, p)
}

/// Reduce `v` against a Hermite basis; the result is zero iff `v` lies in
/// the lattice.
pub fn reduce(v: &[i64], hnf: &[Vec<i64>]) -> Vec<i64> {
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in hnf {
        let Some(p) = row.iter().position(|&x| x != 0) else { continue };
        let q = w[p].div_euclid(row[p] as i128);
        if q != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x -= q * y as i128;
            }
        }
    }
    w.into_iter().map(narrow).collect()
}

pub fn contains(hnf: &[Vec<i64>], v: &[i64]) -> bool {
    reduce(v, hnf).iter().all(|&x| x == 0)
}

/// Coordinates of `v` in the independent rows `basis`, if `v` is in their span.
pub fn coordinates(v: &[i64], basis: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = v.len();
    let p = basis.len();
    let aug: Vec<Vec<i128>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut x: Vec<i128> = row.iter().map(|&y| y as i128).collect();
            x.extend((0..p).map(|j| i128::from(i == j)));
            x
        })
        .collect();
    let (e, r) = echelon(aug, n, false);
    let mut w: Vec<i128> = v.iter().map(|&x| x as i128).chain(std::iter::repeat_n(0, p)).collect();
    for row in e.iter().take(r) {
        let Some(c) = row[..n].iter().position(|&x| x != 0) else { continue };
        if w[c] % row[c] != 0 {
            return None;
        }
        let q = w[c] / row[c];
        for (x, &y) in w.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
    if w[..n].iter().any(|&x| x != 0) {
        return None;
    }
    Some(w[n..].iter().map(|&x| narrow(-x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Mat) {
        let s = smith_normal_form(m);
        assert_eq!(matmul(&matmul(&s.u, m), &s.v), s.d);
        let n = s.v.len();
        assert_eq!(matmul(&s.v, &s.v_inv), identity(n));
        for w in s.diag.windows(2) {
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn rho_relations() {
        assert_eq!(smith_normal_form(&[vec![8, -8]]).diag, vec![8]);
        assert_eq!(smith_normal_form(&[vec![8, -8], vec![3, 3]]).diag, vec![1, 48]);
        assert_eq!(smith_normal_form(&identity(2)).diag, vec![1, 1]);
        check(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    }

    #[test]
    fn kernels_and_membership() {
        let m = vec![vec![1, 2], vec![2, 4], vec![0, 1]];
        let k = left_kernel(&m, 2);
        assert_eq!(k, vec![vec![2, -1, 0]]);
        let h = hermite(&[vec![2, 0], vec![0, 4], vec![2, 4]], 2);
        assert!(contains(&h, &[4, 8]));
        assert!(!contains(&h, &[1, 0]));
        assert_eq!(coordinates(&[4, 4], &[vec![2, 0], vec![0, 4]]), Some(vec![2, 1]));
        assert_eq!(coordinates(&[1, 0], &[vec![2, 0]]), None);
    }
}
