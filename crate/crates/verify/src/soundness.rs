//! Randomised and brute-force checks of the engine.

use c2ss::grading::{BiDegree, Degree};
use c2ss::snf::{identity, matmul, smith_normal_form};
use c2ss::sseq::{apply, leibniz_extend, Page, Window};
use c2ss::tmf13::build_scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{OraclePage, Shape};

/// Sample `samples` monomials of `scenario` and apply each differential
/// twice. Returns the failures.
pub fn d_squared_failures(scenario: &str, samples: usize, seed: u64) -> Vec<String> {
    let scn = build_scenario(scenario).expect("known scenario");
    let alg = &scn.algebra;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for _ in 0..samples {
        let mut m = alg.one();
        for (i, g) in alg.generators.iter().enumerate() {
            let lo = if g.invertible { -30 } else { 0 };
            m.0[i] = rng.gen_range(lo..=30);
        }
        if let Some(rw) = &alg.rewrite {
            m.0[rw.generator] = -rw.floor;
        }
        for d in &scn.differentials {
            let ddm = leibniz_extend(alg, d, &m).and_then(|dm| apply(alg, d, &dm));
            match ddm {
                Ok(x) if x.is_zero() => {}
                Ok(x) => bad.push(format!("d{}^2({}) = {}", d.r, alg.monomial_string(&m), alg.element_string(&x))),
                Err(e) => bad.push(format!("d{} on {}: {e}", d.r, alg.monomial_string(&m))),
            }
        }
    }
    bad
}

pub fn shape_of(scenario: &str) -> Option<Shape> {
    Some(match scenario {
        "tmf13" => Shape { a1_inv: false, a3_inv: false, bound: 64 },
        "tmf13_a1inv" => Shape { a1_inv: true, a3_inv: false, bound: 12 },
        "tmf13_a3inv" => Shape { a1_inv: false, a3_inv: true, bound: 12 },
        "tmf13_a1a3inv" => Shape { a1_inv: true, a3_inv: true, bound: 8 },
        _ => return None,
    })
}

#[derive(Clone, Debug, Default)]
pub struct OracleComparison {
    pub compared: usize,
    pub mismatches: Vec<String>,
}

/// E4 and E8 of the engine against the oracle on `|a|, |b| <= half`.
pub fn compare_with_oracle(scenario: &str, half: i64) -> OracleComparison {
    let shape = shape_of(scenario).expect("scenario with an oracle");
    let scn = build_scenario(scenario).expect("known scenario");
    let alg = &scn.algebra;
    let (a, b, s_max) = ([-half - 2, half + 2], [-half, half], 3 * half - 2);
    let w = Window { a, b, s_max, exponent_bound: shape.bound };
    let mut e3 = Page::e2(alg, w).expect("window");
    e3.r = 3;
    let e4 = e3.turn(alg, &scn.differentials[0], true).expect("d3");
    let mut e7 = e4.clone();
    e7.r = 7;
    let e8 = e7.turn(alg, &scn.differentials[1], true).expect("d7");

    let o4 = OraclePage::e2(shape, a, b, s_max).turn(3);
    let o8 = o4.turn(7);
    let mut out = OracleComparison::default();
    for x in -half..=half {
        for y in -half..=half {
            for s in 0..=2 * half {
                let k = BiDegree::new(Degree::new(x, y), s);
                for (page, oracle) in [(&e4, &o4), (&e8, &o8)] {
                    if !page.reliable(k) {
                        continue;
                    }
                    let (got, want) = (page.group(k), oracle.group(k));
                    if !got.same_group(&want) {
                        out.mismatches.push(format!("{scenario} E{} at {k}: engine {got}, oracle {want}", page.r));
                    }
                    out.compared += 1;
                }
            }
        }
    }
    out
}

/// |det| by fraction-free elimination.
pub fn abs_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].abs()
}

/// Rank over Q by floating elimination; entries here are small.
pub fn rank_q(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())) else { break };
        if a[p][c].abs() < 1e-9 {
            continue;
        }
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank {
                let f = a[i][c] / a[rank][c];
                let pr = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pr) {
                    *x -= f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `U M V = D`, unimodular transforms, rank and determinant on random
/// matrices up to 8x8.
pub fn snf_failures(count: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for n in 0..count {
        let rows = rng.gen_range(1..=8);
        let cols = rng.gen_range(1..=8);
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let s = smith_normal_form(&m);
        let mut ok = matmul(&matmul(&s.u, &m), &s.v) == s.d
            && matmul(&s.v, &s.v_inv) == identity(cols)
            && abs_det(&s.u) == 1
            && abs_det(&s.v) == 1
            && s.rank() == rank_q(&m);
        if rows == cols {
            ok &= s.diag.iter().map(|&x| x as i128).product::<i128>() == abs_det(&m);
        }
        if !ok {
            bad.push(format!("matrix {n}: {m:?}"));
        }
    }
    bad
}
