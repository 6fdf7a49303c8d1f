use c2ss::grading::Degree;
use c2ss::group::{FGAbelianGroup, Ground};
use c2ss::mackey::{
    bredon_cohomology_sigma_sphere, bredon_homology_sigma_sphere, cellular_cohomology_sigma_sphere,
    cellular_homology_sigma_sphere, named_mackey, pi_hz, sigma_sphere_mackey,
};

fn z() -> FGAbelianGroup {
    FGAbelianGroup::z3(1)
}

#[test]
fn homology_formula_matches_cells() {
    let zm = named_mackey("Z", &z()).unwrap();
    for k in 0..=32i64 {
        for s in -2..=2 * k + 2 {
            let want = bredon_homology_sigma_sphere(k, s);
            let m = sigma_sphere_mackey(k, k - s, false);
            assert!(m.satisfies_axioms(), "H_(S^{k}σ) at s={s}: {m:?}");
            assert_eq!(m.fixed(), want, "k={k} s={s}");
            let under = if s == 0 { z() } else { FGAbelianGroup::zero(Ground::ZThird) };
            assert_eq!(m.underlying(), under, "k={k} s={s}");
            if (0..=k).contains(&(k - s)) {
                let old = cellular_homology_sigma_sphere(&zm, k as usize, (k - s) as usize);
                assert_eq!(old, want, "k={k} s={s}");
            }
        }
    }
}

#[test]
fn cohomology_formula_matches_cells() {
    let zm = named_mackey("Z", &z()).unwrap();
    for d in 0..=32i64 {
        for k in -2..=d + 2 {
            let want = bredon_cohomology_sigma_sphere(d, k);
            let m = sigma_sphere_mackey(d, k, true);
            assert!(m.satisfies_axioms(), "H^{k}(S^{d}σ): {m:?}");
            assert_eq!(m.fixed(), want, "d={d} k={k}");
            if (0..=d).contains(&k) {
                assert_eq!(cellular_cohomology_sigma_sphere(&zm, d as usize, k as usize), want, "d={d} k={k}");
            }
        }
    }
}

#[test]
fn named_values() {
    assert_eq!(sigma_sphere_mackey(0, 0, false), named_mackey("Z", &z()).unwrap());
    assert_eq!(sigma_sphere_mackey(2, 2, true), named_mackey("Zstar", &z()).unwrap());
    assert_eq!(sigma_sphere_mackey(2, 2, false), named_mackey("Z", &z()).unwrap());
    assert_eq!(sigma_sphere_mackey(1, 1, false), named_mackey("Zminus", &z()).unwrap());
    assert_eq!(sigma_sphere_mackey(1, 0, false), named_mackey("G", &z()).unwrap());
    // u_2sigma and its inverse classes
    assert_eq!(pi_hz(Degree::new(2, -2)), named_mackey("Z", &z()).unwrap());
    assert_eq!(pi_hz(Degree::new(-2, 2)), named_mackey("Zstar", &z()).unwrap());
    assert_eq!(pi_hz(Degree::new(-1, 1)), named_mackey("Zminus", &z()).unwrap());
    assert_eq!(pi_hz(Degree::new(0, -1)).fixed().to_string(), "Z/2");
}
