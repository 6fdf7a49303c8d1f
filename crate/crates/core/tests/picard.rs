use c2ss::grading::Degree;
use c2ss::group::{FGAbelianGroup, Ground};
use c2ss::picard::*;
use proptest::prelude::*;

fn unit(d: i64) -> UnitDegree {
    UnitDegree { label: format!("u{d}"), degree: Degree::new(d, 0), irreducible: true }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn suspension_pic_depends_on_gcd(ds in prop::collection::vec(1i64..40, 1..5)) {
        let units: Vec<UnitDegree> = ds.iter().map(|&d| unit(2 * d)).collect();
        let g = ds.iter().fold(0, |a, &b| gcd(a, 2 * b));
        let got = algebraic_pic_suspensions(&units, true);
        prop_assert!(got.same_group(&FGAbelianGroup::cyclic(Ground::Z, g)));
        prop_assert!(got.same_group(&algebraic_pic_suspensions(&[unit(g)], true)));
    }

    #[test]
    fn survivors_are_k_zero(hf in 0i64..1, ks in prop::collection::btree_set(-6i64..12, 1..8)) {
        let b = TailGenerator { name: "b".into(), s: 3, hf_shift: hf, square_shift: Some(0), ks: ks.iter().copied().collect() };
        let z = FGAbelianGroup::zero(Ground::Z);
        let col = picard_ss_zero_column(&z, &z, &[b]).unwrap();
        let surv: Vec<&str> = col.rows.iter().filter(|r| r.s == 3 && r.survives()).map(|r| r.label.as_str()).collect();
        prop_assert_eq!(surv, if ks.contains(&0) { vec!["b"] } else { vec![] });
    }
}

#[test]
fn algebraic_values() {
    let orders: Vec<Option<i64>> = [Target::Periodic, Target::A1Inv, Target::A3Inv, Target::A1A3Inv]
        .iter()
        .map(|&t| algebraic_pic_suspensions(&unit_degrees(t).unwrap(), true).order())
        .collect();
    assert_eq!(orders, vec![Some(6), Some(2), Some(6), Some(2)]);
    let tmf = unit_degrees(Target::Periodic).unwrap();
    let degs: Vec<i64> = tmf.iter().map(|u| u.degree.underlying_dimension()).collect();
    assert_eq!(degs, vec![6, 6, 24]);
    assert!(tmf[..2].iter().all(|u| u.irreducible));
}

#[test]
fn equivariant_values() {
    let want = [(Target::Periodic, 48), (Target::A1Inv, 8), (Target::A3Inv, 48), (Target::A1A3Inv, 8)];
    for (t, n) in want {
        let e = equivariant_pic(t).unwrap();
        assert!(e.consistent, "{t}: {e:?}");
        assert_eq!(e.bound, n, "{t}");
        assert_eq!(e.group.order(), Some(n));
    }
}

#[test]
fn periodic_zero_column() {
    let e = equivariant_pic(Target::Periodic).unwrap();
    let surv: Vec<(i64, String, Option<i64>)> =
        e.column.survivors().iter().map(|r| (r.s, r.label.clone(), r.group.order())).collect();
    assert_eq!(
        surv,
        vec![(0, "H^0".into(), Some(6)), (1, "H^1".into(), Some(2)), (3, "b3".into(), Some(2)), (7, "b7".into(), Some(2))]
    );
    assert!(e.column.rows.iter().any(|r| r.label == "γ·b3" && r.fate == Fate::Dies { r: 3 }));
    assert!(e.column.rows.iter().any(|r| r.label == "γ^2·b7" && r.fate == Fate::Dies { r: 7 }));
    assert!(e.high_rows_vanish);
}

#[test]
fn compactified() {
    let inp = mv_inputs().unwrap();
    assert_eq!(inp.coker.group.free_rank, 1);
    assert_eq!(inp.coker.group.generator_labels, vec!["a1bar^3*a3bar^-1"]);
    assert_eq!(inp.boundary["a1bar^3*a3bar^-1"], Degree::new(3, 3));
    assert_eq!(inp.ker_g.group.invariant_factors, vec![48]);
    assert_eq!(inp.kernel_relation, Degree::new(8, -8));
    let r = mv_assemble(&inp).unwrap();
    assert_eq!((r.group.free_rank, r.group.invariant_factors.clone()), (1, vec![8]));
    let rep = compute(Target::Compactified).unwrap();
    assert_eq!(serde_json::to_string(&rep.group).unwrap(), r#"{"rank":1,"factors":[8]}"#);
}

#[test]
fn degenerate_mv() {
    let zero = quotient(&[vec![1]], 1, |_| String::new());
    let inp = MvInputs {
        coker: zero.clone(),
        boundary: Default::default(),
        ker_g: zero,
        r1: vec![],
        r3: vec![],
        kernel_relation: Degree::new(8, -8),
    };
    assert!(mv_assemble(&inp).unwrap().group.is_zero());
}

#[test]
fn ladder_rejects_wrong_kernel() {
    let mut inp = mv_inputs().unwrap();
    inp.kernel_relation = Degree::new(4, -4);
    assert!(matches!(mv_assemble(&inp), Err(PicardError::Exactness(_))));
}
