use c2ss::snf::{matmul, smith_normal_form};
use c2ss::tmf13::SCENARIOS;
use c2ss_verify::soundness::*;
use proptest::prelude::*;

#[test]
fn oracle_tmf13() {
    let c = compare_with_oracle("tmf13", 12);
    assert!(c.mismatches.is_empty(), "{:?}", c.mismatches);
    assert!(c.compared > 20_000, "only {} comparisons", c.compared);
}

#[test]
fn oracle_localized() {
    for name in ["tmf13_a1inv", "tmf13_a3inv", "tmf13_a1a3inv"] {
        let c = compare_with_oracle(name, 12);
        assert!(c.mismatches.is_empty(), "{:?}", c.mismatches);
        assert!(c.compared > 20_000, "{name}: only {} comparisons", c.compared);
    }
}

#[test]
fn d_squared_vanishes() {
    for name in SCENARIOS {
        let bad = d_squared_failures(name, 10_000, 13);
        assert!(bad.is_empty(), "{name}: {:?}", &bad[..bad.len().min(5)]);
    }
}

#[test]
fn snf_random_matrices() {
    assert_eq!(snf_failures(1000, 2024), Vec::<String>::new());
}

#[test]
fn helpers() {
    assert_eq!(abs_det(&[vec![2, 1], vec![1, 3]]), 5);
    assert_eq!(abs_det(&[vec![1, 2], vec![2, 4]]), 0);
    assert_eq!(rank_q(&[vec![1, 2], vec![2, 4]]), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn snf_chain_and_transforms(m in proptest::collection::vec(proptest::collection::vec(-20i64..=20, 4), 1..6)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(matmul(&matmul(&s.u, &m), &s.v), s.d.clone());
        for w in s.diag.windows(2) {
            if w[0] == 0 { prop_assert_eq!(w[1], 0); } else { prop_assert_eq!(w[1] % w[0], 0); }
        }
    }
}
