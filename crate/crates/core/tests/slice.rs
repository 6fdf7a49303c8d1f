use c2ss::anderson::{dual_cell_check, pairing_rows, uct_shadow};
use c2ss::group::FGAbelianGroup;
use c2ss::slice::*;

const SCENARIOS: [&str; 4] = ["tmf13", "tmf13_a1inv", "tmf13_a3inv", "tmf13_a1a3inv"];

#[test]
fn near_rho_table_matches_slices() {
    for scn in SCENARIOS {
        let rows = near_rho_rows(scn, [-10, 10], 40).unwrap();
        assert_eq!(rows.len(), 21 * 4);
        let bad: Vec<_> = rows.iter().filter(|r| !r.agree).map(|r| (r.k, r.j)).collect();
        assert!(bad.is_empty(), "{scn}: {bad:?}");
    }
    // connective: nothing below zero
    let rows = near_rho_rows("tmf13", [-3, -2], 40).unwrap();
    assert!(rows.iter().all(|r| r.table["fixed"] == r.slices["fixed"]));
}

#[test]
fn compactified_ranks_and_euler() {
    for n in -40..=40 {
        let g = pi_compactified(n);
        assert!(g.invariant_factors.is_empty());
    }
    assert_eq!(pi_compactified(-9), FGAbelianGroup::z3(1));
    assert!((-8..=-1).all(|n| pi_compactified(n).is_zero()));
    let cells = cells_for_stems(-40, 40);
    let under = underlying_ranks(&cells, [-40, 40]);
    for n in -40..=40 {
        assert_eq!(under[&n], pi_compactified(n).free_rank, "stem {n}");
    }
}

#[test]
fn anderson_windows() {
    for t in [0, 7, 20, 60] {
        let r = dual_cell_check(&slice_cells(-9 - t, t));
        assert!(r.passed(), "window {t}: {:?}", r.unmatched);
        assert_eq!(r.matched, r.cells);
    }
    assert!(pairing_rows(30).iter().all(|r| r.perfect && r.ranks_agree));
    let uct = uct_shadow(-40, 40);
    assert!(uct.iter().all(|r| r.holds));
    assert_eq!(uct.len(), 81);
}
