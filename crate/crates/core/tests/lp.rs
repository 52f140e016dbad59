use codebound::lp::{solve_lp, LpProblem};
use codebound::{delsarte_bound, max_code_exact, sdp_bound, PseudoDistanceKind, SolverParams};

#[test]
fn lp_dominates_exact_values() {
    for n in 1..=7 {
        for d in 1..=n {
            let exact = max_code_exact(n, PseudoDistanceKind::ClassicalD1, d, false).unwrap();
            assert!(delsarte_bound(n, d).unwrap().value >= exact as u128, "n={n} d={d}");
        }
    }
}

#[test]
fn triple_sdp_is_at_least_as_strong() {
    let params = SolverParams::default();
    for n in 4..=12 {
        for d in 3..=n {
            let lp = delsarte_bound(n, d).unwrap().value;
            let sdp = sdp_bound(n, PseudoDistanceKind::ClassicalD1, d, false, &params).unwrap().value;
            assert!(sdp <= lp, "n={n} d={d}: sdp {sdp} > lp {lp}");
        }
    }
}

#[test]
fn known_values() {
    // the LP allows 128/5 although A(8, 3) = 20
    let s = solve_lp(&LpProblem::delsarte(8, 3).unwrap()).unwrap();
    assert_eq!(s.optimum, codebound::poly::rat(128, 5));
    assert_eq!(delsarte_bound(8, 3).unwrap().value, 25);
    assert_eq!(delsarte_bound(11, 4).unwrap().value, 85);
    let s = solve_lp(&LpProblem::delsarte(8, 4).unwrap()).unwrap();
    assert_eq!(s.optimum, codebound::poly::int(16));
}
