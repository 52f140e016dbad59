use codebound::classical::{best_classical, best_classical_even};
use codebound::reference::{table1, table2};
use codebound::{sdp_bound, PseudoDistanceKind, SolverParams};

#[test]
fn classical_generalized_distance_table() {
    for c in table1() {
        let b = best_classical(c.n, 3, c.m, PseudoDistanceKind::GeneralizedD).unwrap();
        assert_eq!((b.value, Some(b.method)), (c.classical, c.method), "n={} m={}", c.n, c.m);
    }
}

#[test]
fn classical_even_radius_table() {
    for c in table2() {
        let b = best_classical_even(c.n, 3, c.m, PseudoDistanceKind::Radius).unwrap();
        assert_eq!(b.value, c.classical, "n={} m={}", c.n, c.m);
    }
}

#[test]
fn sdp_generalized_distance_core_rows() {
    let params = SolverParams::default();
    for c in table1().into_iter().filter(|c| c.n <= 13) {
        let b = sdp_bound(c.n, PseudoDistanceKind::GeneralizedD, c.m, false, &params).unwrap();
        assert_eq!(b.value, c.sdp, "n={} m={}", c.n, c.m);
    }
}

#[test]
fn sdp_even_radius_core_rows() {
    let params = SolverParams::default();
    for c in table2().into_iter().filter(|c| c.n <= 13) {
        let b = sdp_bound(c.n, PseudoDistanceKind::Radius, c.m, true, &params).unwrap();
        assert_eq!(b.value, c.sdp, "n={} m={}", c.n, c.m);
    }
}

#[test]
fn sdp_never_beats_classical_in_core_rows() {
    for c in table1().into_iter().filter(|c| c.n <= 13) {
        assert!(c.sdp <= c.classical);
    }
}
