use codebound::{compute_bound, max_code_exact, Choice, PseudoDistanceKind, SolverParams};

/// Exact maximum code sizes, `m = 1..=n`.
const EXACT: &[(usize, &str, &[usize])] = &[
    (1, "d", &[2]),
    (1, "r", &[2]),
    (1, "rbar", &[2]),
    (1, "d1", &[2]),
    (2, "d", &[4, 4]),
    (2, "r", &[4, 2]),
    (2, "rbar", &[2, 2]),
    (2, "d1", &[4, 2]),
    (3, "d", &[8, 8, 4]),
    (3, "r", &[8, 4, 2]),
    (3, "rbar", &[4, 2, 2]),
    (3, "d1", &[8, 4, 2]),
    (4, "d", &[16, 16, 8, 4]),
    (4, "r", &[16, 5, 2, 2]),
    (4, "rbar", &[8, 2, 2, 2]),
    (4, "d1", &[16, 8, 2, 2]),
    (5, "d", &[32, 32, 16, 8, 4]),
    (5, "r", &[32, 10, 4, 2, 2]),
    (5, "rbar", &[16, 2, 2, 2, 2]),
    (5, "d1", &[32, 16, 4, 2, 2]),
    (6, "d", &[64, 64, 32, 16, 8, 4]),
    (6, "r", &[64, 16, 4, 2, 2, 2]),
    (6, "rbar", &[32, 4, 2, 2, 2, 2]),
    (6, "d1", &[64, 32, 8, 4, 2, 2]),
    (7, "d", &[128, 128, 64, 24, 16, 8, 4]),
    (7, "r", &[128, 32, 5, 4, 2, 2, 2]),
    (7, "rbar", &[64, 8, 2, 2, 2, 2, 2]),
    (7, "d1", &[128, 64, 16, 8, 2, 2, 2]),
];

fn exact(n: usize, kind: PseudoDistanceKind, m: usize) -> usize {
    EXACT.iter().find(|(len, k, _)| *len == n && *k == kind.tag()).unwrap().2[m - 1]
}

#[test]
fn search_reproduces_frozen_values() {
    for &(n, kind, row) in EXACT {
        let kind: PseudoDistanceKind = kind.parse().unwrap();
        for (i, &want) in row.iter().enumerate() {
            assert_eq!(max_code_exact(n, kind, i + 1, false).unwrap(), want, "n={n} {kind} m={}", i + 1);
        }
    }
}

#[test]
fn values_are_monotone_in_m() {
    for &(_, _, row) in EXACT {
        assert!(row.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn closed_forms_in_d() {
    for n in 3..=7 {
        assert_eq!(exact(n, PseudoDistanceKind::GeneralizedD, 3), 1 << (n - 1));
        assert_eq!(exact(n, PseudoDistanceKind::GeneralizedD, n), 4);
        assert_eq!(exact(n, PseudoDistanceKind::Radius, 1), 1 << n);
    }
}

#[test]
fn radius_at_half_length() {
    use PseudoDistanceKind::Radius;
    assert_eq!(exact(2, Radius, 1), 4);
    assert_eq!(exact(6, Radius, 3), 4);
    // odd and short lengths exceed 4
    assert_eq!([3, 4, 5, 7].map(|n| exact(n, Radius, n / 2)), [8, 5, 10, 5]);
}

#[test]
fn even_codes_are_one_longer() {
    for n in 1..=6 {
        for m in 1..=n {
            assert_eq!(
                max_code_exact(n + 1, PseudoDistanceKind::Radius, m, true).unwrap(),
                exact(n, PseudoDistanceKind::Radius, m),
                "n={n} m={m}"
            );
        }
    }
}

#[test]
fn every_bound_dominates_the_exact_value() {
    let params = SolverParams::default();
    for &(n, kind, row) in EXACT {
        let kind: PseudoDistanceKind = kind.parse().unwrap();
        for (i, &truth) in row.iter().enumerate() {
            let m = i + 1;
            for choice in Choice::ALL {
                if choice == Choice::Oracle {
                    continue;
                }
                if let Ok(b) = compute_bound(n, kind, m, choice, false, &params) {
                    assert!(b.value >= truth as u128, "n={n} {kind} m={m} {choice}: {} < {truth}", b.value);
                }
            }
        }
    }
}

#[test]
fn sdp_solves_every_small_cell() {
    let params = SolverParams::default();
    for n in 1..=7 {
        for kind in ["d", "r", "rbar"] {
            let kind: PseudoDistanceKind = kind.parse().unwrap();
            for m in 1..=n {
                let b = compute_bound(n, kind, m, Choice::Sdp, false, &params);
                assert!(b.is_ok(), "n={n} {kind} m={m}: {b:?}");
            }
        }
    }
}
