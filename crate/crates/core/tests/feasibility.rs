use codebound::checks::{code_violations, random_code, sdpa_round_trip, ROUND_TRIP_SET};
use codebound::sdp::{build_sdp, code_distribution, export_sdpa, import_sdpa, SolverParams};
use codebound::{PseudoDistanceKind, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_codes_are_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let code = random_code(&mut rng, n, 12).unwrap();
        let (bad, min_eig) = code_violations(&code).unwrap();
        assert!(bad.is_empty(), "{code:?}: {bad:?}");
        worst = worst.min(min_eig);
    }
    assert!(worst >= -1e-9, "smallest eigenvalue {worst}");
}

#[test]
fn hamming_code_is_feasible() {
    // the [7,4] Hamming code, minimum distance 3
    let gens = [0b1000110u64, 0b0100101, 0b0010011, 0b0001111];
    let code: Vec<Word> = (0..16u64)
        .map(|s| {
            let bits = (0..4).filter(|i| s >> i & 1 == 1).fold(0, |acc, i| acc ^ gens[i]);
            Word::new(7, bits).unwrap()
        })
        .collect();
    let (bad, min_eig) = code_violations(&code).unwrap();
    assert!(bad.is_empty(), "{bad:?}");
    assert!(min_eig >= -1e-9);
    // and it respects the distance-3 forbidden set
    let p = build_sdp(7, PseudoDistanceKind::ClassicalD1, 3, false).unwrap();
    let dist = code_distribution(&code).unwrap();
    assert!(codebound::sdp::model::check_distribution(&p, &dist).feasible());
}

#[test]
fn sdpa_round_trip_keeps_the_optimum() {
    let params = SolverParams::default();
    for (n, kind, m, even) in ROUND_TRIP_SET {
        let (a, b, rel) = sdpa_round_trip(n, kind, m, even, &params).unwrap();
        assert!(rel <= 1e-8, "n={n} {kind} m={m}: {a} vs {b}");
    }
}

#[test]
fn export_is_deterministic() {
    let p = build_sdp(8, PseudoDistanceKind::GeneralizedD, 4, false).unwrap();
    let a = export_sdpa(&p);
    assert_eq!(a, export_sdpa(&build_sdp(8, PseudoDistanceKind::GeneralizedD, 4, false).unwrap()));
    let back = import_sdpa(&a).unwrap();
    assert_eq!(export_sdpa(&p), codebound::sdp::sdpa::write_sdpa(&back, a.lines().next().unwrap()[1..].trim()));
}
