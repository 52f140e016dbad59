use codebound::checks::{hahn_violations, krawtchouk_violations, tuple_violations};
use codebound::hamming::Automorphism;
use codebound::{KTuple, Word};
use proptest::prelude::*;

fn tuple_strategy() -> impl Strategy<Value = (KTuple, Word, u64)> {
    (1usize..=16, 2usize..=5).prop_flat_map(|(n, k)| {
        let mask = (1u64 << n) - 1;
        (proptest::collection::vec(any::<u64>(), k), any::<u64>(), any::<u64>()).prop_map(move |(bits, y, seed)| {
            let words = bits.into_iter().map(|b| Word::new(n, b & mask).unwrap()).collect();
            (KTuple::new(words).unwrap(), Word::new(n, y & mask).unwrap(), seed)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn tuple_inequalities_hold((t, y, seed) in tuple_strategy()) {
        let g = Automorphism::random(t.n(), seed).unwrap();
        let bad = tuple_violations(&t, y, &g).unwrap();
        prop_assert!(bad.is_empty(), "{bad:?}");
    }
}

#[test]
fn repeated_words_are_allowed() {
    let t = KTuple::parse(&["0110", "0110", "1010"]).unwrap();
    let g = Automorphism::random(4, 7).unwrap();
    let bad = tuple_violations(&t, Word::parse("1111").unwrap(), &g).unwrap();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn hahn_families_are_exact() {
    for n in 0..=16 {
        for t in 0..=n {
            for s in 0..=t {
                let bad = hahn_violations(n, s, t).unwrap();
                assert!(bad.is_empty(), "{bad:?}");
            }
        }
    }
}

#[test]
fn krawtchouk_is_orthogonal() {
    for n in 0..=12 {
        let bad = krawtchouk_violations(n).unwrap();
        assert!(bad.is_empty(), "{bad:?}");
    }
}
