mod common;

use common::{all_sequences, min_history};
use permplane::measures::{lz_complexity, lz_history};
use permplane::ordinal::{symbolize, EmbeddingConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn oracle_known_values() {
    let s: Vec<u64> = "0001101001000101"
        .bytes()
        .map(|b| u64::from(b - b'0'))
        .collect();
    assert_eq!(min_history(&s), 6);
    assert_eq!(min_history(&[0; 5]), 2);
    assert_eq!(min_history(&[0, 1, 2, 3]), 4);
}

#[test]
fn greedy_matches_oracle_ternary_up_to_9() {
    for n in 1..=9 {
        for s in all_sequences(n, 3) {
            assert_eq!(
                lz_complexity(&s, 3).unwrap().productions,
                min_history(&s),
                "{s:?}"
            );
        }
    }
}

#[test]
fn greedy_matches_oracle_on_random_longer_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let n = rng.gen_range(20..120);
        let a = rng.gen_range(2..6u64);
        let s: Vec<u64> = (0..n).map(|_| rng.gen_range(0..a)).collect();
        assert_eq!(
            lz_complexity(&s, a).unwrap().productions,
            min_history(&s),
            "{s:?}"
        );
    }
}

#[test]
fn history_components_tile_the_sequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s: Vec<u64> = (0..5_000).map(|_| rng.gen_range(0..4)).collect();
    let h = lz_history(&s);
    assert_eq!(h.first().unwrap().0, 0);
    assert_eq!(h.last().unwrap().1, s.len());
    assert!(h.windows(2).all(|w| w[0].1 == w[1].0));
    assert_eq!(h.len(), lz_complexity(&s, 4).unwrap().productions);
}

#[test]
fn periodic_ordinal_sequence_has_constant_complexity() {
    // a sawtooth repeats one pattern cycle, so C stops growing
    let x: Vec<f64> = (0..10_000).map(|i| f64::from(i % 7)).collect();
    let cfg = EmbeddingConfig::new(4, 1).unwrap();
    let seq = symbolize(&x, cfg).unwrap();
    let short = lz_complexity(&seq.symbols()[..500], 24)
        .unwrap()
        .productions;
    let long = lz_complexity(seq.symbols(), 24).unwrap().productions;
    assert_eq!(short, long);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn greedy_matches_oracle(s in prop::collection::vec(0u64..4, 1..60)) {
        prop_assert_eq!(lz_complexity(&s, 4).unwrap().productions, min_history(&s));
    }
}
