//! Exact finite-horizon sums against brute-force tuple enumeration.

mod common;

use common::{brute_forest_sum, brute_word_sum, forest, q, recip};
use num_traits::Zero;
use proptest::prelude::*;
use zeta_forest::enumerate::{forests_up_to_size, nat_words_up_to_length};
use zeta_forest::{
    forest_sum, ladder_of_word, lambda_shuffle, tzv_sum, word_sum, Forest, Q, Word,
};

#[test]
fn word_sums_match_the_tuple_oracle() {
    for w in nat_words_up_to_length(3, 3) {
        for n in [0u64, 1, 2, 5, 9] {
            for strict in [true, false] {
                assert_eq!(
                    word_sum::<Q>(&w, n, strict).unwrap(),
                    brute_word_sum(&w, n, strict),
                    "word {w}, N = {n}, strict = {strict}"
                );
            }
        }
    }
}

#[test]
fn forest_sums_match_the_odometer_oracle() {
    for f in forests_up_to_size(4, 3) {
        for n in [0u64, 1, 4, 6] {
            for strict in [true, false] {
                assert_eq!(
                    forest_sum::<Q>(&f, n, strict).unwrap(),
                    brute_forest_sum(&f, n, strict),
                    "forest {f}, N = {n}, strict = {strict}"
                );
            }
        }
    }
}

#[test]
fn forest_sum_restricts_to_word_sum_on_ladders() {
    for w in nat_words_up_to_length(3, 3) {
        let ladder = ladder_of_word(&w);
        for n in [0u64, 3, 7] {
            for strict in [true, false] {
                assert_eq!(
                    forest_sum::<Q>(&ladder, n, strict).unwrap(),
                    word_sum::<Q>(&w, n, strict).unwrap(),
                );
            }
        }
    }
}

/// Two independent routes to the truncated tree sum for depth-two ladders:
/// the subtree-total odometer inside `tzv_sum`, and a direct double loop over
/// the increments.
#[test]
fn tzv_on_depth_two_ladders_matches_a_direct_double_loop() {
    for (s1, s2) in [(2u64, 1u64), (1, 2), (3, 1), (2, 2)] {
        let ladder = ladder_of_word(&Word::nat(&[s1, s2]).unwrap());
        for n in [1u64, 3, 6, 10] {
            let mut direct = Q::zero();
            for a in 1..=n {
                for b in 1..=n {
                    direct += recip(a + b, s1) * recip(b, s2);
                }
            }
            assert_eq!(
                tzv_sum::<Q>(&ladder, n).unwrap(),
                direct,
                "ladder({s1},{s2}), N = {n}"
            );
        }
    }
}

#[test]
fn tzv_on_the_corolla_matches_a_direct_triple_loop() {
    let corolla = forest("2(1,1)");
    for n in [1u64, 2, 4] {
        let mut direct = Q::zero();
        for a in 1..=n {
            for b in 1..=n {
                for c in 1..=n {
                    direct += recip(a + b + c, 2) * recip(b, 1) * recip(c, 1);
                }
            }
        }
        assert_eq!(tzv_sum::<Q>(&corolla, n).unwrap(), direct, "N = {n}");
    }
}

#[test]
fn sums_are_monotone_and_ordered() {
    for f in forests_up_to_size(3, 3) {
        let mut previous_strict = Q::zero();
        let mut previous_tzv = Q::zero();
        for n in 1..=6 {
            let strict = forest_sum::<Q>(&f, n, true).unwrap();
            let weak = forest_sum::<Q>(&f, n, false).unwrap();
            let tzv = tzv_sum::<Q>(&f, n).unwrap();
            assert!(strict <= weak, "strict sums are dominated, {f} at {n}");
            assert!(strict >= previous_strict, "monotone in N, {f} at {n}");
            assert!(tzv >= previous_tzv, "tzv monotone in N, {f} at {n}");
            previous_strict = strict;
            previous_tzv = tzv;
        }
    }
}

fn word_strategy() -> impl Strategy<Value = Word> {
    prop::collection::vec(1u64..=3, 0..=3).prop_map(|ls| Word::nat(&ls).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Strict truncated sums turn the stuffle into an honest product, and
    /// weak truncated sums do the same for the minus-one shuffle, at every
    /// finite horizon -- not just in the limit.
    #[test]
    fn truncated_sums_factor_products(
        u in word_strategy(),
        v in word_strategy(),
        n in 0u64..=10,
    ) {
        for (lambda, strict) in [(q(1), true), (q(-1), false)] {
            let product = word_sum::<Q>(&u, n, strict).unwrap()
                * word_sum::<Q>(&v, n, strict).unwrap();
            let mut through = Q::zero();
            for (w, c) in lambda_shuffle(&u, &v, &lambda).unwrap().iter() {
                through += c.clone() * word_sum::<Q>(w, n, strict).unwrap();
            }
            prop_assert_eq!(&product, &through,
                "u = {}, v = {}, N = {}, lambda = {}", u, v, n, lambda);
        }
    }

    #[test]
    fn empty_structures_sum_to_one(n in 0u64..=8) {
        prop_assert_eq!(word_sum::<Q>(&Word::empty(), n, true).unwrap(), q(1));
        prop_assert_eq!(forest_sum::<Q>(&Forest::empty(), n, false).unwrap(), q(1));
        prop_assert_eq!(tzv_sum::<Q>(&Forest::empty(), n).unwrap(), q(1));
    }
}
