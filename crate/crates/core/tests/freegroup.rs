use egb_core::freegroup::{
    alpha_tilde, alpha_tilde_rotation, conjugate_eq, eggbeater_itinerary, itinerary_to_word, Flow,
    Letter, Segment, Signed, Square, Word,
};
use proptest::prelude::*;

fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..3, any::<bool>()), 0..max).prop_map(|v| {
        Word(
            v.into_iter()
                .map(|(l, inverse)| Signed {
                    letter: [Letter::A, Letter::B, Letter::C][l],
                    inverse,
                })
                .collect(),
        )
    })
}

/// Conjugacy by brute force: some rotation of the cyclic reduction matches.
fn conjugate_brute(x: &Word, y: &Word) -> bool {
    let (a, b) = (x.cyclic_reduce(), y.cyclic_reduce());
    a.len() == b.len() && (0..a.len().max(1)).any(|k| a.rotate_right(k) == b)
}

proptest! {
    #[test]
    fn conjugacy_is_an_equivalence(x in word_strategy(8), y in word_strategy(8), g in word_strategy(4)) {
        prop_assert!(conjugate_eq(&x, &x));
        prop_assert_eq!(conjugate_eq(&x, &y), conjugate_eq(&y, &x));
        let z = g.concat(&x).concat(&g.inverse());
        prop_assert!(conjugate_eq(&x, &z));
        prop_assert_eq!(conjugate_eq(&z, &y), conjugate_eq(&x, &y));
        prop_assert_eq!(conjugate_eq(&x, &y), conjugate_brute(&x, &y));
    }

    #[test]
    fn reduction_is_idempotent(x in word_strategy(12)) {
        let r = x.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        let c = x.cyclic_reduce();
        prop_assert!(c.is_cyclically_reduced());
        prop_assert_eq!(c.cyclic_reduce(), c);
    }

    #[test]
    fn parse_round_trip(x in word_strategy(10)) {
        let r = x.reduce();
        let back: Word = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn eggbeater_loops_give_alpha(
        pairs in prop::collection::vec((1u64..6, 1u64..6), 1..5),
        j in 0usize..5,
    ) {
        let (m, n): (Vec<u64>, Vec<u64>) = pairs.into_iter().unzip();
        let alpha = alpha_tilde(&m, &n);
        prop_assert_eq!(itinerary_to_word(&eggbeater_itinerary(&m, &n)).unwrap(), alpha.clone());
        prop_assert!(conjugate_eq(&alpha, &alpha_tilde_rotation(&m, &n, j)));
    }

    #[test]
    fn zero_winding_never_gives_alpha(
        pairs in prop::collection::vec((1u64..5, 1u64..5), 1..4),
        zero in 0usize..8,
    ) {
        let (m, n): (Vec<u64>, Vec<u64>) = pairs.into_iter().unzip();
        let alpha = alpha_tilde(&m, &n);
        let mut it = eggbeater_itinerary(&m, &n);
        let k = zero % it.len();
        it[k].winding = 0;
        let w = itinerary_to_word(&it).unwrap();
        prop_assert!(!conjugate_eq(&w, &alpha));
    }
}

#[test]
fn through_b_segments_carry_c() {
    let it = [
        Segment::new(Flow::V, Square::A, Square::B, 2),
        Segment::new(Flow::H, Square::B, Square::B, 3),
        Segment::new(Flow::V, Square::B, Square::A, 1),
        Segment::new(Flow::H, Square::A, Square::A, 1),
    ];
    // a q1 · q4 b^2 q3 · q2 · b = a (a c⁻¹ b) b^2 c b.
    let expected: Word = "a^2 c^-1 b^3 c b".parse().unwrap();
    assert_eq!(itinerary_to_word(&it).unwrap(), expected);
}
