//! Property tests for the structural invariants.

use proptest::prelude::*;

use kmlab_core::chars::{char_l, demazure_op, CharacterPoly};
use kmlab_core::gcm::{pairing, reflect, validate_gcm, Gcm, Weight};
use kmlab_core::weyl::{bruhat_leq, canonicalize, enumerate};

fn arb_gcm() -> impl Strategy<Value = Gcm> {
    // rank 2 with nonpositive off-diagonal entries, symmetric zero pattern
    (0i64..=3, 0i64..=3)
        .prop_filter("zero pattern symmetric", |(a, b)| (*a == 0) == (*b == 0))
        .prop_map(|(a, b)| {
            validate_gcm(
                vec![vec![2, -a], vec![-b, 2]],
                vec!["1".into(), "2".into()],
            )
            .unwrap()
        })
}

fn arb_weight() -> impl Strategy<Value = Weight> {
    (
        proptest::collection::vec(-3i64..=3, 2),
        proptest::collection::vec(-3i64..=3, 2),
    )
        .prop_map(|(anchor, depth)| Weight::new(anchor, depth))
}

proptest! {
    #[test]
    fn reflect_is_involution_preserving_anchor(g in arb_gcm(), w in arb_weight(), i in 0usize..2) {
        let r = reflect(&g, i, &w);
        prop_assert_eq!(r.anchor.clone(), w.anchor.clone());
        prop_assert_eq!(reflect(&g, i, &r), w.clone());
        prop_assert_eq!(pairing(&g, i, &r), -pairing(&g, i, &w));
    }

    #[test]
    fn symmetrizer_identity(g in arb_gcm()) {
        if let Some(d) = &g.symmetrizer {
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert_eq!(d[i] * g.entry(i, j), d[j] * g.entry(j, i));
                }
            }
            prop_assert!(d.iter().all(|&x| x >= 1));
        }
    }

    #[test]
    fn canonicalize_replays_reduced_word(g in arb_gcm(), word in proptest::collection::vec(0usize..2, 0..8)) {
        let w = canonicalize(&g, &word);
        prop_assert!(w.length() <= word.len());
        let replay = canonicalize(&g, w.reduced_word());
        prop_assert_eq!(&replay, &w);
        // parity of the length is the parity of the word
        prop_assert_eq!(w.length() % 2, word.len() % 2);
    }

    #[test]
    fn bruhat_reflexive_and_length_monotone(g in arb_gcm(), word in proptest::collection::vec(0usize..2, 0..6)) {
        let w = canonicalize(&g, &word);
        prop_assert!(bruhat_leq(&g, &w, &w));
        for v in enumerate(&g, 2) {
            if bruhat_leq(&g, &v, &w) {
                prop_assert!(v.length() <= w.length());
            }
        }
    }

    #[test]
    fn demazure_idempotent(g in arb_gcm(), anchor in proptest::collection::vec(0i64..=2, 2), m in proptest::collection::vec(0i64..=2, 2), i in 0usize..2) {
        let mut f = CharacterPoly::zero(anchor, 64);
        f.add_term(m, 1);
        let d1 = demazure_op(&g, i, &f);
        let d2 = demazure_op(&g, i, &d1);
        prop_assert_eq!(d1, d2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn char_l_weyl_invariant_in_window(a in 0i64..=2, b in 0i64..=2) {
        let g = validate_gcm(vec![vec![2, -1], vec![-1, 2]], vec!["1".into(), "2".into()]).unwrap();
        let lambda = vec![a, b];
        let d = 4usize;
        let chi = char_l(&g, &lambda, d).unwrap();
        for (m, &c) in chi.terms() {
            for i in 0..2 {
                let mu = Weight::new(lambda.clone(), m.clone());
                let refl = reflect(&g, i, &mu);
                if refl.depth.iter().all(|&x| x >= 0)
                    && refl.depth.iter().sum::<i64>() <= d as i64
                {
                    prop_assert_eq!(chi.coeff(&refl.depth), c);
                }
            }
        }
    }
}
