//! Randomised properties of diagrams, coefficients, classes and series.

mod common;

use bloch_rspt::coeff::{c_closed, e_closed, t};
use bloch_rspt::diagram::{canonical_diagram, crossing_numbers, is_convex, z_decompose};
use bloch_rspt::equivalence::{canonicalize, Mode};
use bloch_rspt::series::{diagrammatic_series, textbook_series, DiagrammaticOptions};
use bloch_rspt::{BlochSequence, CoefficientEngine, CrossingNumbers, Rational};
use proptest::prelude::*;

/// Any composition of `n` into `n` parts, `n` in `lo..=hi`.
fn sequence(lo: usize, hi: usize) -> impl Strategy<Value = BlochSequence> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(0..n, n).prop_map(move |slots| {
            let mut parts = vec![0u32; n];
            for s in slots {
                parts[s] += 1;
            }
            BlochSequence::new(parts).unwrap()
        })
    })
}

/// Valid crossing numbers: interior entries positive, at most three pairs.
fn crossings() -> impl Strategy<Value = CrossingNumbers> {
    prop::collection::vec((0u32..4, 0u32..4), 1..=3)
        .prop_filter_map("interior entries must be positive", |pairs| {
            CrossingNumbers::new(pairs).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_diagram_round_trips(cn in crossings()) {
        let d = canonical_diagram(&cn);
        prop_assume!(d.order() <= 10);
        prop_assert_eq!(canonical_diagram(&crossing_numbers(&d)), d.clone());
        prop_assert_eq!(crossing_numbers(&d), cn);
    }

    #[test]
    fn canonical_diagram_shares_coefficients(s in sequence(1, 10)) {
        let d = canonical_diagram(&crossing_numbers(&s));
        prop_assert_eq!(crossing_numbers(&d), crossing_numbers(&s));
        prop_assert_eq!(c_closed(&d), c_closed(&s));
        prop_assert_eq!(e_closed(&d), e_closed(&s));
    }

    #[test]
    fn z_decomposition_reassembles(s in sequence(1, 14)) {
        let z = z_decompose(&s);
        prop_assert_eq!(z.reassemble(), s.parts().to_vec());
        prop_assert_eq!(z.q(), s.parts().iter().filter(|&&k| k == 0).count() + 1);
    }

    #[test]
    fn convex_iff_single_pair_without_down_crossings(s in sequence(1, 14)) {
        let cn = crossing_numbers(&s);
        let single = cn.m() == 1 && cn.pairs()[0].1 == 0;
        prop_assert_eq!(is_convex(&s), single);
    }

    #[test]
    fn closed_form_matches_recurrence_beyond_exhaustive_range(s in sequence(9, 14)) {
        let engine = CoefficientEngine::new();
        prop_assert_eq!(c_closed(&s), engine.c_recurrence(&s));
        prop_assert_eq!(e_closed(&s), engine.e_recurrence(&s));
    }

    #[test]
    fn convex_coefficients(s in sequence(1, 14)) {
        prop_assume!(is_convex(&s));
        let n1 = crossing_numbers(&s).pairs()[0].0 as usize;
        prop_assert_eq!(c_closed(&s), Rational::one());
        prop_assert_eq!(e_closed(&s), t(n1));
        prop_assert!(e_closed(&s).is_positive());
    }

    #[test]
    fn canonicalize_is_idempotent(s in sequence(1, 12)) {
        for mode in [Mode::Energy, Mode::Vector] {
            let r = canonicalize(&s, mode);
            prop_assert_eq!(canonicalize(&r, mode), r.clone());
            prop_assert_eq!(r.order(), s.order());
            let mut a = s.parts().to_vec();
            let mut b = r.parts().to_vec();
            a.sort_unstable();
            b.sort_unstable();
            prop_assert_eq!(a, b);
        }
        // Vector mode keeps the leading string in place.
        let lead = z_decompose(&s).strings[0].clone();
        prop_assert_eq!(&z_decompose(&canonicalize(&s, Mode::Vector)).strings[0], &lead);
    }

    #[test]
    fn rationals_stay_in_lowest_terms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        for r in [&x + &y, &x - &y, &x * &y] {
            prop_assert!(r.denom() > &0.into());
            let g = num::Integer::gcd(r.numer(), r.denom());
            prop_assert_eq!(g, 1.into());
            prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn routes_agree_on_random_hermitian_specs(seed in any::<u64>(), order in 1usize..=6) {
        let spec = common::random_hermitian(&mut common::rng(seed));
        let engine = CoefficientEngine::new();
        let d = diagrammatic_series(&spec, order, DiagrammaticOptions::default(), &engine).unwrap();
        let b = textbook_series(&spec, order).unwrap();
        prop_assert!(bloch_rspt::series::energy_deviation(&d, &b) <= 1e-11);
        prop_assert!(bloch_rspt::series::vector_deviation(&d, &b) <= 1e-11);
        // <lambda_0|lambda_n> is real.
        for v in &d.vectors {
            prop_assert!(v[spec.target()].im.abs() <= 1e-13);
        }
    }
}
