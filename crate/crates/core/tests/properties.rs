use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ihara::cft::{certify_tower, PlanEntry, RamificationPlan};
use ihara::curve::{divisor_sum, mobius_invert, PlaceSpectrum};
use ihara::expr::MPoly;
use ihara::ff::{ExtField, FieldParams};
use ihara::report::{parse_rational, truncated_decimal};
use ihara::search::{optimize, SearchSpace};

fn small_field() -> impl Strategy<Value = (u32, u32, u32)> {
    prop::sample::select(vec![(2, 1, 5), (2, 2, 3), (3, 1, 4), (5, 1, 2), (7, 1, 3), (2, 1, 1), (3, 2, 2)])
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((p, e, n) in small_field(), seeds in prop::array::uniform3(any::<u32>())) {
        let f = ExtField::new(FieldParams::new(p, e).unwrap(), n).unwrap();
        let order = f.order() as u32;
        let [a, b, c] = seeds.map(|s| f.element(s % order).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.pow(a, f.order()), a);
        if let Some(inv) = f.inv(a) {
            prop_assert_eq!(f.mul(a, inv), f.one());
        } else {
            prop_assert!(a.is_zero());
        }
        let tr = |x| f.absolute_trace(x);
        prop_assert!(tr(a) < p);
        prop_assert_eq!(tr(f.add(a, b)), (tr(a) + tr(b)) % p);
    }

    #[test]
    fn mobius_round_trip(places in prop::collection::vec(0i128..10_000, 1..16)) {
        let counts = divisor_sum(&places);
        prop_assert_eq!(mobius_invert(&counts), Ok(places));
    }

    #[test]
    fn polynomial_display_reparses(
        p in prop::sample::select(vec![2u32, 3, 5, 7]),
        terms in prop::collection::vec((0u32..4, 0u32..4, 0u32..3, 1i64..7), 0..6),
    ) {
        let mut poly = MPoly::zero(p);
        for (i, j, k, c) in terms {
            let mono = MPoly::parse(&format!("{c} x^{i} y^{j} h^{k}"), p).unwrap();
            poly = poly.add(&mono);
        }
        prop_assert_eq!(MPoly::parse(&poly.to_string(), p).unwrap(), poly);
    }

    #[test]
    fn truncated_decimals_bracket_the_value(n in -10_000i64..10_000, d in 1i64..5_000, digits in 0usize..15) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        let shown = truncated_decimal(&r, digits);
        let back = parse_rational(&shown).unwrap();
        let ulp = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), digits));
        prop_assert!((&r - &back) < ulp && (&back - &r) < ulp);
        // truncation moves toward zero
        prop_assert!(back.clone() * back.clone() <= r.clone() * r.clone());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// The optimum dominates every certified plan, found here by a plain
    /// nested loop over the multiplicities.
    #[test]
    fn search_optimum_dominates(a5 in 0u64..4, a6 in 0u64..20, a7 in 0u64..12, t in 1u64..40, genus in 2u64..60) {
        let params = FieldParams::new(2, 1).unwrap();
        let spectrum = PlaceSpectrum::from_places(2, genus, vec![t, 0, 0, 0, a5, a6, a7]);
        let space = SearchSpace::new(params, spectrum, genus).with_degrees(5..=7).with_top_n(usize::MAX);
        prop_assert_eq!(space.candidate_count().unwrap(), (a5 + 1) * (a6 + 1) * (a7 + 1));
        let mut best: Option<BigRational> = None;
        let mut certified = 0u64;
        for c5 in 0..=a5 {
            for c6 in 0..=a6 {
                for c7 in 0..=a7 {
                    let entries: Vec<PlanEntry> = [(5, c5), (6, c6), (7, c7)]
                        .into_iter()
                        .filter(|&(_, c)| c > 0)
                        .map(|(degree, count)| PlanEntry { degree, count, nu: 2 })
                        .collect();
                    let plan = RamificationPlan::new(params, entries, t).unwrap();
                    let cert = certify_tower(genus, &plan).unwrap();
                    if let Some(b) = cert.bound_refined {
                        certified += 1;
                        if best.as_ref().map_or(true, |x| &b > x) {
                            best = Some(b);
                        }
                    }
                }
            }
        }
        match optimize(&space) {
            Ok(out) => {
                prop_assert_eq!(out.certified, certified);
                prop_assert_eq!(out.ranked.len() as u64, certified);
                prop_assert_eq!(Some(out.best().bound_refined().clone()), best);
            }
            Err(_) => prop_assert_eq!(certified, 0),
        }
    }
}
