mod common;

use analogic_core::prob::{entails, JointDistribution, Proposition, NORMALIZATION_TOLERANCE};
use common::{dist, mask_prop, mass, space, weights};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(10_000)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normalization(w in weights(8)) {
        let d = dist(&space(3), w);
        let total: f64 = d.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= NORMALIZATION_TOLERANCE);
        prop_assert!(d.weights().iter().all(|x| *x >= 0.0));
    }

    #[test]
    fn additivity_over_disjoint_events(w in weights(8), a in 0u32..256, b in 0u32..256) {
        let s = space(3);
        let b = b & !a;
        let d = dist(&s, w);
        let (pa, pb) = (mask_prop(&s, a), mask_prop(&s, b));
        let union = d.probability(&pa.or(&pb).unwrap()).unwrap();
        let sum = d.probability(&pa).unwrap() + d.probability(&pb).unwrap();
        prop_assert!((union - sum).abs() <= 1e-12);
    }

    #[test]
    fn relevance_is_symmetric(w in weights(8), a in 1u32..255, b in 1u32..255) {
        let s = space(3);
        let d = dist(&s, w);
        let (pa, pb) = (mask_prop(&s, a), mask_prop(&s, b));
        let (p_a, p_b) = (d.probability(&pa).unwrap(), d.probability(&pb).unwrap());
        prop_assume!(d.is_non_extremal(&pa, 1e-9).unwrap() && d.is_non_extremal(&pb, 1e-9).unwrap());
        let up_a = d.conditional(&pa, &pb).unwrap() - p_a;
        let up_b = d.conditional(&pb, &pa).unwrap() - p_b;
        // Both differences share the sign of P(a&b) - P(a)P(b); ignore float ties.
        prop_assume!(up_a.abs() > 1e-12 && up_b.abs() > 1e-12);
        prop_assert_eq!(up_a > 0.0, up_b > 0.0);
    }

    #[test]
    fn total_probability(w in weights(8), a in 0u32..256, b in 1u32..255) {
        let s = space(3);
        let d = dist(&s, w);
        let (pa, pb) = (mask_prop(&s, a), mask_prop(&s, b));
        let nb = pb.not();
        if let (Ok(given_b), Ok(given_nb)) = (d.conditional(&pa, &pb), d.conditional(&pa, &nb)) {
            let rebuilt = given_b * d.probability(&pb).unwrap() + given_nb * d.probability(&nb).unwrap();
            prop_assert!((rebuilt - d.probability(&pa).unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn entailment_is_monotone(w in weights(8), a in 0u32..256, b in 0u32..256) {
        let s = space(3);
        let d = dist(&s, w);
        let (pa, pb) = (mask_prop(&s, a), mask_prop(&s, b));
        prop_assert_eq!(entails(&pa, &pb).unwrap(), a & !b == 0);
        if entails(&pa, &pb).unwrap() {
            prop_assert!(d.probability(&pa).unwrap() <= d.probability(&pb).unwrap());
        }
    }

    #[test]
    fn probability_matches_direct_sum(w in weights(16), a in 0u32..65536) {
        let s = space(4);
        let d = dist(&s, w);
        let direct = mass(d.weights(), a);
        prop_assert!((d.probability(&mask_prop(&s, a)).unwrap() - direct).abs() <= 1e-12);
    }

    #[test]
    fn formula_extension_matches_evaluation(w in weights(8)) {
        let s = space(3);
        let d = dist(&s, w);
        let p = Proposition::parse(&s, "p0 & !p1 | p2").unwrap();
        // worlds where (p0 and not p1) or p2
        let mask = (0..8u32).filter(|i| (i & 1 == 1 && i & 2 == 0) || i & 4 != 0).fold(0, |m, i| m | (1 << i));
        prop_assert!((d.probability(&p).unwrap() - mass(d.weights(), mask)).abs() <= 1e-12);
    }
}

#[test]
fn spec_examples() {
    let s = space(2);
    // world bit0 = p0 (a), bit1 = p1 (b): [!a!b, a!b, !ab, ab]
    let d = JointDistribution::new(&s, vec![0.4, 0.2, 0.1, 0.3]).unwrap();
    let a = Proposition::atom(&s, "p0").unwrap();
    let b = Proposition::atom(&s, "p1").unwrap();
    assert!((d.probability(&a).unwrap() - (0.3 + 0.2)).abs() < 1e-15);
    assert!((d.conditional(&a, &b).unwrap() - 0.3 / (0.3 + 0.1)).abs() < 1e-15);
    assert_eq!(d.conditional(&a, &a).unwrap(), 1.0);
    assert_eq!(d.probability(&a.or(&a.not()).unwrap()).unwrap(), 1.0);

    let u = JointDistribution::uniform(&s);
    assert_eq!(u.conditional(&a, &b).unwrap(), 0.5);
    assert!(u.is_non_extremal(&a, 1e-9).unwrap());
    assert!(!u
        .is_non_extremal(&Proposition::tautology(&s), 1e-9)
        .unwrap());

    let point = JointDistribution::point_mass(&s, 3).unwrap();
    let world = Proposition::parse(&s, "p0 & p1").unwrap();
    assert!(!point.is_non_extremal(&world, 1e-9).unwrap());

    let ab = a.and(&b).unwrap();
    assert!(entails(&ab, &a).unwrap());
    assert!(entails(&a, &a.or(&b).unwrap()).unwrap());
    assert!(!entails(&a, &b).unwrap());
}

#[test]
fn cross_space_queries_are_structural_errors() {
    let d = JointDistribution::uniform(&space(2));
    let other = space(3);
    let a = Proposition::atom(&other, "p2").unwrap();
    let e = d.probability(&a).unwrap_err();
    assert!(!e.is_undefined_conditional());
}
