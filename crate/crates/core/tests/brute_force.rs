//! Enumeration oracles: the fast admissible enumerator against a plain
//! brute-force filter, and the leading-term divisibility equivalence.

use proptest::prelude::*;
use wbasis_core::algebra::Part;
use wbasis_core::partitions::{
    all_of_degree, enumerate_admissible, enumerate_sl2_partitions, find_leading_term_divisor,
    kappa, satisfies_dc, satisfies_dc_sl2, satisfies_ic, satisfies_ic_sl2, shift, weight_degree,
    ColoredPartition, DominantWeight, Sl2Partition, Sl2Weight,
};

fn all_level_weights(k: u32) -> Vec<DominantWeight> {
    DominantWeight::all_of_level(k)
}

#[test]
fn enumerate_matches_brute_force_filter() {
    for k in 1..=2u32 {
        for lambda in all_level_weights(k) {
            for n in 0..=8u32 {
                let fast = enumerate_admissible(&lambda, n);
                let brute: Vec<ColoredPartition> = all_of_degree(n)
                    .into_iter()
                    .filter(|pi| satisfies_dc(pi, k) && satisfies_ic(pi, &lambda))
                    .collect();
                assert_eq!(
                    fast.len(),
                    brute.len(),
                    "count mismatch for {lambda} at degree {n}"
                );
                let fast_set: std::collections::BTreeSet<_> = fast.into_iter().collect();
                let brute_set: std::collections::BTreeSet<_> = brute.into_iter().collect();
                assert_eq!(fast_set, brute_set, "set mismatch for {lambda} at degree {n}");
            }
        }
    }
}

#[test]
fn sl2_enumerate_matches_brute_force_filter() {
    // brute force over depth-0 exponent and colored partitions of the
    // positive-depth part
    for (k0, k1) in [(1u32, 0u32), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let lambda = Sl2Weight::new(k0, k1);
        let k = lambda.level();
        for n in 0..=6u32 {
            let fast = enumerate_sl2_partitions(&lambda, n);
            let mut brute = Vec::new();
            for c0 in 0..=k {
                for pi in all_of_degree(n) {
                    let mut exps: Vec<(u32, [u32; 3])> = vec![(0, [c0, 0, 0])];
                    exps.extend(pi.exponents().iter().map(|(&d, &t)| (d, t)));
                    let cand = Sl2Partition::from_exponents(exps);
                    if satisfies_dc_sl2(&cand, k) && satisfies_ic_sl2(&cand, k0, k1) {
                        brute.push(cand);
                    }
                }
            }
            assert_eq!(fast.len(), brute.len(), "({k0},{k1}) degree {n}");
            let fast_set: std::collections::BTreeSet<_> = fast.into_iter().collect();
            let brute_set: std::collections::BTreeSet<_> = brute.into_iter().collect();
            assert_eq!(fast_set, brute_set);
        }
    }
}

#[test]
fn dc_iff_no_leading_term_divisor_exhaustive() {
    for k in 1..=2u32 {
        for n in 0..=8u32 {
            for pi in all_of_degree(n) {
                let dc = satisfies_dc(&pi, k);
                let div = find_leading_term_divisor(&pi, k);
                assert_eq!(dc, div.is_none(), "k={k}, pi={pi}");
                if let Some(f) = div {
                    assert!(pi.divides(&f.factor), "factor must divide: {pi}");
                    // the designated sum of the factor is exactly k+1
                    assert_eq!(f.factor.part_count(), (k + 1) as u64);
                }
            }
        }
    }
}

#[test]
fn semi_infinite_tables_are_weyl_symmetric() {
    use wbasis_core::partitions::semi_infinite_multiplicities;
    use wbasis_core::weights::b2_weyl_orbit;
    for lambda in all_level_weights(1) {
        let t = semi_infinite_multiplicities(&lambda, 3, None).unwrap();
        for (w, d, m) in t.entries() {
            for img in b2_weyl_orbit(&w) {
                assert_eq!(t.get(img, d), m, "asymmetry at {:?} deg {d} for {lambda}", w);
            }
        }
        // determinism: the stabilized table does not depend on the run
        let again = semi_infinite_multiplicities(&lambda, 3, None).unwrap();
        assert_eq!(t, again);
    }
}

#[test]
fn semi_infinite_matches_character_at_level_two() {
    use wbasis_core::characters::weight_multiplicities_b2;
    use wbasis_core::partitions::semi_infinite_multiplicities;
    for lambda in all_level_weights(2) {
        let stabilized = semi_infinite_multiplicities(&lambda, 4, None).unwrap();
        let character = weight_multiplicities_b2(&lambda, 4).unwrap();
        assert_eq!(stabilized, character, "level-2 mismatch for {lambda}");
    }
}

#[test]
fn tail_extension_preserves_admissibility() {
    // appending the two-depth tail block below an admissible partition
    // stays admissible
    for k in 1..=2u32 {
        for lambda in all_level_weights(k) {
            for n in 0..=6u32 {
                for pi in enumerate_admissible(&lambda, n) {
                    let extended = shift(&pi, -2).unwrap().concat(&kappa(&lambda));
                    assert!(
                        satisfies_dc(&extended, k) && satisfies_ic(&extended, &lambda),
                        "tail extension broke admissibility for {lambda}: {pi}"
                    );
                }
            }
        }
    }
}

fn arb_partition() -> impl Strategy<Value = ColoredPartition> {
    prop::collection::vec(((1u32..=9), (0u32..=3), (0u32..=3), (0u32..=3)), 0..6).prop_map(|v| {
        ColoredPartition::from_exponents(v.into_iter().map(|(d, c, b, a)| (d, [c, b, a])))
    })
}

proptest! {
    #[test]
    fn part_order_is_total_and_sorting_deterministic(pi in arb_partition()) {
        let mut parts: Vec<Part> = pi.parts();
        let sorted1 = { let mut v = parts.clone(); v.sort(); v };
        parts.reverse();
        let sorted2 = { let mut v = parts; v.sort(); v };
        prop_assert_eq!(sorted1, sorted2);
    }

    #[test]
    fn dc_iff_no_divisor_random(pi in arb_partition(), k in 1u32..=3) {
        prop_assert_eq!(satisfies_dc(&pi, k), find_leading_term_divisor(&pi, k).is_none());
    }

    #[test]
    fn shift_preserves_weight_and_moves_degree(pi in arb_partition(), p in -4i64..=0) {
        let shifted = shift(&pi, p).unwrap();
        let (w0, d0) = weight_degree(&pi);
        let (w1, d1) = weight_degree(&shifted);
        prop_assert_eq!(w0, w1);
        prop_assert_eq!(d1, d0 - p * pi.part_count() as i64);
    }

    #[test]
    fn json_round_trip(pi in arb_partition()) {
        let s = serde_json::to_string(&pi).unwrap();
        let back: ColoredPartition = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, pi);
    }
}
