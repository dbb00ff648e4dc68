//! Independent oracles for the character machinery: closed-form q-series
//! for the level-one A1 dimensions, numerator cross-checks, Freudenthal
//! agreement, and Weyl symmetry of the tables.

use wbasis_core::characters::{
    affine_weight_a1, affine_weight_b2, denominator_series, divide_series,
    freudenthal_multiplicities, graded_dims, numerator_orbit, numerator_translations,
    weight_multiplicities_a1, weight_multiplicities_b2, AffineDatum, AffineKind,
};
use wbasis_core::partitions::{DominantWeight, Sl2Weight, WeightedCount};
use wbasis_core::weights::{b2_weyl_orbit, FiniteWeight};

/// Coefficients of (sum_m q^(m^2)) / prod_(n>=1) (1-q^n) up to q^cut: the
/// graded dimensions of the level-one vacuum A1 module.
fn theta_over_eta_coeffs(cut: usize) -> Vec<u64> {
    let mut theta = vec![0u64; cut + 1];
    theta[0] = 1;
    let mut m = 1usize;
    while m * m <= cut {
        theta[m * m] += 2;
        m += 1;
    }
    // partition numbers by dynamic programming over part sizes
    let mut parts = vec![0u64; cut + 1];
    parts[0] = 1;
    for size in 1..=cut {
        for n in size..=cut {
            parts[n] += parts[n - size];
        }
    }
    let mut out = vec![0u64; cut + 1];
    for (n, o) in out.iter_mut().enumerate() {
        for i in 0..=n {
            *o += theta[i] * parts[n - i];
        }
    }
    out
}

#[test]
fn a1_level_one_matches_closed_form_series() {
    let cut = 8;
    let t = weight_multiplicities_a1(&Sl2Weight::new(1, 0), cut).unwrap();
    assert_eq!(graded_dims(&t, cut), theta_over_eta_coeffs(cut));
}

#[test]
fn numerator_cross_check_wider() {
    let datum = AffineDatum::new(AffineKind::B2);
    for lambda in DominantWeight::all_of_level(1)
        .into_iter()
        .chain(DominantWeight::all_of_level(2))
    {
        let aw = affine_weight_b2(&datum, &lambda);
        let orbit = numerator_orbit(&datum, &aw, 7);
        let translated = numerator_translations(&datum, &aw, 7);
        assert_eq!(orbit, translated, "numerators differ for {lambda}");
    }
}

#[test]
fn division_round_trip_all_level_two() {
    let datum = AffineDatum::new(AffineKind::B2);
    for lambda in DominantWeight::all_of_level(2) {
        let aw = affine_weight_b2(&datum, &lambda);
        let num = numerator_orbit(&datum, &aw, 5);
        let den = denominator_series(&datum, 5);
        let q = divide_series(&datum, &num, &den).unwrap();
        assert_eq!(q.mul(&den), num, "round trip failed for {lambda}");
    }
}

#[test]
fn freudenthal_cross_oracle_level_two() {
    let b2 = AffineDatum::new(AffineKind::B2);
    for lambda in DominantWeight::all_of_level(2) {
        let aw = affine_weight_b2(&b2, &lambda);
        let f = freudenthal_multiplicities(&b2, &aw, 3).unwrap();
        let w = weight_multiplicities_affine_table(&b2, &aw, 3);
        assert_eq!(f, w, "Freudenthal mismatch for {lambda}");
    }
    let a1 = AffineDatum::new(AffineKind::A1);
    for (k0, k1) in [(2u32, 0u32), (0, 2), (1, 1)] {
        let aw = affine_weight_a1(&a1, &Sl2Weight::new(k0, k1));
        let f = freudenthal_multiplicities(&a1, &aw, 3).unwrap();
        let w = weight_multiplicities_affine_table(&a1, &aw, 3);
        assert_eq!(f, w, "Freudenthal mismatch for A1 ({k0},{k1})");
    }
}

fn weight_multiplicities_affine_table(
    datum: &AffineDatum,
    aw: &wbasis_core::characters::AffineWeight,
    cut: usize,
) -> WeightedCount {
    wbasis_core::characters::weight_multiplicities_affine(datum, aw, cut).unwrap()
}

#[test]
fn tables_are_weyl_symmetric() {
    for lambda in DominantWeight::all_of_level(1)
        .into_iter()
        .chain(DominantWeight::all_of_level(2))
    {
        let t = weight_multiplicities_b2(&lambda, 4).unwrap();
        for (w, d, m) in t.entries() {
            for img in b2_weyl_orbit(&w) {
                assert_eq!(t.get(img, d), m, "asymmetry at {:?} deg {d} for {lambda}", w);
            }
        }
    }
}

#[test]
fn a1_tops_match_finite_dimensions() {
    // top of the module indexed by (k0, k1) is the (k1+1)-dimensional
    // irreducible of the finite algebra
    for (k0, k1) in [(1u32, 0u32), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let t = weight_multiplicities_a1(&Sl2Weight::new(k0, k1), 0).unwrap();
        assert_eq!(t.total_at(0), (k1 + 1) as u64);
    }
}

#[test]
fn graded_dims_seed_zero_degrees() {
    let t = weight_multiplicities_b2(&DominantWeight::new(1, 0, 0), 3).unwrap();
    let dims = graded_dims(&t, 3);
    assert_eq!(dims.len(), 4);
    assert_eq!(dims[0], 1);
    assert_eq!(t.get(FiniteWeight::ZERO, 0), 1);
}
