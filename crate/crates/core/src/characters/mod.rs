//! Truncated Weyl-Kac characters of standard modules for A1(1) and B2(1):
//! denominator product over positive roots, numerator as an alternating sum
//! over the affine Weyl group, and exact division degree by degree.
//!
//! All tables are anchored so the highest weight vector sits at degree 0;
//! reported weights are absolute finite weights.

mod freudenthal;

pub use freudenthal::freudenthal_multiplicities;

use crate::error::{Error, Result};
use crate::partitions::{DominantWeight, Sl2Weight, WeightedCount};
use crate::weights::FiniteWeight;
use std::collections::{BTreeMap, HashSet, VecDeque};

type WeylAction = Box<dyn Fn(FiniteWeight) -> FiniteWeight + Sync>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AffineKind {
    A1,
    B2,
}

/// A weight of the affine algebra in (finite part, level, delta coefficient)
/// coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AffineWeight {
    pub finite: FiniteWeight,
    pub level: i64,
    pub delta: i64,
}

impl AffineWeight {
    fn new(finite: FiniteWeight, level: i64, delta: i64) -> Self {
        AffineWeight { finite, level, delta }
    }
}

/// Root data of the affine algebra: simple roots, fundamental weights, rho,
/// the positive-root generators and the imaginary root multiplicity. The
/// Cartan pairings and <rho, alpha_i^vee> = 1 are verified at construction;
/// nothing here is hard-coded beyond the finite root system itself.
#[derive(Clone, Debug)]
pub struct AffineDatum {
    pub kind: AffineKind,
    /// finite simple roots alpha_1 (and alpha_2 for B2)
    pub finite_simple: Vec<FiniteWeight>,
    /// highest root theta; alpha_0 = delta - theta
    pub theta: FiniteWeight,
    pub positive_finite: Vec<FiniteWeight>,
    pub all_finite: Vec<FiniteWeight>,
    /// finite parts of the fundamental weights (all levels are 1)
    pub fundamental_finite: Vec<FiniteWeight>,
    pub rho: AffineWeight,
    pub imaginary_mult: u32,
    /// generators of the translation lattice of the affine Weyl group
    pub translation_basis: Vec<FiniteWeight>,
    pub cartan: Vec<Vec<i64>>,
}

impl AffineDatum {
    pub fn new(kind: AffineKind) -> Self {
        let datum = match kind {
            AffineKind::B2 => {
                let alpha1 = FiniteWeight::from_coords(1, -1);
                let alpha2 = FiniteWeight::from_coords(0, 1);
                let theta = FiniteWeight::from_coords(1, 1);
                let eps1 = FiniteWeight::from_coords(1, 0);
                let omega1 = eps1;
                let omega2 = FiniteWeight::new(1, 1);
                let positive_finite = vec![alpha1, alpha2, eps1, theta];
                let mut all_finite = positive_finite.clone();
                all_finite.extend(positive_finite.iter().map(|w| -*w));
                let rho_fin = omega1 + omega2;
                let rho_level = 1 + rho_fin.pair_coroot(&theta);
                // alpha1 is long, alpha2 is short: alpha2^vee = 2*alpha2
                let translation_basis = vec![alpha1, alpha2.scale(2)];
                AffineDatum {
                    kind,
                    finite_simple: vec![alpha1, alpha2],
                    theta,
                    positive_finite,
                    all_finite,
                    fundamental_finite: vec![FiniteWeight::ZERO, omega1, omega2],
                    rho: AffineWeight::new(rho_fin, rho_level, 0),
                    imaginary_mult: 2,
                    translation_basis,
                    cartan: vec![vec![2, 0, -2], vec![0, 2, -2], vec![-1, -1, 2]],
                }
            }
            AffineKind::A1 => {
                let alpha = FiniteWeight::from_coords(1, 1);
                let omega = FiniteWeight::new(1, 1);
                let rho_fin = omega;
                let rho_level = 1 + rho_fin.pair_coroot(&alpha);
                AffineDatum {
                    kind,
                    finite_simple: vec![alpha],
                    theta: alpha,
                    positive_finite: vec![alpha],
                    all_finite: vec![alpha, -alpha],
                    fundamental_finite: vec![FiniteWeight::ZERO, omega],
                    rho: AffineWeight::new(rho_fin, rho_level, 0),
                    imaginary_mult: 1,
                    translation_basis: vec![alpha],
                    cartan: vec![vec![2, -2], vec![-2, 2]],
                }
            }
        };
        datum.verify();
        datum
    }

    fn verify(&self) {
        let n = self.finite_simple.len() + 1;
        for i in 0..n {
            for j in 0..n {
                assert_eq!(
                    self.pair_simple_coroot(&self.simple_root_weight(i), j),
                    self.cartan[i][j],
                    "Cartan pairing mismatch at ({i},{j})"
                );
            }
            assert_eq!(self.pair_simple_coroot(&self.rho, i), 1, "rho pairing at {i}");
        }
        for f in 0..self.fundamental_finite.len() {
            let fw = AffineWeight::new(self.fundamental_finite[f], 1, 0);
            for i in 0..n {
                let expect = if f == i { 1 } else { 0 };
                assert_eq!(self.pair_simple_coroot(&fw, i), expect);
            }
        }
    }

    fn simple_root_weight(&self, i: usize) -> AffineWeight {
        if i == 0 {
            AffineWeight::new(-self.theta, 0, 1)
        } else {
            AffineWeight::new(self.finite_simple[i - 1], 0, 0)
        }
    }

    /// <lambda, alpha_i^vee> with alpha_0^vee = c - theta^vee.
    fn pair_simple_coroot(&self, lambda: &AffineWeight, i: usize) -> i64 {
        if i == 0 {
            lambda.level - lambda.finite.pair_coroot(&self.theta)
        } else {
            lambda.finite.pair_coroot(&self.finite_simple[i - 1])
        }
    }

    fn reflect_simple(&self, lambda: &AffineWeight, i: usize) -> AffineWeight {
        let m = self.pair_simple_coroot(lambda, i);
        if i == 0 {
            AffineWeight::new(lambda.finite + self.theta.scale(m), lambda.level, lambda.delta - m)
        } else {
            AffineWeight::new(
                lambda.finite.reflect(&self.finite_simple[i - 1]),
                lambda.level,
                lambda.delta,
            )
        }
    }

    pub fn num_simple_roots(&self) -> usize {
        self.finite_simple.len() + 1
    }

    /// Finite Weyl group elements as (signature, action on weights).
    fn finite_weyl(&self) -> Vec<(i64, WeylAction)> {
        match self.kind {
            AffineKind::A1 => vec![
                (1, Box::new(|w| w) as WeylAction),
                (-1, Box::new(|w: FiniteWeight| -w)),
            ],
            AffineKind::B2 => {
                let mut out: Vec<(i64, WeylAction)> = Vec::new();
                for swap in [false, true] {
                    for s1 in [1i64, -1] {
                        for s2 in [1i64, -1] {
                            // det = s1*s2*(-1 if swap)
                            let det = s1 * s2 * if swap { -1 } else { 1 };
                            out.push((
                                det,
                                Box::new(move |w: FiniteWeight| {
                                    let (a, b) = if swap { (w.d2, w.d1) } else { (w.d1, w.d2) };
                                    FiniteWeight::new(s1 * a, s2 * b)
                                }),
                            ));
                        }
                    }
                }
                out
            }
        }
    }
}

/// The dominant affine weight attached to the B2 triple (k0, k1, k2).
pub fn affine_weight_b2(datum: &AffineDatum, lambda: &DominantWeight) -> AffineWeight {
    debug_assert!(matches!(datum.kind, AffineKind::B2));
    AffineWeight::new(lambda.finite_part(), lambda.level() as i64, 0)
}

/// The dominant affine weight attached to the A1 pair (k0, k1).
pub fn affine_weight_a1(datum: &AffineDatum, lambda: &Sl2Weight) -> AffineWeight {
    debug_assert!(matches!(datum.kind, AffineKind::A1));
    AffineWeight::new(lambda.finite_part(), lambda.level() as i64, 0)
}

/// A series sum c_{w,d} e^w q^d truncated at q-degree `cut`; weights are
/// finite-weight offsets relative to the highest weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    pub slices: Vec<BTreeMap<FiniteWeight, i64>>,
}

impl TruncatedSeries {
    pub fn zero(cut: usize) -> Self {
        TruncatedSeries { slices: vec![BTreeMap::new(); cut + 1] }
    }

    pub fn one(cut: usize) -> Self {
        let mut s = Self::zero(cut);
        s.slices[0].insert(FiniteWeight::ZERO, 1);
        s
    }

    pub fn cut(&self) -> usize {
        self.slices.len() - 1
    }

    fn add_term(&mut self, degree: usize, w: FiniteWeight, c: i64) {
        let e = self.slices[degree].entry(w).or_insert(0);
        *e += c;
        if *e == 0 {
            self.slices[degree].remove(&w);
        }
    }

    /// Multiply in place by (1 - e^{-beta} q^n).
    fn mul_one_minus(&mut self, beta: FiniteWeight, n: usize) {
        let cut = self.cut();
        if n == 0 {
            for d in 0..=cut {
                let snapshot: Vec<(FiniteWeight, i64)> =
                    self.slices[d].iter().map(|(w, c)| (*w, *c)).collect();
                for (w, c) in snapshot {
                    self.add_term(d, w - beta, -c);
                }
            }
        } else {
            for d in (n..=cut).rev() {
                let lower: Vec<(FiniteWeight, i64)> =
                    self.slices[d - n].iter().map(|(w, c)| (*w, *c)).collect();
                for (w, c) in lower {
                    self.add_term(d, w - beta, -c);
                }
            }
        }
    }

    /// Full product, for round-trip checks.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let cut = self.cut().min(other.cut());
        let mut out = TruncatedSeries::zero(cut);
        for d1 in 0..=cut {
            for (w1, c1) in &self.slices[d1] {
                for d2 in 0..=(cut - d1) {
                    for (w2, c2) in &other.slices[d2] {
                        out.add_term(d1 + d2, *w1 + *w2, c1 * c2);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(|s| s.is_empty())
    }
}

/// The truncated denominator: product over the positive roots of degree at
/// most `cut`, real roots with multiplicity 1 and imaginary roots with the
/// datum's multiplicity.
pub fn denominator_series(datum: &AffineDatum, cut: usize) -> TruncatedSeries {
    let mut s = TruncatedSeries::one(cut);
    for alpha in &datum.positive_finite {
        s.mul_one_minus(*alpha, 0);
    }
    for n in 1..=cut {
        for beta in &datum.all_finite {
            s.mul_one_minus(*beta, n);
        }
        for _ in 0..datum.imaginary_mult {
            s.mul_one_minus(FiniteWeight::ZERO, n);
        }
    }
    s
}

/// Height-style total order used to pick leading terms during division:
/// twice the sum of the simple-root coordinates of the offset, then the
/// doubled coordinates.
fn height2(datum: &AffineDatum, w: &FiniteWeight) -> i64 {
    match datum.kind {
        AffineKind::A1 => w.d1,
        AffineKind::B2 => 2 * w.d1 + w.d2,
    }
}

/// The truncated numerator: breadth-first orbit of Lambda+rho under the
/// affine Weyl group with weight-keyed deduplication, recorded as offsets
/// e^{w(Lambda+rho) - (Lambda+rho)}.
pub fn numerator_orbit(datum: &AffineDatum, lambda: &AffineWeight, cut: usize) -> TruncatedSeries {
    let start = AffineWeight::new(
        lambda.finite + datum.rho.finite,
        lambda.level + datum.rho.level,
        0,
    );
    let nroots = datum.num_simple_roots();
    let mut series = TruncatedSeries::zero(cut);
    let mut seen: HashSet<(FiniteWeight, i64)> = HashSet::new();
    let mut queue: VecDeque<(AffineWeight, i64)> = VecDeque::new();
    seen.insert((start.finite, start.delta));
    queue.push_back((start, 1));
    while let Some((lam, sign)) = queue.pop_front() {
        let drop = -lam.delta;
        debug_assert!(drop >= 0);
        series.add_term(drop as usize, lam.finite - start.finite, sign);
        for i in 0..nroots {
            let next = datum.reflect_simple(&lam, i);
            if -next.delta > cut as i64 {
                continue;
            }
            if seen.insert((next.finite, next.delta)) {
                queue.push_back((next, -sign));
            }
        }
    }
    series
}

/// The same numerator from the semidirect decomposition: finite Weyl group
/// times the translation lattice, with the closed translation formula
/// t_b(lam) = lam + level*b - (<lam,b> + level*|b|^2/2) delta. Independent
/// of the orbit search; used as a cross-check.
pub fn numerator_translations(
    datum: &AffineDatum,
    lambda: &AffineWeight,
    cut: usize,
) -> TruncatedSeries {
    let start_fin = lambda.finite + datum.rho.finite;
    let level = lambda.level + datum.rho.level;
    let mut series = TruncatedSeries::zero(cut);
    let weyl = datum.finite_weyl();

    // box radius: outside |coef| <= r the quadratic drop exceeds the cut
    let r = {
        let mut r = 1i64;
        loop {
            let mut min_drop = i64::MAX;
            for &c1 in &[-r, r] {
                for c2 in -r..=r {
                    for (a, b) in [(c1, c2), (c2, c1)] {
                        if let Some(beta) = lattice_vector(datum, a, b) {
                            min_drop = min_drop.min(translation_drop(&start_fin, level, &beta));
                        }
                    }
                }
            }
            if min_drop > cut as i64 {
                break r;
            }
            r += 1;
        }
    };

    let coords2: Vec<i64> = if datum.translation_basis.len() == 2 {
        (-r..=r).collect()
    } else {
        vec![0]
    };
    for a in -r..=r {
        for &b in &coords2 {
            let Some(beta) = lattice_vector(datum, a, b) else { continue };
            let drop = translation_drop(&start_fin, level, &beta);
            if drop < 0 || drop > cut as i64 {
                continue;
            }
            let translated = start_fin + beta.scale(level);
            for (sign, action) in &weyl {
                series.add_term(drop as usize, action(translated) - start_fin, *sign);
            }
        }
    }
    series
}

fn lattice_vector(datum: &AffineDatum, a: i64, b: i64) -> Option<FiniteWeight> {
    match datum.translation_basis.len() {
        1 => (b == 0).then(|| datum.translation_basis[0].scale(a)),
        2 => Some(datum.translation_basis[0].scale(a) + datum.translation_basis[1].scale(b)),
        _ => None,
    }
}

/// delta-degree drop of the translation t_beta applied to a level-`level`
/// weight with finite part `fin`: <fin, beta> + level*|beta|^2/2.
fn translation_drop(fin: &FiniteWeight, level: i64, beta: &FiniteWeight) -> i64 {
    let pairing4 = fin.dot4(beta); // 4<fin, beta>
    let norm4 = beta.dot4(beta); // 4<beta, beta>
    debug_assert_eq!((pairing4 + level * norm4 / 2) % 4, 0);
    (pairing4 + level * norm4 / 2) / 4
}

fn convolve(
    a: &BTreeMap<FiniteWeight, i64>,
    b: &BTreeMap<FiniteWeight, i64>,
) -> BTreeMap<FiniteWeight, i64> {
    let mut out = BTreeMap::new();
    for (w1, c1) in a {
        for (w2, c2) in b {
            let e = out.entry(*w1 + *w2).or_insert(0);
            *e += c1 * c2;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Exact weight multiplicities of the standard module with highest weight
/// `lambda`, per (absolute finite weight, degree <= cut). The division of
/// the numerator by the denominator proceeds degree by degree; a negative
/// multiplicity is reported as an internal error.
pub fn weight_multiplicities_affine(
    datum: &AffineDatum,
    lambda: &AffineWeight,
    cut: usize,
) -> Result<WeightedCount> {
    let num = numerator_orbit(datum, lambda, cut);
    let den = denominator_series(datum, cut);
    let q = divide_series(datum, &num, &den)?;
    let mut out = WeightedCount::new();
    for (d, slice) in q.slices.iter().enumerate() {
        for (w, c) in slice {
            if *c < 0 {
                return Err(Error::Internal(format!(
                    "negative multiplicity {c} at weight {:?}, degree {d}",
                    w.doubled()
                )));
            }
            if *c > 0 {
                out.add(lambda.finite + *w, d as i64, *c as u64);
            }
        }
    }
    Ok(out)
}

/// num / den in the truncated series algebra, assuming an exact quotient
/// with finite support per degree.
pub fn divide_series(
    datum: &AffineDatum,
    num: &TruncatedSeries,
    den: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    let cut = num.cut().min(den.cut());
    let den0 = &den.slices[0];
    debug_assert_eq!(den0.get(&FiniteWeight::ZERO), Some(&1));
    let mut q = TruncatedSeries::zero(cut);
    for d in 0..=cut {
        // y = num_d - sum_{e<d} q_e * den_{d-e}
        let mut y = num.slices[d].clone();
        for e in 0..d {
            for (w, c) in convolve(&q.slices[e], &den.slices[d - e]) {
                let entry = y.entry(w).or_insert(0);
                *entry -= c;
                if *entry == 0 {
                    y.remove(&w);
                }
            }
        }
        // divide y by den0: repeatedly strip the height-maximal term
        let mut guard = 0usize;
        while let Some((&w, &c)) = y
            .iter()
            .max_by_key(|(w, _)| (height2(datum, w), w.d1, w.d2))
        {
            guard += 1;
            if guard > 2_000_000 {
                return Err(Error::Internal(
                    "series division did not terminate".into(),
                ));
            }
            q.slices[d].insert(w, c);
            for (w0, c0) in den0 {
                let entry = y.entry(w + *w0).or_insert(0);
                *entry -= c * c0;
                if *entry == 0 {
                    y.remove(&(w + *w0));
                }
            }
        }
    }
    Ok(q)
}

/// Weight multiplicities for a B2 dominant weight.
pub fn weight_multiplicities_b2(lambda: &DominantWeight, cut: usize) -> Result<WeightedCount> {
    let datum = AffineDatum::new(AffineKind::B2);
    let aw = affine_weight_b2(&datum, lambda);
    weight_multiplicities_affine(&datum, &aw, cut)
}

/// Weight multiplicities for an A1 dominant weight.
pub fn weight_multiplicities_a1(lambda: &Sl2Weight, cut: usize) -> Result<WeightedCount> {
    let datum = AffineDatum::new(AffineKind::A1);
    let aw = affine_weight_a1(&datum, lambda);
    weight_multiplicities_affine(&datum, &aw, cut)
}

/// Per-degree total dimensions (weights summed out).
pub fn graded_dims(table: &WeightedCount, cut: usize) -> Vec<u64> {
    (0..=cut as i64).map(|d| table.total_at(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn datum_construction_verifies() {
        let b2 = AffineDatum::new(AffineKind::B2);
        assert_eq!(b2.rho.level, 3);
        let a1 = AffineDatum::new(AffineKind::A1);
        assert_eq!(a1.rho.level, 2);
    }

    #[test]
    fn denominator_constant_term_and_degree_zero() {
        let datum = AffineDatum::new(AffineKind::B2);
        let den = denominator_series(&datum, 3);
        assert_eq!(den.slices[0].get(&FiniteWeight::ZERO), Some(&1));
        // degree-0 slice is the finite Weyl denominator: after cancellation
        // (alpha1 + alpha2 = eps1) it has |W| = 8 signed terms e^{w(rho)-rho}
        assert_eq!(den.slices[0].len(), 8);
        let rho = datum.rho.finite;
        for w in crate::weights::b2_weyl_orbit(&rho) {
            assert!(den.slices[0].contains_key(&(w - rho)));
        }
    }

    #[test]
    fn a1_denominator_matches_direct_expansion() {
        let datum = AffineDatum::new(AffineKind::A1);
        let cut = 4;
        let den = denominator_series(&datum, cut);
        let alpha = FiniteWeight::from_coords(1, 1);
        let mut direct = TruncatedSeries::one(cut);
        direct.mul_one_minus(alpha, 0);
        for n in 1..=cut {
            direct.mul_one_minus(alpha, n);
            direct.mul_one_minus(FiniteWeight::ZERO, n);
            direct.mul_one_minus(-alpha, n);
        }
        assert_eq!(den, direct);
    }

    #[test]
    fn numerator_identity_and_simple_reflections() {
        let datum = AffineDatum::new(AffineKind::B2);
        let lam = affine_weight_b2(&datum, &DominantWeight::new(1, 0, 0));
        let num = numerator_orbit(&datum, &lam, 2);
        // identity contributes +1 at offset zero, degree 0
        assert_eq!(num.slices[0].get(&FiniteWeight::ZERO), Some(&1));
        // each simple reflection contributes -1 at offset -m*alpha_i
        let start = AffineWeight::new(lam.finite + datum.rho.finite, lam.level + datum.rho.level, 0);
        for i in 1..datum.num_simple_roots() {
            let m = datum.pair_simple_coroot(&start, i);
            let off = -datum.finite_simple[i - 1].scale(m);
            assert_eq!(num.slices[0].get(&off), Some(&-1), "reflection {i}");
        }
    }

    #[test]
    fn orbit_and_translation_numerators_agree() {
        for (kind, weights) in [
            (AffineKind::A1, vec![(1u32, 0u32), (0, 1), (2, 0), (1, 1)]),
            (AffineKind::B2, vec![(1, 0), (0, 1), (2, 0)]),
        ] {
            let datum = AffineDatum::new(kind);
            for (k0, k1) in weights {
                let lam = match kind {
                    AffineKind::A1 => affine_weight_a1(&datum, &Sl2Weight::new(k0, k1)),
                    AffineKind::B2 => {
                        affine_weight_b2(&datum, &DominantWeight::new(k0, k1, 0))
                    }
                };
                let a = numerator_orbit(&datum, &lam, 5);
                let b = numerator_translations(&datum, &lam, 5);
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn division_round_trip() {
        let datum = AffineDatum::new(AffineKind::B2);
        let lam = affine_weight_b2(&datum, &DominantWeight::new(1, 0, 0));
        let cut = 4;
        let num = numerator_orbit(&datum, &lam, cut);
        let den = denominator_series(&datum, cut);
        let q = divide_series(&datum, &num, &den).unwrap();
        assert_eq!(q.mul(&den), num);
    }

    #[test]
    fn b2_level_one_tops() {
        for (lam, top) in [
            (DominantWeight::new(1, 0, 0), 1),
            (DominantWeight::new(0, 1, 0), 5),
            (DominantWeight::new(0, 0, 1), 4),
        ] {
            let t = weight_multiplicities_b2(&lam, 0).unwrap();
            assert_eq!(t.total_at(0), top, "top of {lam}");
            assert_eq!(t.get(lam.finite_part(), 0), 1);
        }
    }

    #[test]
    fn a1_level_one_graded_dims() {
        let t = weight_multiplicities_a1(&Sl2Weight::new(1, 0), 5).unwrap();
        assert_eq!(graded_dims(&t, 5), vec![1, 3, 4, 7, 13, 19]);
    }
}
