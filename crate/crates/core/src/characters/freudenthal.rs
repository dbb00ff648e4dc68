//! Freudenthal-style multiplicity recursion on the affine root data: an
//! independent cross-oracle for small degree cuts.

use super::{AffineDatum, AffineKind, AffineWeight};
use crate::error::{Error, Result};
use crate::partitions::WeightedCount;
use crate::weights::FiniteWeight;
use std::collections::HashMap;

fn height2(datum: &AffineDatum, w: &FiniteWeight) -> i64 {
    match datum.kind {
        AffineKind::A1 => w.d1,
        AffineKind::B2 => 2 * w.d1 + w.d2,
    }
}

fn in_root_lattice(datum: &AffineDatum, w: &FiniteWeight) -> bool {
    match datum.kind {
        AffineKind::A1 => w.d1 == w.d2 && w.d1 % 2 == 0,
        AffineKind::B2 => w.d1 % 2 == 0 && w.d2 % 2 == 0,
    }
}

/// Exact weight multiplicities by the Freudenthal recursion, per (absolute
/// finite weight, degree <= cut). Quadratic cost per weight; intended for
/// small cuts as a sanity layer next to the character division.
pub fn freudenthal_multiplicities(
    datum: &AffineDatum,
    lambda: &AffineWeight,
    cut: usize,
) -> Result<WeightedCount> {
    let k = lambda.level;
    let lam_fin = lambda.finite;
    let rho_fin = datum.rho.finite;
    let big_level = k + datum.rho.level;
    let top4 = (lam_fin + rho_fin).dot4(&(lam_fin + rho_fin));

    // every weight at degree d obeys |mu+rho|^2 <= |lambda+rho|^2 +
    // 2*(k + h_vee)*d; this ball is the candidate region per degree
    let bound4 = |d: i64| top4 + 8 * big_level * d;
    let in_ball = |w: &FiniteWeight, d: i64| {
        let s = *w + rho_fin;
        s.dot4(&s) <= bound4(d)
    };

    let radius = {
        let b = bound4(cut as i64);
        let mut r = 0i64;
        while r * r <= b {
            r += 1;
        }
        r + rho_fin.d1.abs().max(rho_fin.d2.abs())
    };

    // order: degree ascending, then height descending so that weights
    // closer to the highest weight are computed first within a degree
    let mut candidates: Vec<(FiniteWeight, i64)> = Vec::new();
    for d in 0..=cut as i64 {
        let mut slice: Vec<FiniteWeight> = Vec::new();
        for d1 in -radius..=radius {
            for d2 in -radius..=radius {
                let w = FiniteWeight::new(d1, d2);
                if in_ball(&w, d) && in_root_lattice(datum, &(w - lam_fin)) {
                    slice.push(w);
                }
            }
        }
        slice.sort_by_key(|w| (-height2(datum, w), w.d1, w.d2));
        candidates.extend(slice.into_iter().map(|w| (w, d)));
    }

    let mut table: HashMap<(FiniteWeight, i64), i64> = HashMap::new();
    table.insert((lam_fin, 0), 1);

    for (fin, d) in candidates {
        if (fin, d) == (lam_fin, 0) {
            continue;
        }
        let mut numer4: i64 = 0;
        // real roots beta + n*delta (n = 0 only for positive beta) and
        // imaginary roots n*delta with the datum's multiplicity
        let push_contrib = |beta: FiniteWeight, n: i64, mult: i64, numer4: &mut i64| {
            let mut j = 1i64;
            loop {
                let nd = d - j * n;
                if nd < 0 {
                    break;
                }
                let nf = fin + beta.scale(j);
                // the ball is convex, but the ray may re-enter; walk until
                // the quadratic in j is provably increasing and outside
                if !beta.is_zero() && !in_ball(&nf, nd) {
                    let step = (nf + rho_fin).dot4(&beta);
                    if step >= 0 {
                        break;
                    }
                    j += 1;
                    continue;
                }
                if beta.is_zero() && n == 0 {
                    break;
                }
                let m = table.get(&(nf, nd)).copied().unwrap_or(0);
                if m != 0 {
                    let form4 = nf.dot4(&beta) + 4 * k * n;
                    *numer4 += mult * m * form4;
                }
                j += 1;
            }
        };
        for beta in &datum.positive_finite {
            push_contrib(*beta, 0, 1, &mut numer4);
        }
        for n in 1..=d {
            for beta in &datum.all_finite {
                push_contrib(*beta, n, 1, &mut numer4);
            }
            push_contrib(FiniteWeight::ZERO, n, datum.imaginary_mult as i64, &mut numer4);
        }

        let mu_rho = fin + rho_fin;
        let denom4 = top4 - mu_rho.dot4(&mu_rho) + 8 * big_level * d;
        if denom4 == 0 {
            if numer4 != 0 {
                return Err(Error::Internal(
                    "vanishing Freudenthal denominator with nonzero numerator".into(),
                ));
            }
            continue;
        }
        let m2 = 2 * numer4;
        if m2 % denom4 != 0 {
            return Err(Error::Internal(format!(
                "non-integral multiplicity at {:?}, degree {d}",
                fin.doubled()
            )));
        }
        let m = m2 / denom4;
        if m < 0 {
            return Err(Error::Internal(format!(
                "negative multiplicity at {:?}, degree {d}",
                fin.doubled()
            )));
        }
        if m > 0 {
            table.insert((fin, d), m);
        }
    }

    let mut out = WeightedCount::new();
    for ((w, d), m) in table {
        out.add(w, d, m as u64);
    }
    Ok(out)
}
