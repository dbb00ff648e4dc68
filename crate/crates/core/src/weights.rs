//! Finite weights of B2 (and of A1 embedded along the long root), stored
//! exactly as doubled coordinates in the epsilon basis.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

/// Exact rational scalar used for conformal weights.
pub type Rational = num_rational::Ratio<i64>;

/// A weight e1*eps1 + e2*eps2 with the coordinates stored doubled, so that
/// spinor weights (half-integral coordinates) stay exact. The bilinear form
/// is the dot product in the epsilon basis, normalized so long roots have
/// square length 2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FiniteWeight {
    /// 2*e1
    pub d1: i64,
    /// 2*e2
    pub d2: i64,
}

impl FiniteWeight {
    pub const ZERO: FiniteWeight = FiniteWeight { d1: 0, d2: 0 };

    pub fn new(d1: i64, d2: i64) -> Self {
        FiniteWeight { d1, d2 }
    }

    /// Weight with integer epsilon coordinates.
    pub fn from_coords(e1: i64, e2: i64) -> Self {
        FiniteWeight { d1: 2 * e1, d2: 2 * e2 }
    }

    pub fn is_zero(&self) -> bool {
        self.d1 == 0 && self.d2 == 0
    }

    pub fn scale(&self, n: i64) -> Self {
        FiniteWeight { d1: self.d1 * n, d2: self.d2 * n }
    }

    /// Four times the bilinear form <self, other>.
    pub fn dot4(&self, other: &FiniteWeight) -> i64 {
        self.d1 * other.d1 + self.d2 * other.d2
    }

    /// <self, alpha^vee> for a root alpha; exact and integral for weights of
    /// the corresponding weight lattice.
    pub fn pair_coroot(&self, alpha: &FiniteWeight) -> i64 {
        let num = 2 * self.dot4(alpha);
        let den = alpha.dot4(alpha);
        debug_assert!(den > 0, "coroot pairing against a zero vector");
        debug_assert_eq!(num % den, 0, "non-integral coroot pairing");
        num / den
    }

    /// Reflection in the hyperplane orthogonal to the root alpha.
    pub fn reflect(&self, alpha: &FiniteWeight) -> Self {
        let m = self.pair_coroot(alpha);
        *self - alpha.scale(m)
    }

    /// The doubled pair [2*e1, 2*e2] used by the serialized table formats.
    pub fn doubled(&self) -> [i64; 2] {
        [self.d1, self.d2]
    }
}

impl Add for FiniteWeight {
    type Output = FiniteWeight;
    fn add(self, rhs: FiniteWeight) -> FiniteWeight {
        FiniteWeight { d1: self.d1 + rhs.d1, d2: self.d2 + rhs.d2 }
    }
}

impl Sub for FiniteWeight {
    type Output = FiniteWeight;
    fn sub(self, rhs: FiniteWeight) -> FiniteWeight {
        FiniteWeight { d1: self.d1 - rhs.d1, d2: self.d2 - rhs.d2 }
    }
}

impl Neg for FiniteWeight {
    type Output = FiniteWeight;
    fn neg(self) -> FiniteWeight {
        FiniteWeight { d1: -self.d1, d2: -self.d2 }
    }
}

/// The eight elements of the finite Weyl group of B2 (signed coordinate
/// permutations), as maps on weights. Used for symmetry checks of
/// multiplicity tables.
pub fn b2_weyl_orbit(w: &FiniteWeight) -> Vec<FiniteWeight> {
    let mut out = Vec::with_capacity(8);
    for &(swap, s1, s2) in &[
        (false, 1, 1),
        (false, 1, -1),
        (false, -1, 1),
        (false, -1, -1),
        (true, 1, 1),
        (true, 1, -1),
        (true, -1, 1),
        (true, -1, -1),
    ] {
        let (a, b) = if swap { (w.d2, w.d1) } else { (w.d1, w.d2) };
        out.push(FiniteWeight::new(s1 * a, s2 * b));
    }
    out
}
