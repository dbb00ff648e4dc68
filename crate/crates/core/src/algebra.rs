//! Root-system data for B2 and A1: the three-element color set of the
//! degree-one subalgebra, the ordered part alphabet, and the lowering
//! actions used to close relation sets.

use crate::weights::FiniteWeight;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Colors of the degree-one root vectors, written 2bar, 0, 2. The total
/// order TwoBar < Zero < Two is the order of the parts within a fixed
/// degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Color {
    TwoBar,
    Zero,
    Two,
}

pub const COLORS: [Color; 3] = [Color::TwoBar, Color::Zero, Color::Two];

impl Color {
    /// Index into (c, b, a) exponent triples: TwoBar -> 0, Zero -> 1, Two -> 2.
    pub fn index(self) -> usize {
        match self {
            Color::TwoBar => 0,
            Color::Zero => 1,
            Color::Two => 2,
        }
    }

    pub fn from_index(i: usize) -> Color {
        COLORS[i]
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::TwoBar => write!(f, "2b"),
            Color::Zero => write!(f, "0"),
            Color::Two => write!(f, "2"),
        }
    }
}

/// The root attached to a color: 2bar = eps1-eps2, 0 = eps1, 2 = eps1+eps2.
pub fn color_weight(c: Color) -> FiniteWeight {
    match c {
        Color::TwoBar => FiniteWeight::from_coords(1, -1),
        Color::Zero => FiniteWeight::from_coords(1, 0),
        Color::Two => FiniteWeight::from_coords(1, 1),
    }
}

/// One step of the lowering operator on the 3-dimensional module spanned by
/// the colors: Two -> Zero -> TwoBar -> (none). Coefficients are fixed to 1;
/// any nonzero choice differs from the true structure constants by a graded
/// automorphism of the polynomial ring, so dimension outputs are unchanged.
pub fn lower(c: Color) -> Option<Color> {
    match c {
        Color::Two => Some(Color::Zero),
        Color::Zero => Some(Color::TwoBar),
        Color::TwoBar => None,
    }
}

/// Raising companion of [`lower`]: TwoBar -> Zero -> Two -> (none).
pub fn raise(c: Color) -> Option<Color> {
    match c {
        Color::TwoBar => Some(Color::Zero),
        Color::Zero => Some(Color::Two),
        Color::Two => None,
    }
}

/// A part x_color(-depth) with depth >= 1. Parts are ordered with deeper
/// parts first: (gamma, j) < (gamma', j') iff j > j', or j = j' and
/// gamma < gamma'.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Part {
    pub depth: u32,
    pub color: Color,
}

impl Part {
    pub fn new(color: Color, depth: u32) -> Self {
        debug_assert!(depth >= 1);
        Part { depth, color }
    }
}

impl Ord for Part {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .depth
            .cmp(&self.depth)
            .then_with(|| self.color.cmp(&other.color))
    }
}

impl PartialOrd for Part {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}(-{})", self.color, self.depth)
    }
}

/// Standard basis symbols of sl2. The index order F < H < E mirrors the
/// color order and is used for the A1 part alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Sl2Symbol {
    F,
    H,
    E,
}

impl Sl2Symbol {
    pub fn index(self) -> usize {
        match self {
            Sl2Symbol::F => 0,
            Sl2Symbol::H => 1,
            Sl2Symbol::E => 2,
        }
    }

    pub fn from_index(i: usize) -> Sl2Symbol {
        [Sl2Symbol::F, Sl2Symbol::H, Sl2Symbol::E][i]
    }
}

impl fmt::Display for Sl2Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl2Symbol::F => write!(f, "f"),
            Sl2Symbol::H => write!(f, "h"),
            Sl2Symbol::E => write!(f, "e"),
        }
    }
}

/// ad f on the standard basis, with \[e,f\] = h, \[h,e\] = 2e, \[h,f\] = -2f:
/// E -> (-1)H, H -> 2F, F -> (none).
pub fn sl2_lower(s: Sl2Symbol) -> Option<(i64, Sl2Symbol)> {
    match s {
        Sl2Symbol::E => Some((-1, Sl2Symbol::H)),
        Sl2Symbol::H => Some((2, Sl2Symbol::F)),
        Sl2Symbol::F => None,
    }
}

/// ad e on the standard basis: F -> H, H -> (-2)E, E -> (none).
pub fn sl2_raise(s: Sl2Symbol) -> Option<(i64, Sl2Symbol)> {
    match s {
        Sl2Symbol::F => Some((1, Sl2Symbol::H)),
        Sl2Symbol::H => Some((-2, Sl2Symbol::E)),
        Sl2Symbol::E => None,
    }
}

/// h-eigenvalue contribution of an A1 symbol, as the finite weight of the
/// corresponding root vector with the long root embedded as eps1+eps2.
pub fn sl2_symbol_weight(s: Sl2Symbol) -> FiniteWeight {
    match s {
        Sl2Symbol::F => FiniteWeight::from_coords(-1, -1),
        Sl2Symbol::H => FiniteWeight::ZERO,
        Sl2Symbol::E => FiniteWeight::from_coords(1, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_weights() {
        assert_eq!(color_weight(Color::TwoBar), FiniteWeight::from_coords(1, -1));
        assert_eq!(color_weight(Color::Zero), FiniteWeight::from_coords(1, 0));
        assert_eq!(color_weight(Color::Two), FiniteWeight::from_coords(1, 1));
    }

    #[test]
    fn lowering_string_has_length_three() {
        for c in COLORS {
            let mut cur = Some(c);
            for _ in 0..3 {
                cur = cur.and_then(lower);
            }
            assert_eq!(cur, None);
        }
        assert_eq!(lower(Color::Two), Some(Color::Zero));
        assert_eq!(lower(Color::Zero), Some(Color::TwoBar));
        assert_eq!(lower(Color::TwoBar), None);
    }

    #[test]
    fn lowering_drops_weight_by_eps2() {
        let eps2 = FiniteWeight::from_coords(0, 1);
        for c in COLORS {
            if let Some(l) = lower(c) {
                assert_eq!(color_weight(l), color_weight(c) - eps2);
            }
        }
    }

    #[test]
    fn sl2_actions() {
        assert_eq!(sl2_lower(Sl2Symbol::E), Some((-1, Sl2Symbol::H)));
        assert_eq!(sl2_lower(Sl2Symbol::H), Some((2, Sl2Symbol::F)));
        assert_eq!(sl2_lower(Sl2Symbol::F), None);
        assert_eq!(sl2_raise(Sl2Symbol::F), Some((1, Sl2Symbol::H)));
        assert_eq!(sl2_raise(Sl2Symbol::H), Some((-2, Sl2Symbol::E)));
        assert_eq!(sl2_raise(Sl2Symbol::E), None);
    }

    #[test]
    fn part_order_is_depth_major() {
        // deeper parts come first, colors break ties
        let p = |c, j| Part::new(c, j);
        assert!(p(Color::Two, 2) < p(Color::TwoBar, 1));
        assert!(p(Color::TwoBar, 1) < p(Color::Zero, 1));
        assert!(p(Color::Zero, 1) < p(Color::Two, 1));
        let mut v = vec![p(Color::Two, 1), p(Color::TwoBar, 3), p(Color::Zero, 1)];
        v.sort();
        assert_eq!(v, vec![p(Color::TwoBar, 3), p(Color::Zero, 1), p(Color::Two, 1)]);
    }
}
