//! Graded polynomial ring over the B2 or A1 part alphabet: commutative
//! monomials, exact-rational polynomials, and the lowering/raising
//! derivations.

use crate::algebra::{color_weight, sl2_symbol_weight, Color, Sl2Symbol};
use crate::partitions::ColoredPartition;
use crate::weights::FiniteWeight;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Which part alphabet the ring is built on. Both have three symbols per
/// depth; symbol index 0, 1, 2 means (2bar, 0, 2) for B2 and (f, h, e)
/// for A1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum AlphabetKind {
    B2,
    A1,
}

impl AlphabetKind {
    pub fn symbol_weight(&self, sym: u8) -> FiniteWeight {
        match self {
            AlphabetKind::B2 => color_weight(Color::from_index(sym as usize)),
            AlphabetKind::A1 => sl2_symbol_weight(Sl2Symbol::from_index(sym as usize)),
        }
    }

    /// One lowering step on a symbol, with its coefficient.
    pub fn lower(&self, sym: u8) -> Option<(i64, u8)> {
        match self {
            AlphabetKind::B2 => match sym {
                2 => Some((1, 1)),
                1 => Some((1, 0)),
                _ => None,
            },
            AlphabetKind::A1 => match sym {
                2 => Some((-1, 1)),
                1 => Some((2, 0)),
                _ => None,
            },
        }
    }

    /// One raising step on a symbol, with its coefficient.
    pub fn raise(&self, sym: u8) -> Option<(i64, u8)> {
        match self {
            AlphabetKind::B2 => match sym {
                0 => Some((1, 1)),
                1 => Some((1, 2)),
                _ => None,
            },
            AlphabetKind::A1 => match sym {
                0 => Some((1, 1)),
                1 => Some((-2, 2)),
                _ => None,
            },
        }
    }

    pub fn var_name(&self, sym: u8, depth: u32) -> String {
        match self {
            AlphabetKind::B2 => {
                let c = ["x2b", "x0", "x2"][sym as usize];
                format!("{c}(-{depth})")
            }
            AlphabetKind::A1 => {
                let c = ["f", "h", "e"][sym as usize];
                format!("{c}(-{depth})")
            }
        }
    }
}

/// The ring spec: alphabet plus the depth grading (a variable at depth j has
/// degree j).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RingSpec {
    pub alphabet: AlphabetKind,
}

impl RingSpec {
    pub fn b2() -> Self {
        RingSpec { alphabet: AlphabetKind::B2 }
    }

    pub fn a1() -> Self {
        RingSpec { alphabet: AlphabetKind::A1 }
    }
}

/// A commutative monomial: exponents over variables (depth, symbol), kept
/// sorted by (depth, symbol) with no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(Vec<(u32, u8, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn new<I: IntoIterator<Item = (u32, u8, u32)>>(vars: I) -> Self {
        let mut m: BTreeMap<(u32, u8), u32> = BTreeMap::new();
        for (depth, sym, exp) in vars {
            debug_assert!(depth >= 1 && sym < 3);
            if exp > 0 {
                *m.entry((depth, sym)).or_insert(0) += exp;
            }
        }
        Mono(m.into_iter().map(|((d, s), e)| (d, s, e)).collect())
    }

    pub fn from_partition(pi: &ColoredPartition) -> Self {
        Mono::new(
            pi.exponents()
                .iter()
                .flat_map(|(&d, t)| (0..3u8).map(move |s| (d, s, t[s as usize]))),
        )
    }

    /// Reinterpret as a colored partition (same three-symbol shape).
    pub fn to_partition(&self) -> ColoredPartition {
        let mut per_depth: BTreeMap<u32, [u32; 3]> = BTreeMap::new();
        for &(d, s, e) in &self.0 {
            per_depth.entry(d).or_insert([0, 0, 0])[s as usize] += e;
        }
        ColoredPartition::from_exponents(per_depth)
    }

    pub fn vars(&self) -> &[(u32, u8, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(d, _, e)| d * e).sum()
    }

    pub fn weight(&self, alphabet: AlphabetKind) -> FiniteWeight {
        let mut w = FiniteWeight::ZERO;
        for &(_, s, e) in &self.0 {
            w = w + alphabet.symbol_weight(s).scale(e as i64);
        }
        w
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// True iff `other` divides this monomial componentwise.
    pub fn divisible_by(&self, other: &Mono) -> bool {
        other.0.iter().all(|&(d, s, e)| {
            self.0
                .iter()
                .find(|&&(d2, s2, _)| d2 == d && s2 == s)
                .is_some_and(|&(_, _, e2)| e2 >= e)
        })
    }

    /// Multiply one variable in, decrementing another out; used by the
    /// derivations. Returns `None` if the outgoing variable is absent.
    fn replace_var(&self, depth: u32, sym_out: u8, sym_in: u8) -> Option<Mono> {
        if !self.0.iter().any(|&(d, s, e)| d == depth && s == sym_out && e > 0) {
            return None;
        }
        let mut vars: Vec<(u32, u8, u32)> = Vec::with_capacity(self.0.len() + 1);
        for &(d, s, e) in &self.0 {
            if d == depth && s == sym_out {
                vars.push((d, s, e - 1));
            } else {
                vars.push((d, s, e));
            }
        }
        vars.push((depth, sym_in, 1));
        Some(Mono::new(vars))
    }

    /// Parts in ascending part order (deepest first, low symbols first
    /// within a depth), as (depth, symbol) with repetition.
    fn part_stream(&self) -> impl Iterator<Item = (u32, u8)> + '_ {
        // vars are sorted by (depth, sym) ascending; walk depth groups from
        // the back, forward within each group
        let mut order: Vec<usize> = (0..self.0.len()).collect();
        order.sort_by(|&i, &j| {
            let (di, si, _) = self.0[i];
            let (dj, sj, _) = self.0[j];
            dj.cmp(&di).then(si.cmp(&sj))
        });
        order.into_iter().flat_map(move |i| {
            let (d, s, e) = self.0[i];
            std::iter::repeat_n((d, s), e as usize)
        })
    }

    /// The monomial order used for pivot selection: total degree first, then
    /// lexicographic comparison of the sorted part streams, so products
    /// concentrated at deeper parts are smaller.
    pub fn slice_cmp(&self, other: &Mono) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.part_stream();
            let mut b = other.part_stream();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(_), None) => return Ordering::Greater,
                    (Some((da, sa)), Some((db, sb))) => {
                        // deeper part is smaller; symbols ascend within a depth
                        let c = db.cmp(&da).then(sa.cmp(&sb));
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
            }
        })
    }

    pub fn display(&self, alphabet: AlphabetKind) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts: Vec<_> = self.0.clone();
        parts.sort_by(|a, b| (b.0, a.1).cmp(&(a.0, b.1)));
        parts
            .iter()
            .map(|&(d, s, e)| {
                let v = alphabet.var_name(s, d);
                if e > 1 {
                    format!("{v}^{e}")
                } else {
                    v
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// A homogeneous polynomial with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct GradedPolynomial {
    terms: BTreeMap<Mono, BigRational>,
}

impl GradedPolynomial {
    pub fn zero() -> Self {
        GradedPolynomial::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, BigRational)>>(iter: I) -> Self {
        let mut terms: BTreeMap<Mono, BigRational> = BTreeMap::new();
        for (m, c) in iter {
            if c.is_zero() {
                continue;
            }
            *terms.entry(m).or_insert_with(BigRational::zero) += c;
        }
        terms.retain(|_, v| !v.is_zero());
        let p = GradedPolynomial { terms };
        debug_assert!(p.check_homogeneous());
        p
    }

    pub fn monomial(m: Mono) -> Self {
        GradedPolynomial::from_terms([(m, BigRational::one())])
    }

    fn check_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Mono, BigRational> {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    /// Common finite weight of the terms, if the polynomial is
    /// weight-homogeneous.
    pub fn weight(&self, alphabet: AlphabetKind) -> Option<FiniteWeight> {
        let mut it = self.terms.keys().map(|m| m.weight(alphabet));
        let w0 = it.next()?;
        it.all(|w| w == w0).then_some(w0)
    }

    pub fn mul_mono(&self, m: &Mono) -> GradedPolynomial {
        GradedPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &GradedPolynomial) -> GradedPolynomial {
        GradedPolynomial::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn scale(&self, c: &BigRational) -> GradedPolynomial {
        if c.is_zero() {
            return GradedPolynomial::zero();
        }
        GradedPolynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// The derivation extending the one-step lowering (or raising) of the
    /// alphabet to products.
    pub fn derive(&self, alphabet: AlphabetKind, raising: bool) -> GradedPolynomial {
        let mut out: Vec<(Mono, BigRational)> = Vec::new();
        for (m, c) in &self.terms {
            for &(depth, sym, exp) in m.vars() {
                let step = if raising { alphabet.raise(sym) } else { alphabet.lower(sym) };
                if let Some((coef, sym_in)) = step {
                    let nm = m
                        .replace_var(depth, sym, sym_in)
                        .expect("variable present by construction");
                    out.push((nm, c * BigRational::from(BigInt::from(coef * exp as i64))));
                }
            }
        }
        GradedPolynomial::from_terms(out)
    }

    /// The order-smallest monomial (the leading term of the slice order).
    pub fn leading_mono(&self) -> Option<&Mono> {
        self.terms.keys().min_by(|a, b| a.slice_cmp(b))
    }

    /// Rescaled so the leading coefficient is 1.
    pub fn normalized(&self) -> GradedPolynomial {
        match self.leading_mono() {
            None => GradedPolynomial::zero(),
            Some(lm) => {
                let c = self.terms[lm].clone();
                self.scale(&c.recip())
            }
        }
    }

    /// Integer row content: coefficients with denominators cleared and the
    /// common gcd divided out, paired with their monomials.
    pub fn integer_terms(&self) -> Vec<(Mono, BigInt)> {
        if self.terms.is_empty() {
            return Vec::new();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = num_integer::lcm(lcm, c.denom().clone());
        }
        let mut rows: Vec<(Mono, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&lcm / c.denom())))
            .collect();
        let mut g = BigInt::zero();
        for (_, v) in &rows {
            g = num_integer::gcd(g, v.abs());
        }
        if !g.is_zero() && !g.is_one() {
            for (_, v) in &mut rows {
                *v /= &g;
            }
        }
        rows
    }

    pub fn display(&self, alphabet: AlphabetKind) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut monos: Vec<_> = self.terms.keys().collect();
        monos.sort_by(|a, b| a.slice_cmp(b));
        monos
            .iter()
            .map(|m| format!("{}*{}", self.terms[*m], m.display(alphabet)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Serializer for generator dumps: a polynomial with its degree and integer
/// num/den coefficient pairs per monomial.
pub struct PolyDump<'a> {
    pub poly: &'a GradedPolynomial,
    pub alphabet: AlphabetKind,
}

impl Serialize for PolyDump<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        #[derive(Serialize)]
        struct Term {
            monomial: BTreeMap<String, u32>,
            num: i64,
            den: i64,
        }
        #[derive(Serialize)]
        struct Repr {
            degree: u32,
            terms: Vec<Term>,
        }
        let mut terms = Vec::new();
        let mut monos: Vec<_> = self.poly.terms().keys().collect();
        monos.sort_by(|a, b| a.slice_cmp(b));
        for m in monos {
            let c = &self.poly.terms()[m];
            let num = i64::try_from(c.numer()).map_err(|_| S::Error::custom("numerator overflow"))?;
            let den = i64::try_from(c.denom()).map_err(|_| S::Error::custom("denominator overflow"))?;
            let monomial = m
                .vars()
                .iter()
                .map(|&(d, sym, e)| (self.alphabet.var_name(sym, d), e))
                .collect();
            terms.push(Term { monomial, num, den });
        }
        Repr { degree: self.poly.degree().unwrap_or(0), terms }.serialize(s)
    }
}

/// Serialize a full generator list in dump format.
pub struct GeneratorDump<'a> {
    pub generators: &'a [GradedPolynomial],
    pub alphabet: AlphabetKind,
}

impl Serialize for GeneratorDump<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.generators.len()))?;
        for g in self.generators {
            seq.serialize_element(&PolyDump { poly: g, alphabet: self.alphabet })?;
        }
        seq.end()
    }
}

/// All monomials of a given total degree, ascending in the slice order.
pub fn monomials_of_degree(n: u32) -> Vec<Mono> {
    let mut out: Vec<Mono> = crate::partitions::all_of_degree(n)
        .iter()
        .map(Mono::from_partition)
        .collect();
    out.sort_by(|a, b| a.slice_cmp(b));
    out
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(AlphabetKind::B2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(vars: &[(u32, u8, u32)]) -> Mono {
        Mono::new(vars.iter().copied())
    }

    #[test]
    fn slice_order_on_degree_two() {
        // depth-2 singletons precede all depth-1 pairs
        let order = monomials_of_degree(2);
        let names: Vec<String> = order.iter().map(|m| m.display(AlphabetKind::B2)).collect();
        assert_eq!(
            names,
            vec![
                "x2b(-2)",
                "x0(-2)",
                "x2(-2)",
                "x2b(-1)^2",
                "x2b(-1) x0(-1)",
                "x2b(-1) x2(-1)",
                "x0(-1)^2",
                "x0(-1) x2(-1)",
                "x2(-1)^2",
            ]
        );
    }

    #[test]
    fn derivation_is_leibniz_on_squares() {
        // lowering of x2(-1)^2 walks the expected 5-step string
        let p = GradedPolynomial::monomial(mono(&[(1, 2, 2)]));
        let alphabet = AlphabetKind::B2;
        let d1 = p.derive(alphabet, false);
        assert_eq!(d1.terms().len(), 1); // 2 x0 x2
        let d2 = d1.derive(alphabet, false);
        assert_eq!(d2.terms().len(), 2); // 2 x2b x2 + 2 x0^2
        let d3 = d2.derive(alphabet, false);
        assert_eq!(d3.terms().len(), 1); // 6 x2b x0
        let d4 = d3.derive(alphabet, false);
        assert_eq!(d4.terms().len(), 1); // 6 x2b^2
        assert!(d4.derive(alphabet, false).is_zero());
    }

    #[test]
    fn weight_tracks_derivation() {
        let alphabet = AlphabetKind::B2;
        let p = GradedPolynomial::monomial(mono(&[(1, 2, 2)]));
        let w0 = p.weight(alphabet).unwrap();
        let w1 = p.derive(alphabet, false).weight(alphabet).unwrap();
        assert_eq!(w1, w0 - FiniteWeight::from_coords(0, 1));
    }

    #[test]
    fn integer_terms_clear_denominators() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let p = GradedPolynomial::from_terms([
            (mono(&[(1, 0, 1)]), half),
            (mono(&[(1, 1, 1)]), third),
        ]);
        let rows = p.integer_terms();
        let coeffs: Vec<i64> = rows.iter().map(|(_, c)| i64::try_from(c).unwrap()).collect();
        assert_eq!(coeffs, vec![3, 2]);
    }
}
