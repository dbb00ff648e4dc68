//! Defining ideals of the level-k presentations inside a graded polynomial
//! ring, and exact graded/weighted quotient dimensions by per-degree linear
//! algebra (no Groebner machinery is needed: the ideals are homogeneous with
//! explicitly enumerable generators).

mod linalg;
mod poly;

pub use linalg::{is_prime_u64, SpanBasis};
pub use poly::{monomials_of_degree, AlphabetKind, GeneratorDump, GradedPolynomial, Mono, PolyDump, RingSpec};

use crate::error::{Error, Result};
use crate::partitions::{DominantWeight, WeightedCount};
use crate::weights::FiniteWeight;
use linalg::{rank_int, rank_mod, rref_rational, IntRow, ModRow, RatRow};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, HashMap, VecDeque};

/// Two distinct primes above 2^30, the default modular arithmetic basis.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_647, 1_073_741_827];

/// Exact arithmetic backend for rank computations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ArithmeticMode {
    Rational,
    Modular(Vec<u64>),
    /// Rational and modular, cross-checked cell by cell.
    Both(Vec<u64>),
}

impl ArithmeticMode {
    pub fn modular_default() -> Self {
        ArithmeticMode::Modular(DEFAULT_PRIMES.to_vec())
    }

    pub fn both_default() -> Self {
        ArithmeticMode::Both(DEFAULT_PRIMES.to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        let primes = match self {
            ArithmeticMode::Rational => return Ok(()),
            ArithmeticMode::Modular(p) | ArithmeticMode::Both(p) => p,
        };
        if primes.len() < 2 {
            return Err(Error::InvalidArgument(
                "modular mode requires at least 2 primes".into(),
            ));
        }
        let mut seen = primes.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != primes.len() {
            return Err(Error::InvalidArgument("modular primes must be distinct".into()));
        }
        for &p in primes {
            if p <= (1 << 30) {
                return Err(Error::InvalidArgument(format!("prime {p} is not above 2^30")));
            }
            if !is_prime_u64(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
        }
        Ok(())
    }
}

/// A truncated homogeneous ideal: generators of degree <= degree_cut, closed
/// under the declared lowering/raising action.
#[derive(Clone, Debug)]
pub struct IdealTruncation {
    pub ring: RingSpec,
    pub generators: Vec<GradedPolynomial>,
    pub degree_cut: u32,
}

impl IdealTruncation {
    pub fn new(ring: RingSpec, generators: Vec<GradedPolynomial>, degree_cut: u32) -> Result<Self> {
        for g in &generators {
            let d = g
                .degree()
                .ok_or_else(|| Error::InvalidArgument("zero generator".into()))?;
            if d > degree_cut {
                return Err(Error::InvalidArgument(format!(
                    "generator of degree {d} above the cut {degree_cut}"
                )));
            }
            if g.weight(ring.alphabet).is_none() {
                return Err(Error::Internal(
                    "generator is not weight-homogeneous".into(),
                ));
            }
        }
        Ok(IdealTruncation { ring, generators, degree_cut })
    }

    /// Generators whose derivation images escape the rational span of the
    /// generator set. The closed families contribute nothing here; the only
    /// admissible defect is the standalone initial-condition monomial,
    /// which is part of the presentation without its orbit.
    pub fn closure_defects(&self) -> Vec<GradedPolynomial> {
        let mut cols: HashMap<Mono, u32> = HashMap::new();
        let mut span = SpanBasis::new();
        for g in &self.generators {
            span.insert(poly_to_rat_row(g, &mut cols));
        }
        let mut out = Vec::new();
        for g in &self.generators {
            for raising in [false, true] {
                let d = g.derive(self.ring.alphabet, raising);
                if !d.is_zero() && !span.contains(poly_to_rat_row(&d, &mut cols)) {
                    out.push(g.clone());
                    break;
                }
            }
        }
        out
    }

    /// Re-closure is a no-op on the closed families.
    pub fn is_closed_under_action(&self) -> bool {
        self.closure_defects().is_empty()
    }

    /// Content hash of the generator set, the cache key ingredient.
    pub fn content_hash(&self) -> String {
        let dump = GeneratorDump { generators: &self.generators, alphabet: self.ring.alphabet };
        let json = serde_json::to_string(&dump).unwrap_or_default();
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        h.update([self.degree_cut as u8]);
        hex::encode(h.finalize())
    }
}

fn poly_to_rat_row(p: &GradedPolynomial, cols: &mut HashMap<Mono, u32>) -> RatRow {
    let mut row: RatRow = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let next = cols.len() as u32;
            let ix = *cols.entry(m.clone()).or_insert(next);
            (ix, c.clone())
        })
        .collect();
    row.sort_by_key(|&(c, _)| c);
    row
}

/// The degree-n coefficient of the (k+1)-st power of the degree-one current
/// attached to the top symbol: the sum over multisets {j_1..j_{k+1}},
/// j_i <= -1, sum = n, of the corresponding monomial with its ordered-tuple
/// multiplicity.
pub fn theta_power_coefficient(k: u32, n: i64, _alphabet: AlphabetKind) -> Result<GradedPolynomial> {
    if n > -(k as i64) - 1 {
        return Err(Error::InvalidArgument(format!(
            "coefficient degree {n} must be <= -(k+1) = {}",
            -(k as i64) - 1
        )));
    }
    let total = (-n) as u32;
    let count = k + 1;
    let mut terms: Vec<(Mono, BigRational)> = Vec::new();
    // nondecreasing depth tuples: multiset enumeration
    fn rec(
        min_depth: u32,
        slots: u32,
        rem: u32,
        current: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if slots == 0 {
            if rem == 0 {
                out.push(current.clone());
            }
            return;
        }
        // each remaining slot needs at least min_depth
        let mut d = min_depth;
        while d * slots <= rem {
            current.push(d);
            rec(d, slots - 1, rem - d, current, out);
            current.pop();
            d += 1;
        }
    }
    let mut multisets = Vec::new();
    rec(1, count, total, &mut Vec::new(), &mut multisets);
    for depths in multisets {
        let mut mult: BTreeMap<u32, u32> = BTreeMap::new();
        for d in &depths {
            *mult.entry(*d).or_insert(0) += 1;
        }
        // ordered-tuple count = (k+1)! / prod mult!
        let mut coef = BigInt::one();
        for i in 1..=count {
            coef *= BigInt::from(i);
        }
        for m in mult.values() {
            for i in 1..=*m {
                coef /= BigInt::from(i);
            }
        }
        let mono = Mono::new(mult.iter().map(|(&d, &e)| (d, 2u8, e)));
        terms.push((mono, BigRational::from(coef)));
    }
    Ok(GradedPolynomial::from_terms(terms))
}

/// Closure of a polynomial set under the derivation action: iterated
/// lowering chains, with raising images folded back in to a fixed point.
/// Everything stays within the rational span that the listed polynomials
/// generate together with their derivation images.
pub fn lowering_closure(
    polys: &[GradedPolynomial],
    alphabet: AlphabetKind,
    max_steps: u32,
) -> Result<Vec<GradedPolynomial>> {
    let mut cols: HashMap<Mono, u32> = HashMap::new();
    let mut span = SpanBasis::new();
    let mut out: Vec<GradedPolynomial> = Vec::new();
    let mut queue: VecDeque<(GradedPolynomial, u32)> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| (p.clone(), 0u32))
        .collect();
    let budget = (polys.len().max(1) as u32) * (2 * max_steps + 4);
    while let Some((p, steps)) = queue.pop_front() {
        if steps > max_steps {
            return Err(Error::Internal(format!(
                "derivation chain did not terminate within {max_steps} steps"
            )));
        }
        if p.is_zero() || !span.insert(poly_to_rat_row(&p, &mut cols)) {
            continue;
        }
        out.push(p.clone());
        if out.len() as u32 > budget {
            return Err(Error::Internal("closure exceeded its size budget".into()));
        }
        queue.push_back((p.derive(alphabet, false), steps + 1));
        queue.push_back((p.derive(alphabet, true), steps + 1));
    }
    Ok(out)
}

fn power_monomial(depth: u32, sym: u8, exp: u32) -> GradedPolynomial {
    GradedPolynomial::monomial(Mono::new([(depth, sym, exp)]))
}

fn finish_generators(
    ring: RingSpec,
    gens: Vec<GradedPolynomial>,
    degree_cut: u32,
) -> Result<IdealTruncation> {
    let mut normalized: Vec<GradedPolynomial> = gens
        .into_iter()
        .filter(|g| !g.is_zero() && g.degree().unwrap_or(0) <= degree_cut)
        .map(|g| g.normalized())
        .collect();
    normalized.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.cmp(b))
    });
    normalized.dedup();
    IdealTruncation::new(ring, normalized, degree_cut)
}

/// Generators of the defining ideal of the level-k subspace presentation:
/// the closed families of the theta-power coefficients down to degree
/// `degree_cut`, the single monomial x2(-1)^(k0+1), and the closed family of
/// x2(-1)^(k0+k2+1).
pub fn ideal_generators_b2(lambda: &DominantWeight, degree_cut: u32) -> Result<IdealTruncation> {
    let k = lambda.level();
    if k == 0 || degree_cut < 1 {
        return Err(Error::InvalidArgument("need level >= 1 and cut >= 1".into()));
    }
    let ring = RingSpec::b2();
    let max_steps = 2 * k + 4;
    let mut gens: Vec<GradedPolynomial> = Vec::new();
    for deg in (k + 1)..=degree_cut {
        let theta = theta_power_coefficient(k, -(deg as i64), ring.alphabet)?;
        gens.extend(lowering_closure(&[theta], ring.alphabet, max_steps)?);
    }
    if lambda.k0 < degree_cut {
        gens.push(power_monomial(1, 2, lambda.k0 + 1));
    }
    if lambda.k0 + lambda.k2 < degree_cut {
        let top = power_monomial(1, 2, lambda.k0 + lambda.k2 + 1);
        gens.extend(lowering_closure(&[top], ring.alphabet, max_steps)?);
    }
    finish_generators(ring, gens, degree_cut)
}

/// Generators of the vacuum-module presentation ideal for A1: the closed
/// families of the e-power coefficients down to degree `degree_cut`.
pub fn ideal_generators_a1(k: u32, degree_cut: u32) -> Result<IdealTruncation> {
    if k == 0 || degree_cut < 1 {
        return Err(Error::InvalidArgument("need level >= 1 and cut >= 1".into()));
    }
    let ring = RingSpec::a1();
    let max_steps = 2 * k + 4;
    let mut gens: Vec<GradedPolynomial> = Vec::new();
    for deg in (k + 1)..=degree_cut {
        let theta = theta_power_coefficient(k, -(deg as i64), ring.alphabet)?;
        gens.extend(lowering_closure(&[theta], ring.alphabet, max_steps)?);
    }
    finish_generators(ring, gens, degree_cut)
}

/// Size and rank of one (degree, weight) slice of the elimination.
#[derive(Clone, Debug, Serialize)]
pub struct SliceStat {
    pub degree: u32,
    pub weight: [i64; 2],
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

/// Weighted quotient dimensions plus per-slice statistics.
#[derive(Clone, Debug)]
pub struct QuotientDims {
    /// dim of each (relative weight, degree) piece of P/I.
    pub per_weight: WeightedCount,
    pub n_max: u32,
    pub stats: Vec<SliceStat>,
}

impl QuotientDims {
    /// Per-degree totals for every degree up to the cut, zeros included.
    pub fn totals(&self) -> BTreeMap<i64, u64> {
        let mut out: BTreeMap<i64, u64> = (0..=self.n_max as i64).map(|d| (d, 0)).collect();
        for (d, m) in self.per_weight.totals() {
            out.insert(d, m);
        }
        out
    }
}

fn rational_rows_to_int(rows: &[RatRow]) -> Vec<IntRow> {
    rows.iter()
        .map(|r| {
            let mut lcm = BigInt::one();
            for (_, c) in r {
                lcm = num_integer::lcm(lcm, c.denom().clone());
            }
            let mut row: IntRow = r
                .iter()
                .map(|(ix, c)| (*ix, c.numer() * (&lcm / c.denom())))
                .collect();
            let mut g = BigInt::zero();
            for (_, v) in &row {
                g = num_integer::gcd(g, v.abs());
            }
            if !g.is_zero() && !g.is_one() {
                for (_, v) in &mut row {
                    *v /= &g;
                }
            }
            row
        })
        .collect()
}

fn rational_rows_to_mod(rows: &[RatRow], p: u64) -> Result<Vec<ModRow>> {
    let pb = BigInt::from(p);
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|(ix, c)| {
                    let num = ((c.numer() % &pb) + &pb) % &pb;
                    let den = ((c.denom() % &pb) + &pb) % &pb;
                    let den = u64::try_from(den).expect("reduced value fits");
                    if den == 0 {
                        return Err(Error::Internal(format!(
                            "denominator divisible by modulus {p}"
                        )));
                    }
                    let num = u64::try_from(num).expect("reduced value fits");
                    Ok((*ix, linalg::mulmod(num, linalg::invmod(den, p), p)))
                })
                .filter(|e| !matches!(e, Ok((_, 0))))
                .collect()
        })
        .collect()
}

fn slice_rank(rows: &[RatRow], mode: &ArithmeticMode) -> Result<usize> {
    match mode {
        ArithmeticMode::Rational => Ok(rank_int(rational_rows_to_int(rows))),
        ArithmeticMode::Modular(primes) => {
            let mut ranks = Vec::new();
            for &p in primes {
                ranks.push(rank_mod(rational_rows_to_mod(rows, p)?, p));
            }
            if ranks.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::Internal(format!(
                    "modular ranks disagree across primes: {ranks:?}"
                )));
            }
            Ok(ranks[0])
        }
        ArithmeticMode::Both(primes) => {
            let r = rank_int(rational_rows_to_int(rows));
            let m = slice_rank(rows, &ArithmeticMode::Modular(primes.clone()))?;
            if r != m {
                return Err(Error::Internal(format!(
                    "rational rank {r} disagrees with modular rank {m}"
                )));
            }
            Ok(r)
        }
    }
}

/// Build the rows of one (degree, weight) slice: all products m*g landing in
/// the slice, with columns indexed by the slice monomials in ascending
/// order.
fn slice_rows(
    ideal: &IdealTruncation,
    degree: u32,
    weight: FiniteWeight,
    cols: &[Mono],
) -> Vec<RatRow> {
    let alphabet = ideal.ring.alphabet;
    let col_ix: HashMap<&Mono, u32> = cols.iter().zip(0u32..).collect();
    // multiplier monomials grouped by (degree, weight)
    let mut mult_cache: HashMap<u32, BTreeMap<FiniteWeight, Vec<Mono>>> = HashMap::new();
    let mut rows: Vec<RatRow> = Vec::new();
    for g in &ideal.generators {
        let dg = g.degree().expect("generators are nonzero");
        if dg > degree {
            continue;
        }
        let wg = g.weight(alphabet).expect("generators are weight-homogeneous");
        let md = degree - dg;
        let groups = mult_cache.entry(md).or_insert_with(|| {
            let mut m: BTreeMap<FiniteWeight, Vec<Mono>> = BTreeMap::new();
            for mono in monomials_of_degree(md) {
                m.entry(mono.weight(alphabet)).or_default().push(mono);
            }
            m
        });
        let Some(mults) = groups.get(&(weight - wg)) else { continue };
        for m in mults {
            let prod = g.mul_mono(m);
            let mut row: RatRow = prod
                .terms()
                .iter()
                .map(|(mm, c)| (col_ix[mm], c.clone()))
                .collect();
            row.sort_by_key(|&(c, _)| c);
            rows.push(row);
        }
    }
    rows
}

/// For each degree n <= n_max and each relative weight: the dimension of
/// the (weight, n) piece of P/I, by exact elimination. Homogeneity makes the
/// truncation sound: generators of degree above n cannot touch degree n.
pub fn graded_quotient_dims(
    ideal: &IdealTruncation,
    n_max: u32,
    mode: &ArithmeticMode,
    max_cells: Option<u64>,
) -> Result<QuotientDims> {
    if ideal.degree_cut < n_max {
        return Err(Error::InvalidArgument(format!(
            "ideal truncated at {} cannot answer degree {}",
            ideal.degree_cut, n_max
        )));
    }
    mode.validate()?;
    let alphabet = ideal.ring.alphabet;
    let budget = max_cells.unwrap_or(u64::MAX);

    type DegreeSlice = (Vec<(FiniteWeight, u32, u64)>, Vec<SliceStat>);
    let degree_results: Vec<Result<DegreeSlice>> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let monos = monomials_of_degree(n);
            let mut by_weight: BTreeMap<FiniteWeight, Vec<Mono>> = BTreeMap::new();
            for m in monos {
                by_weight.entry(m.weight(alphabet)).or_default().push(m);
            }
            let mut dims = Vec::new();
            let mut stats = Vec::new();
            for (w, cols) in by_weight {
                let rows = slice_rows(ideal, n, w, &cols);
                let cells = rows.len() as u64 * cols.len() as u64;
                if cells > budget {
                    return Err(Error::ResourceLimit {
                        detail: format!(
                            "slice (degree {n}, weight {:?}) needs {cells} cells, budget {budget}",
                            w.doubled()
                        ),
                        partial: WeightedCount::new(),
                    });
                }
                let rank = slice_rank(&rows, mode)?;
                stats.push(SliceStat {
                    degree: n,
                    weight: w.doubled(),
                    rows: rows.len(),
                    cols: cols.len(),
                    rank,
                });
                dims.push((w, n, (cols.len() - rank) as u64));
            }
            Ok((dims, stats))
        })
        .collect();

    let mut per_weight = WeightedCount::new();
    let mut stats = Vec::new();
    for r in degree_results {
        match r {
            Ok((dims, st)) => {
                for (w, n, d) in dims {
                    per_weight.add(w, n as i64, d);
                }
                stats.extend(st);
            }
            Err(Error::ResourceLimit { detail, .. }) => {
                return Err(Error::ResourceLimit { detail, partial: per_weight });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(QuotientDims { per_weight, n_max, stats })
}

/// Reduce a monomial against the reduced echelon form of its slice. Pivots
/// sit on the order-smallest monomials, so the reduction of a pivot is a
/// combination of strictly larger non-pivot monomials; non-pivot monomials
/// reduce to themselves.
pub fn normal_form(mono: &Mono, ideal: &IdealTruncation) -> Result<GradedPolynomial> {
    let n = mono.degree();
    if n > ideal.degree_cut {
        return Err(Error::InvalidArgument(format!(
            "monomial degree {n} above the ideal cut {}",
            ideal.degree_cut
        )));
    }
    let alphabet = ideal.ring.alphabet;
    let w = mono.weight(alphabet);
    let cols: Vec<Mono> = monomials_of_degree(n)
        .into_iter()
        .filter(|m| m.weight(alphabet) == w)
        .collect();
    let rows = slice_rows(ideal, n, w, &cols);
    let rref = rref_rational(rows);
    let my_col = cols.iter().position(|m| m == mono).expect("column present") as u32;
    match rref.iter().find(|(c, _)| *c == my_col) {
        None => Ok(GradedPolynomial::monomial(mono.clone())),
        Some((_, row)) => Ok(GradedPolynomial::from_terms(row.iter().filter_map(
            |(c, v)| {
                if *c == my_col {
                    None
                } else {
                    Some((cols[*c as usize].clone(), -v.clone()))
                }
            },
        ))),
    }
}

/// The pivot monomials of every weight slice at one degree, ascending in the
/// slice order; their complement counts the quotient dimension.
pub fn pivot_monomials(ideal: &IdealTruncation, degree: u32) -> Result<Vec<Mono>> {
    if degree > ideal.degree_cut {
        return Err(Error::InvalidArgument("degree above the ideal cut".into()));
    }
    let alphabet = ideal.ring.alphabet;
    let mut by_weight: BTreeMap<FiniteWeight, Vec<Mono>> = BTreeMap::new();
    for m in monomials_of_degree(degree) {
        by_weight.entry(m.weight(alphabet)).or_default().push(m);
    }
    let mut pivots = Vec::new();
    for (w, cols) in by_weight {
        let rows = slice_rows(ideal, degree, w, &cols);
        for (c, _) in rref_rational(rows) {
            pivots.push(cols[c as usize].clone());
        }
    }
    pivots.sort_by(|a, b| a.slice_cmp(b));
    Ok(pivots)
}
