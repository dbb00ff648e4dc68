//! Colored partitions with difference and initial conditions, leading-term
//! detection, and admissible-monomial enumeration: finite and semi-infinite
//! for B2(1), and the depth-zero variant for A1(1) standard modules.
//!
//! Exponent triples are stored in the order (c, b, a) = multiplicities of
//! the colors 2bar, 0, 2 (resp. f, h, e) at a fixed depth.

use crate::algebra::{color_weight, sl2_symbol_weight, Color, Part, Sl2Symbol};
use crate::error::{Error, Result};
use crate::weights::{FiniteWeight, Rational};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent triple (c, b, a) at one depth.
pub type Triple = [u32; 3];

const ZERO_TRIPLE: Triple = [0, 0, 0];

fn triple_sum(t: &Triple) -> u32 {
    t[0] + t[1] + t[2]
}

/// The four adjacent-depth inequalities between the triple at depth j
/// (`prev`) and the triple at depth j+1 (`cur`), bounded by the level k.
fn dc_ok(prev: &Triple, cur: &Triple, k: u32) -> bool {
    cur[0] + cur[1] + prev[0] <= k
        && cur[1] + cur[2] + prev[0] <= k
        && cur[2] + prev[0] + prev[1] <= k
        && cur[2] + prev[1] + prev[2] <= k
}

/// A dominant integral weight k0*L0 + k1*L1 + k2*L2 of B2(1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DominantWeight {
    pub k0: u32,
    pub k1: u32,
    pub k2: u32,
}

impl DominantWeight {
    pub fn new(k0: u32, k1: u32, k2: u32) -> Self {
        DominantWeight { k0, k1, k2 }
    }

    pub fn level(&self) -> u32 {
        self.k0 + self.k1 + self.k2
    }

    /// Finite part: k1*omega1 + k2*omega2 with omega1 = eps1 and
    /// omega2 = (eps1+eps2)/2.
    pub fn finite_part(&self) -> FiniteWeight {
        FiniteWeight::new(2 * self.k1 as i64 + self.k2 as i64, self.k2 as i64)
    }

    /// All dominant weights of a given level, ordered by (k0, k1, k2).
    pub fn all_of_level(k: u32) -> Vec<DominantWeight> {
        let mut out = Vec::new();
        for k0 in 0..=k {
            for k1 in 0..=(k - k0) {
                out.push(DominantWeight::new(k0, k1, k - k0 - k1));
            }
        }
        out
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k0, self.k1, self.k2)
    }
}

/// A colored partition: finitely many parts x_gamma(-j), j >= 1, recorded as
/// exponent triples per depth. Depths with the zero triple are not stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ColoredPartition {
    exponents: BTreeMap<u32, Triple>,
}

impl ColoredPartition {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_exponents<I: IntoIterator<Item = (u32, Triple)>>(iter: I) -> Self {
        let mut exponents = BTreeMap::new();
        for (depth, t) in iter {
            assert!(depth >= 1, "colored partition depths start at 1");
            if t != ZERO_TRIPLE {
                exponents.insert(depth, t);
            }
        }
        ColoredPartition { exponents }
    }

    pub fn from_parts<I: IntoIterator<Item = Part>>(parts: I) -> Self {
        let mut exponents: BTreeMap<u32, Triple> = BTreeMap::new();
        for p in parts {
            exponents.entry(p.depth).or_insert(ZERO_TRIPLE)[p.color.index()] += 1;
        }
        ColoredPartition { exponents }
    }

    pub fn exponents(&self) -> &BTreeMap<u32, Triple> {
        &self.exponents
    }

    pub fn triple(&self, depth: u32) -> Triple {
        self.exponents.get(&depth).copied().unwrap_or(ZERO_TRIPLE)
    }

    pub fn max_depth(&self) -> u32 {
        self.exponents.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.exponents
            .iter()
            .map(|(j, t)| *j as u64 * triple_sum(t) as u64)
            .sum()
    }

    pub fn part_count(&self) -> u64 {
        self.exponents.values().map(|t| triple_sum(t) as u64).sum()
    }

    /// Parts listed in ascending part order (deepest first).
    pub fn parts(&self) -> Vec<Part> {
        let mut out = Vec::new();
        for (&depth, t) in self.exponents.iter().rev() {
            for (i, &mult) in t.iter().enumerate() {
                for _ in 0..mult {
                    out.push(Part::new(Color::from_index(i), depth));
                }
            }
        }
        out
    }

    /// True iff `other` divides this partition componentwise.
    pub fn divides(&self, other: &ColoredPartition) -> bool {
        other.exponents.iter().all(|(j, t)| {
            let mine = self.triple(*j);
            (0..3).all(|i| t[i] <= mine[i])
        })
    }

    /// Componentwise sum of exponents.
    pub fn concat(&self, other: &ColoredPartition) -> ColoredPartition {
        let mut exponents = self.exponents.clone();
        for (&j, t) in &other.exponents {
            let e = exponents.entry(j).or_insert(ZERO_TRIPLE);
            for i in 0..3 {
                e[i] += t[i];
            }
        }
        ColoredPartition { exponents }
    }
}

impl fmt::Display for ColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&j, t) in self.exponents.iter().rev() {
            for (i, &mult) in t.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "x{}(-{})", Color::from_index(i), j)?;
                if mult > 1 {
                    write!(f, "^{}", mult)?;
                }
            }
        }
        Ok(())
    }
}

// JSON shape: {"exponents": {"1": [c,b,a], "2": [c,b,a]}}
impl Serialize for ColoredPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            exponents: BTreeMap<String, &'a Triple>,
        }
        let exponents = self
            .exponents
            .iter()
            .map(|(j, t)| (j.to_string(), t))
            .collect();
        Repr { exponents }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            exponents: BTreeMap<String, Triple>,
        }
        let r = Repr::deserialize(d)?;
        let mut exponents = BTreeMap::new();
        for (j, t) in r.exponents {
            let depth: u32 = j.parse().map_err(serde::de::Error::custom)?;
            if depth == 0 {
                return Err(serde::de::Error::custom("depth 0 not allowed"));
            }
            if t != ZERO_TRIPLE {
                exponents.insert(depth, t);
            }
        }
        Ok(ColoredPartition { exponents })
    }
}

/// Map from (finite weight, degree) to a nonnegative multiplicity; the
/// common output currency of the enumerators and the character oracle.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightedCount {
    table: BTreeMap<(FiniteWeight, i64), u64>,
}

impl WeightedCount {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, weight: FiniteWeight, degree: i64, mult: u64) {
        if mult > 0 {
            *self.table.entry((weight, degree)).or_insert(0) += mult;
        }
    }

    pub fn get(&self, weight: FiniteWeight, degree: i64) -> u64 {
        self.table.get(&(weight, degree)).copied().unwrap_or(0)
    }

    pub fn table(&self) -> &BTreeMap<(FiniteWeight, i64), u64> {
        &self.table
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Per-degree totals, summing over the weights.
    pub fn totals(&self) -> BTreeMap<i64, u64> {
        let mut out = BTreeMap::new();
        for (&(_, d), &m) in &self.table {
            *out.entry(d).or_insert(0) += m;
        }
        out
    }

    pub fn total_at(&self, degree: i64) -> u64 {
        self.table
            .iter()
            .filter(|((_, d), _)| *d == degree)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn restrict_degrees(&self, max_degree: i64) -> WeightedCount {
        WeightedCount {
            table: self
                .table
                .iter()
                .filter(|((_, d), _)| *d <= max_degree)
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    /// Translate every weight by `shift` (used to move between absolute and
    /// relative weight conventions).
    pub fn shift_weights(&self, shift: FiniteWeight) -> WeightedCount {
        WeightedCount {
            table: self
                .table
                .iter()
                .map(|(&(w, d), &m)| ((w + shift, d), m))
                .collect(),
        }
    }

    /// Entries ordered by degree ascending, then weight in doubled lex order.
    pub fn entries(&self) -> Vec<(FiniteWeight, i64, u64)> {
        let mut v: Vec<_> = self.table.iter().map(|(&(w, d), &m)| (w, d, m)).collect();
        v.sort_by_key(|&(w, d, _)| (d, w));
        v
    }
}

impl Serialize for WeightedCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            weight: [i64; 2],
            degree: i64,
            mult: u64,
        }
        let entries = self.entries();
        let mut seq = s.serialize_seq(Some(entries.len()))?;
        for (w, d, m) in entries {
            seq.serialize_element(&Entry { weight: w.doubled(), degree: d, mult: m })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for WeightedCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Entry {
            weight: [i64; 2],
            degree: i64,
            mult: u64,
        }
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut out = WeightedCount::new();
        for e in entries {
            out.add(FiniteWeight::new(e.weight[0], e.weight[1]), e.degree, e.mult);
        }
        Ok(out)
    }
}

/// True iff the four adjacent-depth inequalities hold at every depth j >= 1.
pub fn satisfies_dc(pi: &ColoredPartition, k: u32) -> bool {
    let max = pi.max_depth();
    for j in 1..=max {
        if !dc_ok(&pi.triple(j), &pi.triple(j + 1), k) {
            return false;
        }
    }
    true
}

/// True iff the depth-1 inequalities a1 <= k0, b1+a1 <= k0+k2 and
/// c1+b1 <= k0+k2 hold.
pub fn satisfies_ic(pi: &ColoredPartition, lambda: &DominantWeight) -> bool {
    let [c1, b1, a1] = pi.triple(1);
    a1 <= lambda.k0 && b1 + a1 <= lambda.k0 + lambda.k2 && c1 + b1 <= lambda.k0 + lambda.k2
}

/// One of the four families of minimal factors witnessing a violated
/// difference condition. The factor spans depths (depth+1, depth) and its
/// designated exponent sum is exactly k+1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LeadingTermFactor {
    pub family: u8,
    pub depth: u32,
    pub factor: ColoredPartition,
}

/// Greedy split of k+1 over component maxima, filling in the listed order.
fn greedy_fill(maxima: &[u32], total: u32) -> Option<Vec<u32>> {
    let mut rem = total;
    let mut out = Vec::with_capacity(maxima.len());
    for &m in maxima {
        let take = m.min(rem);
        out.push(take);
        rem -= take;
    }
    (rem == 0).then_some(out)
}

/// Returns a factor from one of the four leading-term families that divides
/// x(pi), or `None` exactly when pi satisfies the difference conditions.
pub fn find_leading_term_divisor(pi: &ColoredPartition, k: u32) -> Option<LeadingTermFactor> {
    let max = pi.max_depth();
    for j in 1..=max {
        let prev = pi.triple(j);
        let cur = pi.triple(j + 1);
        // (family, designated components as (maxima, positions))
        // positions: (depth, color index) per component, in greedy fill order
        type Family = (u8, Vec<u32>, Vec<(u32, usize)>);
        let families: [Family; 4] = [
            (1, vec![cur[0], cur[1], prev[0]], vec![(j + 1, 0), (j + 1, 1), (j, 0)]),
            (2, vec![cur[1], cur[2], prev[0]], vec![(j + 1, 1), (j + 1, 2), (j, 0)]),
            (3, vec![cur[2], prev[0], prev[1]], vec![(j + 1, 2), (j, 0), (j, 1)]),
            (4, vec![cur[2], prev[1], prev[2]], vec![(j + 1, 2), (j, 1), (j, 2)]),
        ];
        for (family, maxima, positions) in families {
            if maxima.iter().sum::<u32>() > k {
                let fill = greedy_fill(&maxima, k + 1)
                    .expect("sum exceeds k, so k+1 is attainable");
                let mut upper = ZERO_TRIPLE;
                let mut lower = ZERO_TRIPLE;
                for (take, (depth, idx)) in fill.iter().zip(&positions) {
                    if *depth == j + 1 {
                        upper[*idx] += take;
                    } else {
                        lower[*idx] += take;
                    }
                }
                let factor =
                    ColoredPartition::from_exponents([(j + 1, upper), (j, lower)]);
                debug_assert!(pi.divides(&factor));
                return Some(LeadingTermFactor { family, depth: j, factor });
            }
        }
    }
    None
}

/// All colored partitions of the given degree, no conditions, in the
/// deterministic enumeration order (exponent stream from depth 1 upward,
/// colors in c, b, a order).
pub fn all_of_degree(n: u32) -> Vec<ColoredPartition> {
    let mut out = Vec::new();
    let mut stack: Vec<(u32, Triple)> = Vec::new();
    fn rec(depth: u32, rem: u32, stack: &mut Vec<(u32, Triple)>, out: &mut Vec<ColoredPartition>) {
        if rem == 0 {
            out.push(ColoredPartition::from_exponents(stack.iter().copied()));
            return;
        }
        if depth > rem {
            return;
        }
        let cap = rem / depth;
        for c in 0..=cap {
            for b in 0..=(cap - c) {
                for a in 0..=(cap - c - b) {
                    stack.push((depth, [c, b, a]));
                    rec(depth + 1, rem - depth * (c + b + a), stack, out);
                    stack.pop();
                }
            }
        }
    }
    rec(1, n, &mut stack, &mut out);
    out
}

/// Exactly the colored partitions of degree n satisfying the difference
/// conditions for level(lambda) and the initial conditions for lambda,
/// in deterministic order.
pub fn enumerate_admissible(lambda: &DominantWeight, n: u32) -> Vec<ColoredPartition> {
    let k = lambda.level();
    let mut out = Vec::new();
    let mut stack: Vec<(u32, Triple)> = Vec::new();

    fn rec(
        depth: u32,
        rem: u32,
        prev: Triple,
        k: u32,
        lambda: &DominantWeight,
        stack: &mut Vec<(u32, Triple)>,
        out: &mut Vec<ColoredPartition>,
    ) {
        if rem == 0 {
            out.push(ColoredPartition::from_exponents(stack.iter().copied()));
            return;
        }
        if depth > rem {
            return;
        }
        let cap = rem / depth;
        for c in 0..=cap.min(k) {
            for b in 0..=(cap - c).min(k) {
                for a in 0..=(cap - c - b).min(k) {
                    let cur = [c, b, a];
                    let ok = if depth == 1 {
                        a <= lambda.k0
                            && b + a <= lambda.k0 + lambda.k2
                            && c + b <= lambda.k0 + lambda.k2
                    } else {
                        dc_ok(&prev, &cur, k)
                    };
                    if !ok {
                        continue;
                    }
                    stack.push((depth, cur));
                    rec(depth + 1, rem - depth * (c + b + a), cur, k, lambda, stack, out);
                    stack.pop();
                }
            }
        }
    }
    rec(1, n, ZERO_TRIPLE, k, lambda, &mut stack, &mut out);
    out
}

/// Finite-weight part and depth-sum degree of x(pi), relative to the highest
/// weight vector. The d-eigenvalue is the negative of the reported degree.
pub fn weight_degree(pi: &ColoredPartition) -> (FiniteWeight, i64) {
    let mut w = FiniteWeight::ZERO;
    for t in pi.exponents().values() {
        for (i, &mult) in t.iter().enumerate() {
            w = w + color_weight(Color::from_index(i)).scale(mult as i64);
        }
    }
    (w, pi.degree() as i64)
}

/// Weight-and-degree table of an admissible enumeration (relative weights).
pub fn enumerate_admissible_weighted(lambda: &DominantWeight, n: u32) -> WeightedCount {
    let mut out = WeightedCount::new();
    for pi in enumerate_admissible(lambda, n) {
        let (w, d) = weight_degree(&pi);
        out.add(w, d, 1);
    }
    out
}

/// Shift every part x_gamma(-j) to x_gamma(-j+p). Fails if a part would land
/// at depth <= 0.
pub fn shift(pi: &ColoredPartition, p: i64) -> Result<ColoredPartition> {
    let mut exponents = Vec::new();
    for (&j, &t) in pi.exponents() {
        let nj = j as i64 - p;
        if nj < 1 {
            return Err(Error::InvalidArgument(format!(
                "shift by {p} sends depth {j} to nonpositive depth {nj}"
            )));
        }
        exponents.push((nj as u32, t));
    }
    Ok(ColoredPartition::from_exponents(exponents))
}

/// The period-2 exponent pattern of the semi-infinite tails: (c, b, a) =
/// (k1, k2, k1) at even depths and (k0, k2, k0) at odd depths.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TailPattern {
    pub even: Triple,
    pub odd: Triple,
}

impl TailPattern {
    pub fn block(&self, depth: u32) -> Triple {
        if depth.is_multiple_of(2) {
            self.even
        } else {
            self.odd
        }
    }
}

pub fn tail_pattern(lambda: &DominantWeight) -> TailPattern {
    TailPattern {
        even: [lambda.k1, lambda.k2, lambda.k1],
        odd: [lambda.k0, lambda.k2, lambda.k0],
    }
}

/// The length-two truncation of the tail pattern: exponents (k1, k2, k1) at
/// depth 2 and (k0, k2, k0) at depth 1.
pub fn kappa(lambda: &DominantWeight) -> ColoredPartition {
    let t = tail_pattern(lambda);
    ColoredPartition::from_exponents([(2, t.block(2)), (1, t.block(1))])
}

/// Weight and conformal-weight shift of the current operator applied n
/// times on a level k module: (mu, delta) goes to
/// (mu + n*k*omega, delta + n*<mu, omega> + (n^2/2)*k) with omega = eps1.
pub fn current_shifted_weight(
    mu: FiniteWeight,
    delta: Rational,
    n: i64,
    k: u32,
) -> (FiniteWeight, Rational) {
    let omega = FiniteWeight::from_coords(1, 0);
    let w = mu + omega.scale(n * k as i64);
    let d = delta + Rational::new(n * mu.d1, 2) + Rational::new(n * n * k as i64, 2);
    (w, d)
}

/// An admissible partition together with an even current shift 2m (m <= 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemiInfiniteMonomial {
    pub base: ColoredPartition,
    pub shift: i64,
}

impl SemiInfiniteMonomial {
    pub fn new(base: ColoredPartition, shift: i64, lambda: &DominantWeight) -> Result<Self> {
        if shift > 0 {
            return Err(Error::InvalidArgument("current shift must be <= 0".into()));
        }
        if !satisfies_dc(&base, lambda.level()) || !satisfies_ic(&base, lambda) {
            return Err(Error::InvalidArgument(
                "base partition violates the difference or initial conditions".into(),
            ));
        }
        Ok(SemiInfiniteMonomial { base, shift })
    }

    /// Absolute finite weight and degree (depth-sum convention, highest
    /// weight vector at degree 0).
    pub fn weight_degree(&self, lambda: &DominantWeight) -> (FiniteWeight, Rational) {
        let (rel, deg) = weight_degree(&self.base);
        let mu = lambda.finite_part() + rel;
        current_shifted_weight(mu, Rational::from_integer(deg), 2 * self.shift, lambda.level())
    }
}

/// Per-(weight, degree) counts of shifted admissible monomials for one fixed
/// current shift 2m, restricted to degrees <= cut. Weights are absolute.
fn shift_window_table(lambda: &DominantWeight, m: i64, cut: i64) -> BTreeMap<(FiniteWeight, i64), u64> {
    debug_assert!(m <= 0);
    let k = lambda.level();
    let lam_fin = lambda.finite_part();
    // Degree of a shifted monomial: sum over parts of (depth + 2m) plus the
    // constant m*d1(lambda) + 2*m^2*k.
    let base = m * lam_fin.d1 + 2 * m * m * k as i64;
    let j0 = (-2 * m) as u32; // depths <= j0 contribute nonpositively

    let nstates = ((k + 1) * (k + 1) * (k + 1)) as usize;
    let idx = |t: &Triple| -> usize {
        ((t[0] * (k + 1) + t[1]) * (k + 1) + t[2]) as usize
    };
    let mut states: Vec<Triple> = Vec::with_capacity(nstates);
    for c in 0..=k {
        for b in 0..=k {
            for a in 0..=k {
                states.push([c, b, a]);
            }
        }
    }

    // dmax[d][s]: most negative achievable contribution from depths d..=j0
    // given the triple s at depth d-1. Depths beyond j0 contribute >= 0.
    let mut dmax: Vec<Vec<i64>> = vec![vec![0; nstates]; (j0 + 2) as usize];
    if j0 >= 2 {
        for d in (2..=j0).rev() {
            for (si, s) in states.iter().enumerate() {
                let mut best = 0i64; // the zero triple is always admissible
                for t in &states {
                    if dc_ok(s, t, k) {
                        let v = (d as i64 + 2 * m) * triple_sum(t) as i64
                            + dmax[(d + 1) as usize][idx(t)];
                        best = best.min(v);
                    }
                }
                dmax[d as usize][si] = best;
            }
        }
    }

    let mut table: BTreeMap<(FiniteWeight, i64), u64> = BTreeMap::new();

    struct Ctx<'a> {
        m: i64,
        cut: i64,
        k: u32,
        j0: u32,
        lambda: &'a DominantWeight,
        states: Vec<Triple>,
        dmax: Vec<Vec<i64>>,
    }
    let ctx = Ctx { m, cut, k, j0, lambda, states, dmax };

    fn rec(
        ctx: &Ctx<'_>,
        depth: u32,
        prev: Triple,
        acc_deg: i64,
        acc_w: FiniteWeight,
        table: &mut BTreeMap<(FiniteWeight, i64), u64>,
    ) {
        let unit = depth as i64 + 2 * ctx.m;
        if depth > ctx.j0 && acc_deg + unit > ctx.cut {
            if acc_deg <= ctx.cut {
                *table.entry((acc_w, acc_deg)).or_insert(0) += 1;
            }
            return;
        }
        let idx = |t: &Triple| -> usize {
            ((t[0] * (ctx.k + 1) + t[1]) * (ctx.k + 1) + t[2]) as usize
        };
        for t in &ctx.states {
            let ok = if depth == 1 {
                t[2] <= ctx.lambda.k0
                    && t[1] + t[2] <= ctx.lambda.k0 + ctx.lambda.k2
                    && t[0] + t[1] <= ctx.lambda.k0 + ctx.lambda.k2
            } else {
                dc_ok(&prev, t, ctx.k)
            };
            if !ok {
                continue;
            }
            let nd = acc_deg + unit * triple_sum(t) as i64;
            if depth > ctx.j0 {
                if nd > ctx.cut {
                    continue;
                }
            } else {
                let future = if depth < ctx.j0 {
                    ctx.dmax[(depth + 1) as usize][idx(t)]
                } else {
                    0
                };
                if nd + future > ctx.cut {
                    continue;
                }
            }
            let mut nw = acc_w;
            for (i, &mult) in t.iter().enumerate() {
                nw = nw + color_weight(Color::from_index(i)).scale(mult as i64);
            }
            rec(ctx, depth + 1, *t, nd, nw, table);
        }
    }

    let start_w = lam_fin + FiniteWeight::from_coords(1, 0).scale(2 * m * k as i64);
    rec(&ctx, 1, ZERO_TRIPLE, base, start_w, &mut table);
    table
}

/// Stabilized per-(weight, degree) multiplicities of the semi-infinite
/// monomial family, restricted to degrees <= degree_cut. Probes current
/// shifts m = 0, -1, -2, ... and stops when two consecutive shifts produce
/// identical restricted tables.
pub fn semi_infinite_multiplicities(
    lambda: &DominantWeight,
    degree_cut: u32,
    m_bound: Option<u32>,
) -> Result<WeightedCount> {
    if lambda.level() == 0 {
        return Err(Error::InvalidArgument("level must be >= 1".into()));
    }
    let bound = m_bound.unwrap_or(degree_cut + lambda.level() + 4);
    let cut = degree_cut as i64;
    let mut prev = shift_window_table(lambda, 0, cut);
    for mm in 1..=bound {
        let cur = shift_window_table(lambda, -(mm as i64), cut);
        if cur == prev {
            let mut out = WeightedCount::new();
            for ((w, d), m) in cur {
                out.add(w, d, m);
            }
            return Ok(out);
        }
        prev = cur;
    }
    Err(Error::StabilizationFailed {
        bound,
        detail: format!(
            "tables for consecutive shifts kept changing below degree {degree_cut} for {lambda}"
        ),
    })
}

/// A dominant integral weight k0*L0 + k1*L1 of A1(1).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Sl2Weight {
    pub k0: u32,
    pub k1: u32,
}

impl Sl2Weight {
    pub fn new(k0: u32, k1: u32) -> Self {
        Sl2Weight { k0, k1 }
    }

    pub fn level(&self) -> u32 {
        self.k0 + self.k1
    }

    /// Finite part k1*omega with omega = alpha/2 and the long root embedded
    /// as eps1+eps2.
    pub fn finite_part(&self) -> FiniteWeight {
        FiniteWeight::new(self.k1 as i64, self.k1 as i64)
    }
}

impl fmt::Display for Sl2Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k0, self.k1)
    }
}

/// Exponents of a monomial ... f(-j)^c_j h(-j)^b_j e(-j)^a_j ... f(0)^c_0.
/// Only c may be nonzero at depth 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Sl2Partition {
    exponents: BTreeMap<u32, Triple>,
}

impl Sl2Partition {
    pub fn from_exponents<I: IntoIterator<Item = (u32, Triple)>>(iter: I) -> Self {
        let mut exponents = BTreeMap::new();
        for (depth, t) in iter {
            if depth == 0 {
                assert!(t[1] == 0 && t[2] == 0, "only f may appear at depth 0");
            }
            if t != ZERO_TRIPLE {
                exponents.insert(depth, t);
            }
        }
        Sl2Partition { exponents }
    }

    pub fn exponents(&self) -> &BTreeMap<u32, Triple> {
        &self.exponents
    }

    pub fn triple(&self, depth: u32) -> Triple {
        self.exponents.get(&depth).copied().unwrap_or(ZERO_TRIPLE)
    }

    pub fn max_depth(&self) -> u32 {
        self.exponents.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.exponents
            .iter()
            .map(|(j, t)| *j as u64 * triple_sum(t) as u64)
            .sum()
    }

    /// Relative finite weight (h-eigenvalue on the diagonal embedding) and
    /// depth-sum degree.
    pub fn weight_degree(&self) -> (FiniteWeight, i64) {
        let mut w = FiniteWeight::ZERO;
        for t in self.exponents.values() {
            for (i, &mult) in t.iter().enumerate() {
                w = w + sl2_symbol_weight(Sl2Symbol::from_index(i)).scale(mult as i64);
            }
        }
        (w, self.degree() as i64)
    }
}

impl fmt::Display for Sl2Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&j, t) in self.exponents.iter().rev() {
            for (i, &mult) in t.iter().enumerate() {
                if mult == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{}(-{})", Sl2Symbol::from_index(i), j)?;
                if mult > 1 {
                    write!(f, "^{}", mult)?;
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Sl2Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            exponents: BTreeMap<String, &'a Triple>,
        }
        let exponents = self
            .exponents
            .iter()
            .map(|(j, t)| (j.to_string(), t))
            .collect();
        Repr { exponents }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sl2Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            exponents: BTreeMap<String, Triple>,
        }
        let r = Repr::deserialize(d)?;
        let mut exponents = BTreeMap::new();
        for (j, t) in r.exponents {
            let depth: u32 = j.parse().map_err(serde::de::Error::custom)?;
            if depth == 0 && (t[1] != 0 || t[2] != 0) {
                return Err(serde::de::Error::custom("only f may appear at depth 0"));
            }
            if t != ZERO_TRIPLE {
                exponents.insert(depth, t);
            }
        }
        Ok(Sl2Partition { exponents })
    }
}

/// True iff the four adjacent-depth inequalities hold at every depth j >= 0
/// (so the depth-0 exponent participates).
pub fn satisfies_dc_sl2(pi: &Sl2Partition, k: u32) -> bool {
    let max = pi.max_depth();
    for j in 0..=max {
        if !dc_ok(&pi.triple(j), &pi.triple(j + 1), k) {
            return false;
        }
    }
    true
}

/// True iff a1 <= k0 and c0 <= k1.
pub fn satisfies_ic_sl2(pi: &Sl2Partition, k0: u32, k1: u32) -> bool {
    pi.triple(1)[2] <= k0 && pi.triple(0)[0] <= k1
}

/// The admissible A1 monomials of the given degree.
pub fn enumerate_sl2_partitions(lambda: &Sl2Weight, n: u32) -> Vec<Sl2Partition> {
    let k = lambda.level();
    let mut out = Vec::new();

    fn rec(
        depth: u32,
        rem: u32,
        prev: Triple,
        k: u32,
        k0: u32,
        stack: &mut Vec<(u32, Triple)>,
        out: &mut Vec<Sl2Partition>,
    ) {
        if rem == 0 {
            out.push(Sl2Partition::from_exponents(stack.iter().copied()));
            return;
        }
        if depth > rem {
            return;
        }
        let cap = rem / depth;
        for c in 0..=cap.min(k) {
            for b in 0..=(cap - c).min(k) {
                for a in 0..=(cap - c - b).min(k) {
                    let cur = [c, b, a];
                    if !dc_ok(&prev, &cur, k) || (depth == 1 && a > k0) {
                        continue;
                    }
                    stack.push((depth, cur));
                    rec(depth + 1, rem - depth * (c + b + a), cur, k, k0, stack, out);
                    stack.pop();
                }
            }
        }
    }

    // the depth-0 factor has degree 0, so it is enumerated separately
    for c0 in 0..=lambda.k1.min(k) {
        let t0 = [c0, 0, 0];
        let mut stack = vec![(0, t0)];
        rec(1, n, t0, k, lambda.k0, &mut stack, &mut out);
    }
    out
}

/// Counts per (relative sl2 weight, degree) of the admissible A1 monomials
/// of the given degree.
pub fn enumerate_sl2(lambda: &Sl2Weight, n: u32) -> WeightedCount {
    let mut out = WeightedCount::new();
    for pi in enumerate_sl2_partitions(lambda, n) {
        let (w, d) = pi.weight_degree();
        out.add(w, d, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(depths: &[(u32, Triple)]) -> ColoredPartition {
        ColoredPartition::from_exponents(depths.iter().copied())
    }

    #[test]
    fn dc_examples() {
        assert!(satisfies_dc(&ColoredPartition::empty(), 1));
        // a2 + b1 + a1 = 2 > 1
        assert!(!satisfies_dc(&part(&[(1, [0, 0, 1]), (2, [0, 0, 1])]), 1));
        assert!(satisfies_dc(&part(&[(1, [1, 0, 1])]), 1));
    }

    #[test]
    fn ic_examples() {
        let l0 = DominantWeight::new(1, 0, 0);
        let l1 = DominantWeight::new(0, 1, 0);
        assert!(satisfies_ic(&part(&[(1, [0, 0, 1])]), &l0));
        assert!(!satisfies_ic(&part(&[(1, [0, 0, 1])]), &l1));
        assert!(!satisfies_ic(&part(&[(1, [1, 1, 0])]), &l0));
    }

    #[test]
    fn leading_term_examples() {
        // family 4 witness x2(-2) x2(-1)
        let pi = part(&[(1, [0, 0, 1]), (2, [0, 0, 1])]);
        let f = find_leading_term_divisor(&pi, 1).unwrap();
        assert_eq!(f.family, 4);
        assert_eq!(f.factor, part(&[(2, [0, 0, 1]), (1, [0, 0, 1])]));

        // c1 = 2 alone is caught by family 1 with zero depth-2 exponents
        let pi = part(&[(1, [2, 0, 0])]);
        let f = find_leading_term_divisor(&pi, 1).unwrap();
        assert_eq!(f.family, 1);
        assert_eq!(f.factor, part(&[(1, [2, 0, 0])]));

        assert!(find_leading_term_divisor(&part(&[(1, [1, 0, 1])]), 1).is_none());
    }

    #[test]
    fn enumerate_examples() {
        let l0 = DominantWeight::new(1, 0, 0);
        let l1 = DominantWeight::new(0, 1, 0);
        assert_eq!(enumerate_admissible(&l0, 0), vec![ColoredPartition::empty()]);
        assert!(enumerate_admissible(&l1, 1).is_empty());
        // lexicographic on the (c, b, a) exponent stream
        let deg1 = enumerate_admissible(&l0, 1);
        assert_eq!(
            deg1,
            vec![
                part(&[(1, [0, 0, 1])]),
                part(&[(1, [0, 1, 0])]),
                part(&[(1, [1, 0, 0])]),
            ]
        );
        let as_set: std::collections::BTreeSet<_> = deg1.into_iter().collect();
        let expected: std::collections::BTreeSet<_> = [
            part(&[(1, [1, 0, 0])]),
            part(&[(1, [0, 1, 0])]),
            part(&[(1, [0, 0, 1])]),
        ]
        .into_iter()
        .collect();
        assert_eq!(as_set, expected);
        // degree 2: three depth-2 singletons plus x2bar(-1) x2(-1)
        assert_eq!(enumerate_admissible(&l0, 2).len(), 4);
    }

    #[test]
    fn weight_degree_examples() {
        assert_eq!(weight_degree(&ColoredPartition::empty()), (FiniteWeight::ZERO, 0));
        assert_eq!(
            weight_degree(&part(&[(1, [0, 0, 1])])),
            (FiniteWeight::from_coords(1, 1), 1)
        );
        assert_eq!(
            weight_degree(&part(&[(2, [1, 1, 0])])),
            (FiniteWeight::from_coords(2, -1), 4)
        );
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&ColoredPartition::empty(), 5).unwrap(), ColoredPartition::empty());
        assert_eq!(
            shift(&part(&[(3, [0, 1, 0])]), 2).unwrap(),
            part(&[(1, [0, 1, 0])])
        );
        assert!(shift(&part(&[(1, [0, 0, 1])]), 1).is_err());
        let pi = part(&[(1, [1, 0, 1]), (3, [0, 1, 0])]);
        let (w0, d0) = weight_degree(&pi);
        let (w1, d1) = weight_degree(&shift(&pi, -2).unwrap());
        assert_eq!(w0, w1);
        assert_eq!(d1, d0 + 2 * pi.part_count() as i64);
    }

    #[test]
    fn kappa_and_tail() {
        let l0 = DominantWeight::new(1, 0, 0);
        assert_eq!(kappa(&l0), part(&[(1, [1, 0, 1])]));
        let l2 = DominantWeight::new(0, 0, 1);
        assert_eq!(kappa(&l2), part(&[(2, [0, 1, 0]), (1, [0, 1, 0])]));
        let l = DominantWeight::new(1, 1, 0);
        assert_eq!(kappa(&l), part(&[(2, [1, 0, 1]), (1, [1, 0, 1])]));

        let t = tail_pattern(&l0);
        assert_eq!((t.even, t.odd), ([0, 0, 0], [1, 0, 1]));
        let t2 = tail_pattern(&DominantWeight::new(0, 0, 1));
        assert_eq!((t2.even, t2.odd), ([0, 1, 0], [0, 1, 0]));
        // kappa equals the tail pattern truncated to depths {1, 2}
        for lam in DominantWeight::all_of_level(2) {
            let t = tail_pattern(&lam);
            assert_eq!(kappa(&lam), part(&[(2, t.block(2)), (1, t.block(1))]));
        }
    }

    #[test]
    fn current_shift_examples() {
        let (w, d) = current_shifted_weight(FiniteWeight::ZERO, Rational::from_integer(0), 2, 1);
        assert_eq!(w, FiniteWeight::from_coords(2, 0));
        assert_eq!(d, Rational::from_integer(2));
        let (w, d) = current_shifted_weight(w, d, 0, 1);
        assert_eq!((w, d), (FiniteWeight::from_coords(2, 0), Rational::from_integer(2)));
    }

    #[test]
    fn current_shift_composes() {
        let k = 2;
        let mu = FiniteWeight::new(3, 1);
        let delta = Rational::new(5, 2);
        for n in -3..=3i64 {
            for n2 in -3..=3i64 {
                let step = current_shifted_weight(mu, delta, n, k);
                let two = current_shifted_weight(step.0, step.1, n2, k);
                let direct = current_shifted_weight(mu, delta, n + n2, k);
                assert_eq!(two, direct);
            }
        }
    }

    #[test]
    fn semi_infinite_monomial_anchors_highest_weight() {
        // the shift -1 with base kappa represents the highest weight vector
        for lam in DominantWeight::all_of_level(1).into_iter().chain(DominantWeight::all_of_level(2)) {
            let v = SemiInfiniteMonomial::new(kappa(&lam), -1, &lam).unwrap();
            let (w, d) = v.weight_degree(&lam);
            assert_eq!(w, lam.finite_part());
            assert_eq!(d, Rational::from_integer(0));
        }
    }

    #[test]
    fn semi_infinite_highest_cell_is_one() {
        for lam in DominantWeight::all_of_level(1) {
            let t = semi_infinite_multiplicities(&lam, 2, None).unwrap();
            assert_eq!(t.get(lam.finite_part(), 0), 1);
        }
    }

    #[test]
    fn tail_block_absorption_fixes_weight_and_degree() {
        // (pi, m) and (shift(pi,-2) * kappa, m-1) represent the same vector
        for lam in [DominantWeight::new(1, 0, 0), DominantWeight::new(1, 0, 1)] {
            for n in 0..=4u32 {
                for pi in enumerate_admissible(&lam, n) {
                    for m in -3..=0i64 {
                        let a = SemiInfiniteMonomial::new(pi.clone(), m, &lam).unwrap();
                        let deeper = shift(&pi, -2).unwrap().concat(&kappa(&lam));
                        let b = SemiInfiniteMonomial::new(deeper, m - 1, &lam).unwrap();
                        assert_eq!(a.weight_degree(&lam), b.weight_degree(&lam));
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_examples() {
        let w10 = Sl2Weight::new(1, 0);
        let w01 = Sl2Weight::new(0, 1);
        assert_eq!(enumerate_sl2_partitions(&w10, 0).len(), 1);
        let deg0 = enumerate_sl2_partitions(&w01, 0);
        assert_eq!(deg0.len(), 2);
        let t = enumerate_sl2(&w01, 0);
        assert_eq!(t.get(FiniteWeight::ZERO, 0), 1);
        assert_eq!(t.get(FiniteWeight::new(-2, -2), 0), 1);
        // dc with the depth-0 exponent participating
        let pi = Sl2Partition::from_exponents([(0, [1, 0, 0]), (1, [1, 0, 0])]);
        assert!(!satisfies_dc_sl2(&pi, 1));
        assert!(satisfies_dc_sl2(&pi, 2));
        let s = serde_json::to_string(&pi).unwrap();
        assert_eq!(s, r#"{"exponents":{"0":[1,0,0],"1":[1,0,0]}}"#);
        let back: Sl2Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pi);
    }

    #[test]
    fn partition_json_round_trip() {
        let pi = part(&[(1, [1, 0, 1]), (3, [0, 2, 0])]);
        let s = serde_json::to_string(&pi).unwrap();
        assert_eq!(s, r#"{"exponents":{"1":[1,0,1],"3":[0,2,0]}}"#);
        let back: ColoredPartition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, pi);
    }

    #[test]
    fn weighted_count_json_shape() {
        let mut t = WeightedCount::new();
        t.add(FiniteWeight::new(1, 1), 2, 3);
        t.add(FiniteWeight::new(-1, 1), 0, 1);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"[{"weight":[-1,1],"degree":0,"mult":1},{"weight":[1,1],"degree":2,"mult":3}]"#
        );
    }
}
