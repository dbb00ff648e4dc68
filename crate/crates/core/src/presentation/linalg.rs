//! Exact rank and reduced echelon computations on sparse integer/rational
//! rows, plus the modular (multi-prime) rank path.
//!
//! Rows are ascending (column, coefficient) lists. Columns are expected to
//! be indexed in the monomial order of the slice, so echelon pivots land on
//! the order-smallest monomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntRow = Vec<(u32, BigInt)>;
pub type RatRow = Vec<(u32, BigRational)>;
pub type ModRow = Vec<(u32, u64)>;

fn int_row_normalize(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = num_integer::gcd(g, v.abs());
    }
    if g.is_zero() {
        return;
    }
    let negate = row.first().map(|(_, v)| v.is_negative()).unwrap_or(false);
    if g.is_one() && !negate {
        return;
    }
    let s = if negate { -g } else { g };
    for (_, v) in row.iter_mut() {
        *v /= &s;
    }
}

/// row <- a*row - b*other, sparse merge; the result is gcd-normalized.
fn int_row_combine(row: &IntRow, a: &BigInt, other: &IntRow, b: &BigInt) -> IntRow {
    let mut out: IntRow = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let next = match (row.get(i), other.get(j)) {
            (Some(&(c1, _)), Some(&(c2, _))) => {
                if c1 < c2 {
                    let v = a * &row[i].1;
                    i += 1;
                    (c1, v)
                } else if c2 < c1 {
                    let v = -(b * &other[j].1);
                    j += 1;
                    (c2, v)
                } else {
                    let v = a * &row[i].1 - b * &other[j].1;
                    i += 1;
                    j += 1;
                    (c1, v)
                }
            }
            (Some(&(c1, _)), None) => {
                let v = a * &row[i].1;
                i += 1;
                (c1, v)
            }
            (None, Some(&(c2, _))) => {
                let v = -(b * &other[j].1);
                j += 1;
                (c2, v)
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    int_row_normalize(&mut out);
    out
}

/// Rank over the rationals by fraction-free forward elimination: rows are
/// kept integral and divided by their content after every combination.
pub fn rank_int(rows: Vec<IntRow>) -> usize {
    let mut pivots: Vec<(u32, IntRow)> = Vec::new();
    for mut row in rows {
        int_row_normalize(&mut row);
        while let Some(&(lead, _)) = row.first() {
            match pivots.binary_search_by_key(&lead, |p| p.0) {
                Ok(ix) => {
                    let (a, b) = {
                        let piv = &pivots[ix].1;
                        (piv[0].1.clone(), row[0].1.clone())
                    };
                    row = int_row_combine(&row, &a, &pivots[ix].1, &b);
                }
                Err(ix) => {
                    pivots.insert(ix, (lead, row));
                    break;
                }
            }
        }
    }
    pivots.len()
}

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Rank over the prime field F_p by forward elimination.
pub fn rank_mod(rows: Vec<ModRow>, p: u64) -> usize {
    let mut pivots: Vec<(u32, ModRow)> = Vec::new();
    for mut row in rows {
        row.retain(|&(_, v)| v % p != 0);
        while let Some(&(lead, lv)) = row.first() {
            match pivots.binary_search_by_key(&lead, |piv| piv.0) {
                Ok(ix) => {
                    // row -= lv * pivot  (pivot normalized to leading 1)
                    let piv = &pivots[ix].1;
                    let mut out: ModRow = Vec::with_capacity(row.len() + piv.len());
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < piv.len() {
                        let (c, v) = match (row.get(i), piv.get(j)) {
                            (Some(&(c1, v1)), Some(&(c2, v2))) => {
                                if c1 < c2 {
                                    i += 1;
                                    (c1, v1)
                                } else if c2 < c1 {
                                    j += 1;
                                    (c2, (p - mulmod(lv, v2, p)) % p)
                                } else {
                                    i += 1;
                                    j += 1;
                                    (c1, (v1 + p - mulmod(lv, v2, p)) % p)
                                }
                            }
                            (Some(&(c1, v1)), None) => {
                                i += 1;
                                (c1, v1)
                            }
                            (None, Some(&(c2, v2))) => {
                                j += 1;
                                (c2, (p - mulmod(lv, v2, p)) % p)
                            }
                            (None, None) => unreachable!(),
                        };
                        if v != 0 {
                            out.push((c, v));
                        }
                    }
                    row = out;
                }
                Err(ix) => {
                    let inv = invmod(lv, p);
                    let norm: ModRow = row.iter().map(|&(c, v)| (c, mulmod(v, inv, p))).collect();
                    pivots.insert(ix, (lead, norm));
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Reduced echelon form over the rationals. Returns the pivot rows keyed by
/// pivot column; every row has leading coefficient 1 and is fully reduced
/// against the other pivots.
pub fn rref_rational(rows: Vec<RatRow>) -> Vec<(u32, RatRow)> {
    let mut pivots: Vec<(u32, RatRow)> = Vec::new();
    for mut row in rows {
        row.retain(|(_, v)| !v.is_zero());
        while let Some((lead, lv)) = row.first().map(|(c, v)| (*c, v.clone())) {
            match pivots.binary_search_by_key(&lead, |p| p.0) {
                Ok(ix) => {
                    let piv = pivots[ix].1.clone();
                    row = rat_row_sub_scaled(&row, &piv, &lv);
                }
                Err(ix) => {
                    let norm: RatRow = row.iter().map(|(c, v)| (*c, v / &lv)).collect();
                    pivots.insert(ix, (lead, norm));
                    break;
                }
            }
        }
    }
    // back substitution: clear pivot columns from the tails
    let cols: Vec<u32> = pivots.iter().map(|(c, _)| *c).collect();
    for i in (0..pivots.len()).rev() {
        let mut row = pivots[i].1.clone();
        for (j, &cj) in cols.iter().enumerate().skip(i + 1) {
            if let Some(coef) = row
                .iter()
                .find(|&&(c, _)| c == cj)
                .map(|(_, v)| v.clone())
            {
                row = rat_row_sub_scaled(&row, &pivots[j].1, &coef);
            }
        }
        pivots[i].1 = row;
    }
    pivots
}

/// row - s*other, sparse merge.
pub fn rat_row_sub_scaled(row: &RatRow, other: &RatRow, s: &BigRational) -> RatRow {
    let mut out: RatRow = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let next = match (row.get(i), other.get(j)) {
            (Some((c1, _)), Some((c2, _))) => {
                if c1 < c2 {
                    let e = row[i].clone();
                    i += 1;
                    e
                } else if c2 < c1 {
                    let e = (*c2, -(s * &other[j].1));
                    j += 1;
                    e
                } else {
                    let e = (*c1, &row[i].1 - s * &other[j].1);
                    i += 1;
                    j += 1;
                    e
                }
            }
            (Some(_), None) => {
                let e = row[i].clone();
                i += 1;
                e
            }
            (None, Some((c2, _))) => {
                let e = (*c2, -(s * &other[j].1));
                j += 1;
                e
            }
            (None, None) => unreachable!(),
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    out
}

/// Incremental rational span with membership testing; used for closure
/// fixed points. Columns are assigned in first-seen order, which is fine
/// for membership.
#[derive(Default)]
pub struct SpanBasis {
    rows: Vec<(u32, RatRow)>,
}

impl SpanBasis {
    pub fn new() -> Self {
        SpanBasis::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduce `row` against the basis; if a nonzero remainder survives, add
    /// it and return true (the row was independent).
    pub fn insert(&mut self, mut row: RatRow) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lv)) = row.first().map(|(c, v)| (*c, v.clone())) else {
                return false;
            };
            match self.rows.binary_search_by_key(&lead, |p| p.0) {
                Ok(ix) => {
                    let piv = self.rows[ix].1.clone();
                    row = rat_row_sub_scaled(&row, &piv, &lv);
                }
                Err(ix) => {
                    let norm: RatRow = row.iter().map(|(c, v)| (*c, v / &lv)).collect();
                    self.rows.insert(ix, (lead, norm));
                    return true;
                }
            }
        }
    }

    /// True iff the row lies in the current span (the row is not added).
    pub fn contains(&self, mut row: RatRow) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        loop {
            let Some((lead, lv)) = row.first().map(|(c, v)| (*c, v.clone())) else {
                return true;
            };
            match self.rows.binary_search_by_key(&lead, |p| p.0) {
                Ok(ix) => {
                    let piv = self.rows[ix].1.clone();
                    row = rat_row_sub_scaled(&row, &piv, &lv);
                }
                Err(_) => return false,
            }
        }
    }
}

/// Primality by trial division; the primes used here are below 2^32.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7] {
        if n == d {
            return true;
        }
        if n.is_multiple_of(d) {
            return false;
        }
    }
    let mut d = 11u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
