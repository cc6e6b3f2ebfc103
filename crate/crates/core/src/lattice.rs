//! Exact integer and rational linear algebra in the plane lattice `M = Z^2`
//! and its rational span.
//!
//! Everything here is exact: integer vectors use checked `i64` arithmetic
//! (edge directions are tiny), while positions and matrices use
//! arbitrary-precision integers and reduced rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p/q` (the denominator is always written).
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a plain integer `p`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(D::Error::custom)
    }
}

/// Element of `M = Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct IntVec2 {
    pub x: i64,
    pub y: i64,
}

impl From<[i64; 2]> for IntVec2 {
    fn from(a: [i64; 2]) -> Self {
        IntVec2 { x: a[0], y: a[1] }
    }
}

impl From<IntVec2> for [i64; 2] {
    fn from(v: IntVec2) -> Self {
        [v.x, v.y]
    }
}

impl IntVec2 {
    pub const ZERO: IntVec2 = IntVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IntVec2 { x, y }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn scale(self, k: i64) -> Self {
        IntVec2 {
            x: self.x.checked_mul(k).expect("lattice overflow"),
            y: self.y.checked_mul(k).expect("lattice overflow"),
        }
    }

    /// Rotation by +90 degrees.
    pub fn rot90(self) -> Self {
        IntVec2 { x: -self.y, y: self.x }
    }

    pub fn dot(self, o: IntVec2) -> i64 {
        self.x
            .checked_mul(o.x)
            .and_then(|a| self.y.checked_mul(o.y).and_then(|b| a.checked_add(b)))
            .expect("lattice overflow")
    }

    pub fn to_rat(self) -> RatVec2 {
        RatVec2::new(rat(self.x), rat(self.y))
    }

    /// Primitive normal `n` with `<n, self> = 0`, sign chosen so that `n` is
    /// lexicographically positive.
    pub fn lex_normal(self) -> IntVec2 {
        let (p, _) = primitive(self).expect("normal of zero vector");
        let n = p.rot90();
        if n.x > 0 || (n.x == 0 && n.y > 0) {
            n
        } else {
            -n
        }
    }
}

impl Add for IntVec2 {
    type Output = IntVec2;
    fn add(self, o: IntVec2) -> IntVec2 {
        IntVec2 {
            x: self.x.checked_add(o.x).expect("lattice overflow"),
            y: self.y.checked_add(o.y).expect("lattice overflow"),
        }
    }
}

impl Sub for IntVec2 {
    type Output = IntVec2;
    fn sub(self, o: IntVec2) -> IntVec2 {
        IntVec2 {
            x: self.x.checked_sub(o.x).expect("lattice overflow"),
            y: self.y.checked_sub(o.y).expect("lattice overflow"),
        }
    }
}

impl Neg for IntVec2 {
    type Output = IntVec2;
    fn neg(self) -> IntVec2 {
        IntVec2 { x: -self.x, y: -self.y }
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Splits a nonzero vector as `k * p` with `p` primitive and `k > 0`.
pub fn primitive(v: IntVec2) -> Result<(IntVec2, i64)> {
    if v.is_zero() {
        return Err(Error::Domain("primitive of the zero vector".into()));
    }
    let k = v.x.gcd(&v.y);
    Ok((IntVec2::new(v.x / k, v.y / k), k))
}

/// `a ∧ b = a.x b.y - a.y b.x`, identifying `M ∧ M` with `Z`.
pub fn wedge(a: IntVec2, b: IntVec2) -> i64 {
    let l = (a.x as i128) * (b.y as i128) - (a.y as i128) * (b.x as i128);
    i64::try_from(l).expect("lattice overflow")
}

/// Point of `M_Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVec2 {
    pub x: Rat,
    pub y: Rat,
}

impl RatVec2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatVec2 { x, y }
    }

    pub fn zero() -> Self {
        RatVec2::new(Rat::zero(), Rat::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatVec2::new(rat(x), rat(y))
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        RatVec2::new(ratio(x.0, x.1), ratio(y.0, y.1))
    }

    pub fn dot_int(&self, n: IntVec2) -> Rat {
        &self.x * BigInt::from(n.x) + &self.y * BigInt::from(n.y)
    }

    pub fn dot(&self, o: &RatVec2) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &RatVec2) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }

    /// `self + t * d`.
    pub fn offset(&self, d: IntVec2, t: &Rat) -> RatVec2 {
        RatVec2::new(&self.x + t * BigInt::from(d.x), &self.y + t * BigInt::from(d.y))
    }

    pub fn scale(&self, t: &Rat) -> RatVec2 {
        RatVec2::new(&self.x * t, &self.y * t)
    }

    /// If `self` equals `t * d` for some rational `t`, return `t`.
    pub fn multiple_of(&self, d: IntVec2) -> Option<Rat> {
        if !(&self.x * BigInt::from(d.y) - &self.y * BigInt::from(d.x)).is_zero() {
            return None;
        }
        if d.x != 0 {
            Some(&self.x / BigInt::from(d.x))
        } else if d.y != 0 {
            Some(&self.y / BigInt::from(d.y))
        } else {
            None
        }
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    /// Decimal approximation, for rendering only.
    pub fn approx(&self) -> (f64, f64) {
        (rat_to_f64(&self.x), rat_to_f64(&self.y))
    }
}

/// Primitive integer vector pointing along a nonzero rational vector.
pub fn rat_direction(d: &RatVec2) -> Result<IntVec2> {
    if d.x.is_zero() && d.y.is_zero() {
        return Err(Error::Domain("direction of the zero vector".into()));
    }
    let l = d.x.denom().lcm(d.y.denom());
    let x = (&d.x * Rat::from_integer(l.clone())).to_integer();
    let y = (&d.y * Rat::from_integer(l)).to_integer();
    let g = x.gcd(&y);
    let to = |v: BigInt| (v / &g).to_i64().ok_or_else(|| Error::Domain("direction exceeds i64".into()));
    Ok(IntVec2::new(to(x)?, to(y)?))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &RatVec2 {
    type Output = RatVec2;
    fn add(self, o: &RatVec2) -> RatVec2 {
        RatVec2::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &RatVec2 {
    type Output = RatVec2;
    fn sub(self, o: &RatVec2) -> RatVec2 {
        RatVec2::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Mul<&Rat> for &RatVec2 {
    type Output = RatVec2;
    fn mul(self, t: &Rat) -> RatVec2 {
        self.scale(t)
    }
}

impl fmt::Display for RatVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for RatVec2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_rat(&self.x), fmt_rat(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatVec2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        Ok(RatVec2::new(parse_rat(&x).map_err(D::Error::custom)?, parse_rat(&y).map_err(D::Error::custom)?))
    }
}

/// Rectangular integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Domain("ragged matrix".into()));
        }
        Ok(IntMatrix { rows: r, cols: c, entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|v| v.to_i64().expect("entry exceeds i64")).collect()).collect()
    }

    /// Row with every entry negated.
    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(dst, c) - q * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, dst) - q * self.get(r, src);
            self.set(r, dst, v);
        }
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ...` of the Smith normal form.
pub fn smith_invariants(a: &IntMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = m.get(r, c);
                if !v.is_zero() && best.is_none_or(|(br, bc)| v.abs() < m.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        m.swap_rows(t, pr);
        m.swap_cols(t, pc);
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if !m.get(r, t).is_zero() {
                    let q = m.get(r, t).div_floor(m.get(t, t));
                    m.row_axpy(r, t, &q);
                    if !m.get(r, t).is_zero() {
                        m.swap_rows(t, r);
                        dirty = true;
                    }
                }
            }
            for c in t + 1..cols {
                if !m.get(t, c).is_zero() {
                    let q = m.get(t, c).div_floor(m.get(t, t));
                    m.col_axpy(c, t, &q);
                    if !m.get(t, c).is_zero() {
                        m.swap_cols(t, c);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let p = m.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !m.get(r, c).is_multiple_of(&p));
            match bad {
                Some((r, _)) => {
                    let one = BigInt::one();
                    m.row_axpy(t, r, &-one);
                }
                None => break,
            }
        }
        diag.push(m.get(t, t).abs());
        t += 1;
    }
    diag
}

/// Order of `coker(A: Z^cols -> Z^rows)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(BigUint),
    Infinite,
}

pub fn cokernel_order(a: &IntMatrix) -> CokernelOrder {
    let inv = smith_invariants(a);
    if inv.len() < a.rows {
        return CokernelOrder::Infinite;
    }
    let prod = inv.iter().fold(BigInt::one(), |acc, d| acc * d);
    CokernelOrder::Finite(prod.to_biguint().expect("invariant factors are positive"))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> Result<BigInt> {
    if a.rows != a.cols {
        return Err(Error::Domain("determinant of a non-square matrix".into()));
    }
    let n = a.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
        }
        prev = m.get(k, k).clone();
    }
    Ok(sign * m.get(n - 1, n - 1))
}

/// Result of solving `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineSolution {
    Unique(Vec<Rat>),
    Inconsistent,
    Family { particular: Vec<Rat>, kernel: Vec<Vec<Rat>> },
}

/// Exact Gaussian elimination. `a` is given row-major with `b.len()` rows.
pub fn solve_affine(a: &[Vec<Rat>], b: &[Rat]) -> Result<AffineSolution> {
    let rows = a.len();
    if rows != b.len() {
        return Err(Error::Domain("row count mismatch".into()));
    }
    let cols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != cols) {
        return Err(Error::Domain("ragged matrix".into()));
    }
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    if pivots.len() == cols {
        return Ok(AffineSolution::Unique(particular));
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Ok(AffineSolution::Family { particular, kernel })
}

/// Least common multiple of the denominators of the given rationals.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
