//! `Q[T_Sigma] (x) R_k` with `R_k = Q[u_1..u_k]/(u_i^2)`, plus a formal `y0`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{fmt_rat, parse_rat, Rat};

/// A monomial `u_I z^m`; `m` lives in `T_Sigma`, `I` is a bitmask over
/// 1-based labels (bit `i - 1` for `u_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exp: Vec<i64>,
    pub u: u64,
}

impl Monomial {
    pub fn new(exp: Vec<i64>, u: u64) -> Monomial {
        Monomial { exp, u }
    }

    pub fn unit(n: usize) -> Monomial {
        Monomial { exp: vec![0; n], u: 0 }
    }

    /// `z^{e_i}`.
    pub fn generator(n: usize, i: usize) -> Monomial {
        let mut exp = vec![0; n];
        exp[i] = 1;
        Monomial { exp, u: 0 }
    }

    pub fn is_unit(&self) -> bool {
        self.u == 0 && self.exp.iter().all(|&e| e == 0)
    }

    /// The product, or `None` when a `u_i` would be squared.
    pub fn mul(&self, o: &Monomial) -> Option<Monomial> {
        if self.u & o.u != 0 {
            return None;
        }
        let exp = self.exp.iter().zip(&o.exp).map(|(a, b)| a + b).collect();
        Some(Monomial { exp, u: self.u | o.u })
    }

    pub fn u_labels(&self) -> Vec<usize> {
        u_labels(self.u)
    }
}

pub fn u_mask(labels: &[usize]) -> u64 {
    labels.iter().fold(0, |m, &l| m | (1u64 << (l - 1)))
}

pub fn u_labels(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b as usize + 1).collect()
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for l in self.u_labels() {
            parts.push(format!("u{l}"));
        }
        for (i, &e) in self.exp.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Finite sum of rational multiples of monomials, plus `y0_part * y0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    nrays: usize,
    terms: BTreeMap<Monomial, Rat>,
    pub y0: Rat,
}

impl RingElement {
    pub fn zero(nrays: usize) -> RingElement {
        RingElement { nrays, terms: BTreeMap::new(), y0: Rat::zero() }
    }

    pub fn one(nrays: usize) -> RingElement {
        RingElement::monomial(Rat::one(), Monomial::unit(nrays))
    }

    pub fn monomial(c: Rat, m: Monomial) -> RingElement {
        let mut r = RingElement::zero(m.exp.len());
        r.add_term(m, c);
        r
    }

    pub fn generator(nrays: usize, i: usize) -> RingElement {
        RingElement::monomial(Rat::one(), Monomial::generator(nrays, i))
    }

    /// The formal constant `y0`.
    pub fn y0(nrays: usize) -> RingElement {
        let mut r = RingElement::zero(nrays);
        r.y0 = Rat::one();
        r
    }

    pub fn nrays(&self) -> usize {
        self.nrays
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        assert_eq!(m.exp.len(), self.nrays, "exponent length");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.y0.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_one(&self) -> bool {
        self.y0.is_zero() && self.terms.len() == 1 && self.coeff(&Monomial::unit(self.nrays)).is_one()
    }

    /// Every term lies in the ideal `(u_1, ..., u_k)`.
    pub fn in_u_ideal(&self) -> bool {
        self.y0.is_zero() && self.terms.keys().all(|m| m.u != 0)
    }

    /// Drops every term carrying some `u_i`.
    pub fn mod_u(&self) -> RingElement {
        let mut r = RingElement::zero(self.nrays);
        r.y0 = self.y0.clone();
        for (m, c) in &self.terms {
            if m.u == 0 {
                r.add_term(m.clone(), c.clone());
            }
        }
        r
    }

    pub fn scale(&self, c: &Rat) -> RingElement {
        let mut r = RingElement::zero(self.nrays);
        r.y0 = &self.y0 * c;
        for (m, v) in &self.terms {
            r.add_term(m.clone(), v * c);
        }
        r
    }

    /// `self^e` for `self = 1 + N` with `N` nilpotent; negative powers expand
    /// `(1 + N)^{-1} = sum (-N)^j`.
    pub fn pow(&self, e: i64) -> Result<RingElement> {
        let one = RingElement::one(self.nrays);
        if e == 0 {
            return Ok(one);
        }
        let base = if e > 0 {
            self.clone()
        } else {
            let n = self - &one;
            if !n.in_u_ideal() {
                return Err(Error::Unsupported(format!("{self} - 1 is not nilpotent")));
            }
            let mut inv = one.clone();
            let mut p = one.clone();
            let neg = -&n;
            loop {
                p = &p * &neg;
                if p.terms.is_empty() {
                    break;
                }
                inv = &inv + &p;
            }
            inv
        };
        let mut out = one;
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Substitutes rational values for `x_i` and `u_i`; `y0` is dropped.
    pub fn eval(&self, x: &[Rat], u: &[Rat]) -> Result<Rat> {
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exp.iter().enumerate() {
                if e < 0 && x[i].is_zero() {
                    return Err(Error::Domain(format!("x{i} = 0 with a negative power")));
                }
                let base = if e < 0 { x[i].recip() } else { x[i].clone() };
                for _ in 0..e.unsigned_abs() {
                    t *= &base;
                }
            }
            for l in m.u_labels() {
                t *= &u[l - 1];
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.y0.is_zero() {
            parts.push(if self.y0.is_one() { "y0".to_string() } else { format!("{}*y0", self.y0) });
        }
        for (m, c) in &self.terms {
            let s = if m.is_unit() {
                c.to_string()
            } else if c.is_one() {
                m.to_string()
            } else if (-c).is_one() {
                format!("-{m}")
            } else {
                format!("{c}*{m}")
            };
            parts.push(s);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        write!(f, "{out}")
    }
}

impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, o: &RingElement) -> RingElement {
        let mut r = self.clone();
        r.y0 += &o.y0;
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, o: &RingElement) -> RingElement {
        self + &(-o)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.scale(&-Rat::one())
    }
}

/// Multiplication of `y0`-free elements.
impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, o: &RingElement) -> RingElement {
        assert!(self.y0.is_zero() && o.y0.is_zero(), "y0 is additive only");
        let mut r = RingElement::zero(self.nrays);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if let Some(m) = a.mul(b) {
                    r.add_term(m, ca * cb);
                }
            }
        }
        r
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    exp: Vec<i64>,
    u: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    y0: String,
    terms: Vec<TermRepr>,
}

impl Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            y0: fmt_rat(&self.y0),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr { coeff: fmt_rat(c), exp: m.exp.clone(), u: m.u_labels() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ElementRepr::deserialize(d)?;
        let nrays = r.terms.first().map_or(0, |t| t.exp.len());
        let mut out = RingElement::zero(nrays);
        out.y0 = parse_rat(&r.y0).map_err(D::Error::custom)?;
        for t in r.terms {
            if t.exp.len() != nrays {
                return Err(D::Error::custom("inconsistent exponent lengths"));
            }
            if t.u.iter().any(|&l| l == 0 || l > 64) {
                return Err(D::Error::custom("u labels must be in 1..=64"));
            }
            let c = parse_rat(&t.coeff).map_err(D::Error::custom)?;
            out.add_term(Monomial::new(t.exp, u_mask(&t.u)), c);
        }
        Ok(out)
    }
}

/// All coefficients are positive.
pub fn is_positive(r: &RingElement) -> bool {
    r.terms().all(|(_, c)| c.is_positive())
}
