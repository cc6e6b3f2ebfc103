//! Unipotent automorphisms of the coefficient ring, stored by the images of
//! the generators `z^{e_rho}`.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ring::{u_mask, Monomial, RingElement};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{IntVec2, Rat};

/// `z^{e_rho} -> z^{e_rho} * factors[rho]`; `u_i` and `y0` are fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingAutomorphism {
    rays: Vec<IntVec2>,
    factors: Vec<RingElement>,
}

impl RingAutomorphism {
    pub fn identity(fan: &Fan) -> RingAutomorphism {
        let n = fan.len();
        RingAutomorphism { rays: fan.rays().to_vec(), factors: vec![RingElement::one(n); n] }
    }

    /// Builds the automorphism with `z^{e_rho} -> z^{e_rho} (1 + N_rho)`.
    pub fn from_factors(fan: &Fan, factors: Vec<RingElement>) -> Result<RingAutomorphism> {
        let one = RingElement::one(fan.len());
        if factors.len() != fan.len() || factors.iter().any(|f| !(f - &one).in_u_ideal()) {
            return Err(Error::Unsupported("factors must be 1 plus a nilpotent".into()));
        }
        Ok(RingAutomorphism { rays: fan.rays().to_vec(), factors })
    }

    pub fn nrays(&self) -> usize {
        self.rays.len()
    }

    pub fn factor(&self, i: usize) -> &RingElement {
        &self.factors[i]
    }

    /// The image of `z^{e_i}`.
    pub fn image(&self, i: usize) -> RingElement {
        &RingElement::generator(self.nrays(), i) * &self.factors[i]
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(RingElement::is_one)
    }

    /// The image of `z^m` divided by `z^m`.
    fn monomial_factor(&self, exp: &[i64]) -> Result<RingElement> {
        let mut out = RingElement::one(self.nrays());
        for (i, &e) in exp.iter().enumerate() {
            if e != 0 {
                out = &out * &self.factors[i].pow(e)?;
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &RingElement) -> Result<RingElement> {
        let n = self.nrays();
        let mut out = RingElement::zero(n);
        out.y0 = x.y0.clone();
        for (m, c) in x.terms() {
            let f = self.monomial_factor(&m.exp)?;
            let term = RingElement::monomial(c.clone(), m.clone());
            out = &out + &(&term * &f);
        }
        Ok(out)
    }

    /// `next` after `self`.
    pub fn then(&self, next: &RingAutomorphism) -> Result<RingAutomorphism> {
        let factors =
            self.factors.iter().zip(&next.factors).map(|(f, g)| Ok(g * &next.apply(f)?)).collect::<Result<Vec<_>>>()?;
        Ok(RingAutomorphism { rays: self.rays.clone(), factors })
    }
}

impl fmt::Display for RingAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrays() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "x{i} -> {}", self.image(i))?;
        }
        Ok(())
    }
}

/// `exp(c u_I z^m (x) n)`: `z^{m'} -> z^{m'} (1 + c u_I <n, r(m')> z^m)`.
pub fn apply_generator(fan: &Fan, c: &Rat, labels: &[usize], m: &[i64], n: IntVec2) -> Result<RingAutomorphism> {
    if labels.is_empty() {
        return Err(Error::Precondition("the index set must be nonempty".into()));
    }
    if m.len() != fan.len() {
        return Err(Error::Domain("exponent length differs from the number of rays".into()));
    }
    let nr = fan.len();
    let mono = Monomial::new(m.to_vec(), u_mask(labels));
    let factors = fan
        .rays()
        .iter()
        .map(|&v| {
            let mut f = RingElement::one(nr);
            let k = n.dot(v);
            if k != 0 && !c.is_zero() {
                f.add_term(mono.clone(), c * Rat::from_integer(k.into()));
            }
            f
        })
        .collect();
    Ok(RingAutomorphism { rays: fan.rays().to_vec(), factors })
}

/// `z^m -> z^m f^{<n0, r(m)>}` for every generator.
pub fn crossing_automorphism(fan: &Fan, f: &RingElement, n0: IntVec2) -> Result<RingAutomorphism> {
    let factors = fan.rays().iter().map(|&v| f.pow(n0.dot(v))).collect::<Result<Vec<_>>>()?;
    Ok(RingAutomorphism { rays: fan.rays().to_vec(), factors })
}
