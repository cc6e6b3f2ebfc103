//! Complete two-dimensional toric fans and curve degrees.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{primitive, wedge, IntVec2, RatVec2};

/// A complete fan in `M_R = R^2`, given by its primitive ray generators
/// sorted counterclockwise starting from the direction `(1,0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "FanSpec", try_from = "FanSpec")]
pub struct Fan {
    name: String,
    rays: Vec<IntVec2>,
}

/// JSON form of a fan: `{"rays": [[1,0],[0,1],[-1,-1]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub rays: Vec<IntVec2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cones: Option<Vec<[usize; 2]>>,
}

impl From<Fan> for FanSpec {
    fn from(f: Fan) -> FanSpec {
        f.to_spec()
    }
}

impl TryFrom<FanSpec> for Fan {
    type Error = Error;
    fn try_from(s: FanSpec) -> Result<Fan> {
        Fan::from_spec(&s)
    }
}

/// Counterclockwise angular order starting at the positive x-axis.
pub fn angle_cmp(a: IntVec2, b: IntVec2) -> Ordering {
    fn half(v: IntVec2) -> u8 {
        if v.y > 0 || (v.y == 0 && v.x > 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&wedge(a, b)))
}

/// Same as [`angle_cmp`] for rational directions.
pub fn angle_cmp_rat(a: &RatVec2, b: &RatVec2) -> Ordering {
    use num_traits::{Signed, Zero};
    let half = |v: &RatVec2| {
        if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
            0u8
        } else {
            1
        }
    };
    let c = a.cross(b);
    half(a).cmp(&half(b)).then_with(|| {
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Where a direction sits relative to the fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeHit {
    /// On the ray with this index.
    Ray(usize),
    /// In the interior of the two-dimensional cone spanned by rays `i` and `i+1`.
    Cone(usize),
}

impl Fan {
    /// Builds a fan from ray generators, inferring the 2D cones as consecutive
    /// pairs in counterclockwise order.
    pub fn new(name: impl Into<String>, rays: &[IntVec2]) -> Result<Fan> {
        if rays.is_empty() {
            return Err(Error::IncompleteFan("no rays".into()));
        }
        let mut prim = Vec::with_capacity(rays.len());
        for &r in rays {
            prim.push(primitive(r)?.0);
        }
        prim.sort_by(|a, b| angle_cmp(*a, *b));
        for w in prim.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DegenerateFan(format!("duplicate ray {}", w[0])));
            }
        }
        let n = prim.len();
        if n < 3 {
            return Err(Error::IncompleteFan(format!("{n} rays cannot cover the plane")));
        }
        for i in 0..n {
            let (a, b) = (prim[i], prim[(i + 1) % n]);
            if wedge(a, b) <= 0 {
                return Err(Error::IncompleteFan(format!(
                    "the region between {a} and {b} is not a strictly convex cone"
                )));
            }
        }
        Ok(Fan { name: name.into(), rays: prim })
    }

    /// Builds a fan from rays and an explicit cone list; the cones must be
    /// exactly the consecutive counterclockwise pairs.
    pub fn with_cones(name: impl Into<String>, rays: &[IntVec2], cones: &[[usize; 2]]) -> Result<Fan> {
        let fan = Fan::new(name, rays)?;
        let prim: Vec<IntVec2> = rays.iter().map(|&r| primitive(r).map(|p| p.0)).collect::<Result<_>>()?;
        let mut given: Vec<(IntVec2, IntVec2)> = Vec::new();
        for c in cones {
            let (a, b) = match (prim.get(c[0]), prim.get(c[1])) {
                (Some(&a), Some(&b)) => (a, b),
                _ => return Err(Error::Domain(format!("cone {c:?} refers to a missing ray"))),
            };
            given.push(if wedge(a, b) > 0 { (a, b) } else { (b, a) });
        }
        given.sort();
        let mut expected: Vec<(IntVec2, IntVec2)> = (0..fan.len()).map(|i| fan.cone(i)).collect();
        expected.sort();
        if given != expected {
            return Err(Error::IncompleteFan("cones do not cover the plane exactly once".into()));
        }
        Ok(fan)
    }

    pub fn from_spec(spec: &FanSpec) -> Result<Fan> {
        let name = spec.name.clone().unwrap_or_else(|| "custom".into());
        match &spec.cones {
            Some(c) => Fan::with_cones(name, &spec.rays, c),
            None => Fan::new(name, &spec.rays),
        }
    }

    pub fn to_spec(&self) -> FanSpec {
        FanSpec { name: Some(self.name.clone()), rays: self.rays.clone(), cones: None }
    }

    /// The fan of the projective plane.
    pub fn p2() -> Fan {
        Fan::new("p2", &[IntVec2::new(1, 0), IntVec2::new(0, 1), IntVec2::new(-1, -1)]).unwrap()
    }

    /// The fan of `P^1 x P^1`.
    pub fn p1xp1() -> Fan {
        Fan::new("p1xp1", &[IntVec2::new(1, 0), IntVec2::new(-1, 0), IntVec2::new(0, 1), IntVec2::new(0, -1)]).unwrap()
    }

    /// The fan of the degree-6 del Pezzo surface (the plane blown up in three
    /// torus-fixed points).
    pub fn dp6() -> Fan {
        Fan::new(
            "dp6",
            &[
                IntVec2::new(1, 0),
                IntVec2::new(0, 1),
                IntVec2::new(-1, -1),
                IntVec2::new(1, 1),
                IntVec2::new(-1, 0),
                IntVec2::new(0, -1),
            ],
        )
        .unwrap()
    }

    pub fn builtin(name: &str) -> Option<Fan> {
        match name {
            "p2" => Some(Fan::p2()),
            "p1xp1" => Some(Fan::p1xp1()),
            "dp6" => Some(Fan::dp6()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rays(&self) -> &[IntVec2] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> IntVec2 {
        self.rays[i]
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn ray_index(&self, v: IntVec2) -> Option<usize> {
        self.rays.iter().position(|&r| r == v)
    }

    /// The `i`-th two-dimensional cone, spanned by rays `i` and `i+1`.
    pub fn cone(&self, i: usize) -> (IntVec2, IntVec2) {
        (self.rays[i], self.rays[(i + 1) % self.rays.len()])
    }

    pub fn cones(&self) -> Vec<[usize; 2]> {
        (0..self.len()).map(|i| [i, (i + 1) % self.len()]).collect()
    }

    /// Smooth iff every 2D cone is unimodular.
    pub fn is_smooth(&self) -> bool {
        (0..self.len()).all(|i| {
            let (a, b) = self.cone(i);
            wedge(a, b) == 1
        })
    }

    /// Locates a nonzero direction in the fan.
    pub fn locate(&self, d: &RatVec2) -> Result<ConeHit> {
        use num_traits::{Signed, Zero};
        if d.x.is_zero() && d.y.is_zero() {
            return Err(Error::Domain("zero direction".into()));
        }
        for (i, &r) in self.rays.iter().enumerate() {
            let rv = r.to_rat();
            if rv.cross(d).is_zero() && rv.dot(d).is_positive() {
                return Ok(ConeHit::Ray(i));
            }
        }
        for i in 0..self.len() {
            let (a, b) = self.cone(i);
            if a.to_rat().cross(d).is_positive() && d.cross(&b.to_rat()).is_positive() {
                return Ok(ConeHit::Cone(i));
            }
        }
        Err(Error::IncompleteFan(format!("direction {d} in no cone")))
    }

    /// Sum of rays weighted by the coefficients.
    pub fn image(&self, coeffs: &[i64]) -> IntVec2 {
        coeffs.iter().zip(&self.rays).fold(IntVec2::ZERO, |acc, (&c, &r)| acc + r.scale(c))
    }

    /// The anticanonical degree `sum_rho t_rho`, when it is balanced.
    pub fn anticanonical(&self) -> Result<Degree> {
        Degree::new(self, vec![1; self.len()])
    }

    /// The degree `d * sum_rho t_rho` on the projective plane; on other fans
    /// the integer is a multiple of the anticanonical class.
    pub fn multiple(&self, d: u32) -> Result<Degree> {
        Degree::new(self, vec![d; self.len()])
    }
}

impl fmt::Display for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.name)?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// A curve degree: a count `d_rho >= 0` per ray, balanced so that
/// `sum d_rho rho = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree {
    #[serde(rename = "d")]
    coeffs: Vec<u32>,
}

impl Degree {
    pub fn new(fan: &Fan, coeffs: Vec<u32>) -> Result<Degree> {
        if coeffs.len() != fan.len() {
            return Err(Error::Domain(format!(
                "degree has {} entries but the fan has {} rays",
                coeffs.len(),
                fan.len()
            )));
        }
        let c: Vec<i64> = coeffs.iter().map(|&x| x as i64).collect();
        let s = fan.image(&c);
        if !s.is_zero() {
            return Err(Error::Unbalanced(format!("sum of rays is {s}")));
        }
        Ok(Degree { coeffs })
    }

    /// A degree class that need not be balanced, as carried by disks and
    /// trees.
    pub fn unbalanced(coeffs: Vec<u32>) -> Degree {
        Degree { coeffs }
    }

    pub fn is_balanced(&self, fan: &Fan) -> bool {
        let c: Vec<i64> = self.coeffs.iter().map(|&x| x as i64).collect();
        self.coeffs.len() == fan.len() && fan.image(&c).is_zero()
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn get(&self, i: usize) -> u32 {
        self.coeffs[i]
    }

    /// `|Delta|`, the number of unbounded edges.
    pub fn total(&self) -> u32 {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

/// `|Delta| = sum_rho d_rho`.
pub fn degree_total(d: &Degree) -> u32 {
    d.total()
}

/// The lattice polygon with outward edge normals the rays of the fan, the
/// edge normal to `rho` having lattice length `d_rho`. Vertices are listed
/// counterclockwise, starting at the lexicographically least one, which is
/// translated to the origin.
pub fn newton_polygon(fan: &Fan, d: &Degree) -> Result<Vec<IntVec2>> {
    if d.coeffs.len() != fan.len() {
        return Err(Error::Domain("degree does not match fan".into()));
    }
    let c: Vec<i64> = d.coeffs.iter().map(|&x| x as i64).collect();
    if !fan.image(&c).is_zero() {
        return Err(Error::Unbalanced("degree is not balanced".into()));
    }
    if d.is_zero() {
        return Ok(vec![IntVec2::ZERO]);
    }
    let mut verts = Vec::new();
    let mut p = IntVec2::ZERO;
    for (i, &r) in fan.rays().iter().enumerate() {
        if d.coeffs[i] > 0 {
            verts.push(p);
            p = p + r.rot90().scale(d.coeffs[i] as i64);
        }
    }
    debug_assert!(p.is_zero());
    let start = (0..verts.len()).min_by_key(|&i| verts[i]).unwrap();
    let base = verts[start];
    verts.rotate_left(start);
    Ok(verts.into_iter().map(|v| v - base).collect())
}
