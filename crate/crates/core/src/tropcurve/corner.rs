//! Corner loci of tropical polynomials.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{primitive, rat_direction, IntVec2, Rat, RatVec2};

/// Which tropical addition is in force.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Min,
    Max,
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Convention::Min),
            "max" => Ok(Convention::Max),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

/// `f(z) = min_n (a_n + <n, z>)` (or `max` under the max convention).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPlusPoly {
    pub convention: Convention,
    #[serde(with = "rat_terms")]
    pub terms: Vec<(Rat, IntVec2)>,
}

mod rat_terms {
    use super::*;
    use crate::lattice::{fmt_rat, parse_rat};
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &[(Rat, IntVec2)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(String, IntVec2)> = t.iter().map(|(a, n)| (fmt_rat(a), *n)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(Rat, IntVec2)>, D::Error> {
        let v = Vec::<(String, IntVec2)>::deserialize(d)?;
        v.into_iter().map(|(a, n)| parse_rat(&a).map(|r| (r, n)).map_err(D::Error::custom)).collect()
    }
}

impl MinPlusPoly {
    pub fn new(convention: Convention, terms: Vec<(Rat, IntVec2)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("tropical polynomial without terms".into()));
        }
        let mut ex: Vec<IntVec2> = terms.iter().map(|t| t.1).collect();
        ex.sort();
        if ex.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("repeated exponent".into()));
        }
        Ok(MinPlusPoly { convention, terms })
    }

    pub fn eval(&self, z: &RatVec2) -> Rat {
        let vals = self.terms.iter().map(|(a, n)| a + z.dot_int(*n));
        match self.convention {
            Convention::Min => vals.min().unwrap(),
            Convention::Max => vals.max().unwrap(),
        }
    }

    /// The same function written in the min convention.
    fn as_min(&self) -> Vec<(Rat, IntVec2)> {
        match self.convention {
            Convention::Min => self.terms.clone(),
            Convention::Max => self.terms.iter().map(|(a, n)| (-a.clone(), -*n)).collect(),
        }
    }
}

/// An edge of an unparametrized plane curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlaneEdge {
    Segment { from: usize, to: usize, weight: u32 },
    Ray { from: usize, dir: IntVec2, weight: u32 },
    Line { point: RatVec2, dir: IntVec2, weight: u32 },
}

/// A weighted rational graph in the plane.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub vertices: Vec<RatVec2>,
    pub edges: Vec<PlaneEdge>,
}

impl PlaneCurve {
    /// Weighted primitive outgoing directions sum to zero at every vertex.
    pub fn is_balanced(&self) -> bool {
        let mut sums = vec![IntVec2::ZERO; self.vertices.len()];
        for e in &self.edges {
            match e {
                PlaneEdge::Segment { from, to, weight } => {
                    let d = &self.vertices[*to] - &self.vertices[*from];
                    let u = rat_direction(&d).expect("distinct endpoints").scale(*weight as i64);
                    sums[*from] = sums[*from] + u;
                    sums[*to] = sums[*to] - u;
                }
                PlaneEdge::Ray { from, dir, weight } => {
                    sums[*from] = sums[*from] + dir.scale(*weight as i64);
                }
                PlaneEdge::Line { .. } => {}
            }
        }
        sums.iter().all(IntVec2::is_zero)
    }
}

/// The corner locus: the set where at least two terms attain the optimum,
/// with weight the lattice length of the difference of the exponents that
/// bound the cell.
pub fn corner_locus(f: &MinPlusPoly) -> PlaneCurve {
    let terms = f.as_min();
    let n = terms.len();
    let val = |i: usize, z: &RatVec2| &terms[i].0 + z.dot_int(terms[i].1);
    let fmin = |z: &RatVec2| (0..n).map(|i| val(i, z)).min().unwrap();

    let mut out = PlaneCurve::default();
    let mut index: BTreeMap<RatVec2, usize> = BTreeMap::new();
    let mut vertex = |p: RatVec2, out: &mut PlaneCurve| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            out.vertices.push(p);
            out.vertices.len() - 1
        })
    };

    for i in 0..n {
        for j in i + 1..n {
            let (ai, ni) = (&terms[i].0, terms[i].1);
            let (aj, nj) = (&terms[j].0, terms[j].1);
            let diff = ni - nj;
            let (dn, _) = primitive(diff).expect("distinct exponents");
            let dir = dn.rot90();
            // base point z0 on <diff, z> = aj - ai, then z(t) = z0 + t dir
            let rhs = aj - ai;
            let z0 = if diff.x != 0 {
                RatVec2::new(&rhs / Rat::from_integer(diff.x.into()), Rat::zero())
            } else {
                RatVec2::new(Rat::zero(), &rhs / Rat::from_integer(diff.y.into()))
            };
            // feasible interval of t where term i (= term j) is minimal
            let mut lo: Option<Rat> = None;
            let mut hi: Option<Rat> = None;
            let mut empty = false;
            let mut tied = vec![i, j];
            for (k, tk) in terms.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                // g(t) = val_k - val_i along the line, must be >= 0
                let c0 = val(k, &z0) - val(i, &z0);
                let c1 = Rat::from_integer((tk.1 - ni).dot(dir).into());
                if c1.is_zero() {
                    if c0.is_negative() {
                        empty = true;
                    } else if c0.is_zero() {
                        tied.push(k);
                    }
                } else {
                    let t = -&c0 / &c1;
                    if c1.is_positive() {
                        lo = Some(lo.map_or(t.clone(), |l: Rat| l.max(t)));
                    } else {
                        hi = Some(hi.map_or(t.clone(), |h: Rat| h.min(t)));
                    }
                }
            }
            if empty {
                continue;
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l >= h {
                    continue;
                }
            }
            // only the extreme pair of the tied exponents emits the cell
            let key = |k: &usize| terms[*k].1.dot(dn);
            let kmin = tied.iter().min_by_key(|k| (key(k), terms[**k].1)).copied().unwrap();
            let kmax = tied.iter().max_by_key(|k| (key(k), terms[**k].1)).copied().unwrap();
            if !((kmin == i && kmax == j) || (kmin == j && kmax == i)) {
                continue;
            }
            let w = primitive(terms[kmax].1 - terms[kmin].1).unwrap().1 as u32;
            let edge = match (lo, hi) {
                (Some(l), Some(h)) => {
                    let a = vertex(z0.offset(dir, &l), &mut out);
                    let b = vertex(z0.offset(dir, &h), &mut out);
                    PlaneEdge::Segment { from: a, to: b, weight: w }
                }
                (Some(l), None) => PlaneEdge::Ray { from: vertex(z0.offset(dir, &l), &mut out), dir, weight: w },
                (None, Some(h)) => PlaneEdge::Ray { from: vertex(z0.offset(dir, &h), &mut out), dir: -dir, weight: w },
                (None, None) => PlaneEdge::Line { point: z0, dir, weight: w },
            };
            debug_assert!(match &edge {
                PlaneEdge::Segment { from, .. } | PlaneEdge::Ray { from, .. } => {
                    val(i, &out.vertices[*from]) == fmin(&out.vertices[*from])
                }
                PlaneEdge::Line { .. } => true,
            });
            out.edges.push(edge);
        }
    }
    out
}
