//! Rooted partial tropical trees.
//!
//! A family is a rooted tree whose leaves are ends (unbounded edges along fan
//! rays) and marked points, and whose root emits an outgoing edge in a
//! direction forced by balancing. If it has `e` ends and `m` marks, its
//! positions move in an `(e - m)`-dimensional family. For rigid curves
//! through generic points every such subtree has dimension 0 or 1, so only
//! those are kept:
//!
//! * dimension 0: the root is a fixed point and the outgoing edge a fixed ray;
//! * dimension 1: the outgoing rays are parallel and sweep an open convex
//!   region, each point of which lies on exactly one of them.

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{primitive, wedge, IntVec2, Rat, RatVec2};
use crate::tropcurve::{CurveKind, Edge, TropCurve};

/// Open half-plane `<n, X> > c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane {
    pub n: IntVec2,
    pub c: Rat,
}

impl HalfPlane {
    fn value(&self, p: &RatVec2) -> Rat {
        p.dot_int(self.n) - &self.c
    }
}

/// Where a point sits with respect to an open region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

pub fn membership(region: &[HalfPlane], p: &RatVec2) -> Membership {
    let mut boundary = false;
    for h in region {
        let v = h.value(p);
        if v.is_negative() {
            return Membership::Outside;
        }
        if v.is_zero() {
            boundary = true;
        }
    }
    if boundary {
        Membership::Boundary
    } else {
        Membership::Inside
    }
}

/// Open interval `(lo, hi)` of parameters `t > 0` with `o + t u` in the region.
fn ray_interval(region: &[HalfPlane], o: &RatVec2, u: IntVec2) -> Option<(Rat, Option<Rat>)> {
    let mut lo = Rat::zero();
    let mut hi: Option<Rat> = None;
    for h in region {
        // <n, o> - c + t <n, u> > 0
        let a = h.value(o);
        let b = Rat::from_integer(h.n.dot(u).into());
        if b.is_zero() {
            if !a.is_positive() {
                return None;
            }
        } else {
            let t = -&a / &b;
            if b.is_positive() {
                if t > lo {
                    lo = t;
                }
            } else {
                hi = Some(match hi {
                    Some(h0) if h0 <= t => h0,
                    _ => t,
                });
            }
        }
    }
    match &hi {
        Some(h) if *h <= lo => None,
        _ => Some((lo, hi)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    /// An unbounded end along ray `rho`.
    End(usize),
    /// The marked point with this 1-based label on the outgoing edge of `child`.
    Mark { child: usize, label: usize },
    /// A trivalent vertex joining two families; `a` has dimension 0.
    Join { a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct Family {
    pub node: Node,
    /// Number of ends per ray.
    pub delta: Vec<u32>,
    /// Bit `i` set iff the point with label `i + 1` is used.
    pub marks: u64,
    /// Primitive direction of the outgoing edge.
    pub dir: IntVec2,
    pub weight: u32,
    /// Root position, for dimension 0.
    pub root: Option<RatVec2>,
    /// Region swept by the outgoing rays, for dimension 1 (empty: the plane).
    pub region: Vec<HalfPlane>,
    /// Product of the vertex multiplicities.
    pub mult: u64,
    /// Product of the per-vertex Welschinger signs.
    pub wsign: i64,
}

impl Family {
    pub fn total(&self) -> u32 {
        self.delta.iter().sum()
    }

    pub fn mark_count(&self) -> u32 {
        self.marks.count_ones()
    }

    pub fn dim(&self) -> u32 {
        self.total() - self.mark_count()
    }

    pub fn size(&self) -> usize {
        (self.total() + self.mark_count()) as usize
    }

    pub fn labels(&self) -> Vec<usize> {
        (0..64).filter(|i| self.marks >> i & 1 == 1).map(|i| i + 1).collect()
    }
}

/// Limits on the families to generate.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Componentwise bound on the ends.
    pub delta: Vec<u32>,
    /// Bound on the total number of ends.
    pub total: u32,
}

/// Arena of all families within the limits, generated by size.
pub struct FamilyStore<'a> {
    pub fan: &'a Fan,
    pub points: &'a [RatVec2],
    pub families: Vec<Family>,
    by_size: Vec<Vec<usize>>,
}

impl<'a> FamilyStore<'a> {
    pub fn build(fan: &'a Fan, points: &'a [RatVec2], limits: &Limits, jobs: usize) -> Result<Self> {
        if points.len() > 63 {
            return Err(Error::Unsupported("more than 63 marked points".into()));
        }
        let mut store = FamilyStore { fan, points, families: Vec::new(), by_size: vec![Vec::new(); 2] };
        for (r, &v) in fan.rays().iter().enumerate() {
            if limits.delta[r] == 0 || limits.total == 0 {
                continue;
            }
            let mut delta = vec![0; fan.len()];
            delta[r] = 1;
            store.push(Family {
                node: Node::End(r),
                delta,
                marks: 0,
                dir: -v,
                weight: 1,
                root: None,
                region: Vec::new(),
                mult: 1,
                wsign: 1,
            });
        }
        let max_size = (2 * limits.total as usize).max(1) + 1;
        for s in 2..=max_size {
            let mut fresh = Vec::new();
            // marks on dimension-1 families of size s - 1
            for &f in store.by_size.get(s - 1).into_iter().flatten() {
                let fam = &store.families[f];
                if fam.dim() != 1 {
                    continue;
                }
                for (i, p) in points.iter().enumerate() {
                    if fam.marks >> i & 1 == 1 {
                        continue;
                    }
                    match membership(&fam.region, p) {
                        Membership::Inside => fresh.push(Family {
                            node: Node::Mark { child: f, label: i + 1 },
                            delta: fam.delta.clone(),
                            marks: fam.marks | 1 << i,
                            dir: fam.dir,
                            weight: fam.weight,
                            root: Some(p.clone()),
                            region: Vec::new(),
                            mult: fam.mult,
                            wsign: fam.wsign,
                        }),
                        Membership::Boundary => {
                            return Err(Error::Genericity(format!(
                                "point {} lies on the boundary of a family region",
                                i + 1
                            )))
                        }
                        Membership::Outside => {}
                    }
                }
            }
            let pairs: Vec<(usize, usize)> = (1..s)
                .flat_map(|sa| {
                    let sb = s - sa;
                    let st = &store;
                    st.by_size.get(sa).into_iter().flatten().filter(move |&&a| st.families[a].dim() == 0).flat_map(
                        move |&a| {
                            st.by_size
                                .get(sb)
                                .into_iter()
                                .flatten()
                                .filter(move |&&b| {
                                    let (fa, fb) = (&st.families[a], &st.families[b]);
                                    (fb.dim() == 1 || a < b)
                                        && fa.marks & fb.marks == 0
                                        && compatible(&fa.delta, &fb.delta, limits)
                                })
                                .map(move |&b| (a, b))
                        },
                    )
                })
                .collect();
            let joined: Vec<Result<Option<Family>>> = if jobs > 1 {
                pairs.par_iter().map(|&(a, b)| store.join(a, b)).collect()
            } else {
                pairs.iter().map(|&(a, b)| store.join(a, b)).collect()
            };
            for j in joined {
                if let Some(f) = j? {
                    fresh.push(f);
                }
            }
            for f in fresh {
                store.push(f);
            }
        }
        Ok(store)
    }

    fn push(&mut self, f: Family) {
        let s = f.size();
        if self.by_size.len() <= s {
            self.by_size.resize(s + 1, Vec::new());
        }
        self.by_size[s].push(self.families.len());
        self.families.push(f);
    }

    fn join(&self, a: usize, b: usize) -> Result<Option<Family>> {
        let (fa, fb) = (&self.families[a], &self.families[b]);
        let flow = fa.dir.scale(fa.weight as i64) + fb.dir.scale(fb.weight as i64);
        if flow.is_zero() {
            return Ok(None);
        }
        let cross = wedge(fa.dir, fb.dir);
        let (dir, weight) = primitive(flow)?;
        let delta: Vec<u32> = fa.delta.iter().zip(&fb.delta).map(|(x, y)| x + y).collect();
        let vmult = fa.weight as u64 * fb.weight as u64 * cross.unsigned_abs();
        let base = Family {
            node: Node::Join { a, b },
            delta,
            marks: fa.marks | fb.marks,
            dir,
            weight: weight as u32,
            root: None,
            region: Vec::new(),
            mult: fa.mult * fb.mult * vmult,
            wsign: fa.wsign * fb.wsign * crate::tropcurve::welschinger_sign(vmult),
        };
        let oa = fa.root.as_ref().expect("dimension-0 family has a root");
        if fb.dim() == 0 {
            let ob = fb.root.as_ref().expect("dimension-0 family has a root");
            let d = ob - oa;
            if cross == 0 {
                if d.cross(&fa.dir.to_rat()).is_zero() {
                    let ta = d.dot_int(fa.dir);
                    let tb = (oa - ob).dot_int(fb.dir);
                    if ta.is_positive() || tb.is_positive() {
                        return Err(Error::Genericity("collinear overlapping rays".into()));
                    }
                }
                return Ok(None);
            }
            // oa + t ua = ob + s ub
            let c = Rat::from_integer(cross.into());
            let t = d.cross(&fb.dir.to_rat()) / &c;
            let s = d.cross(&fa.dir.to_rat()) / &c;
            if t.is_zero() || s.is_zero() {
                return Err(Error::Genericity("a ray passes through a root".into()));
            }
            if t.is_negative() || s.is_negative() {
                return Ok(None);
            }
            return Ok(Some(Family { root: Some(oa.offset(fa.dir, &t)), ..base }));
        }
        let Some((lo, hi)) = ray_interval(&fb.region, oa, fa.dir) else {
            return Ok(None);
        };
        if cross == 0 {
            return Ok(None);
        }
        let ua = fa.dir;
        let na = ua.rot90();
        let sigma = na.dot(dir).signum();
        let mut region = vec![HalfPlane { n: na.scale(sigma), c: oa.dot_int(na) * Rat::from_integer(sigma.into()) }];
        let nu = dir.rot90();
        let k = nu.dot(ua);
        let tau = k.signum();
        let base_c = oa.dot_int(nu) * Rat::from_integer(tau.into());
        let kabs = Rat::from_integer(k.abs().into());
        region.push(HalfPlane { n: nu.scale(tau), c: &base_c + &lo * &kabs });
        if let Some(h) = hi {
            region.push(HalfPlane { n: nu.scale(-tau), c: -(&base_c + &h * &kabs) });
        }
        Ok(Some(Family { region, ..base }))
    }

    /// Builds the curve of family `f`: a closed curve when `cap` is an end
    /// direction from the root, a tree when the outgoing edge is kept, or a
    /// disk ending at `q`.
    pub fn realize(&self, f: usize, finish: Finish) -> Result<TropCurve> {
        let mut b = Builder::default();
        match finish {
            Finish::Curve | Finish::Tree => {
                let fam = &self.families[f];
                let r = self.emit(f, None, &mut b)?.expect("dimension-0 family has a root");
                b.edges.push(Edge::unbounded(r, fam.dir, fam.weight));
                let kind = if finish == Finish::Curve {
                    CurveKind::Curve
                } else {
                    CurveKind::Tree { e_out: b.edges.len() - 1 }
                };
                Ok(TropCurve::new(kind, b.vertices, b.edges, b.marks))
            }
            Finish::Disk(q) => {
                let v = b.vertex(q.clone());
                let child = self.emit(f, Some(q), &mut b)?;
                self.connect(child, f, v, &mut b)?;
                Ok(TropCurve::new(CurveKind::Disk { v_out: v }, b.vertices, b.edges, b.marks))
            }
        }
    }

    /// Emits the subtree of `f`; a dimension-1 family is pinned so that its
    /// outgoing ray passes through `pin`. Returns the root vertex, or `None`
    /// for an end.
    fn emit(&self, f: usize, pin: Option<&RatVec2>, b: &mut Builder) -> Result<Option<usize>> {
        let fam = &self.families[f];
        match &fam.node {
            Node::End(_) => Ok(None),
            Node::Mark { child, label } => {
                let p = fam.root.clone().unwrap();
                let v = b.vertex(p.clone());
                b.marks.push((*label, v));
                let c = self.emit(*child, Some(&p), b)?;
                self.connect(c, *child, v, b)?;
                Ok(Some(v))
            }
            Node::Join { a, b: bb } => {
                let fa = &self.families[*a];
                let x = match &fam.root {
                    Some(x) => x.clone(),
                    None => {
                        let pin = pin.expect("dimension-1 family needs a pin");
                        let oa = fa.root.as_ref().unwrap();
                        let d = pin - oa;
                        let c = Rat::from_integer(wedge(fa.dir, fam.dir).into());
                        let r = d.cross(&fam.dir.to_rat()) / &c;
                        oa.offset(fa.dir, &r)
                    }
                };
                let v = b.vertex(x.clone());
                let ra = self.emit(*a, None, b)?;
                self.connect(ra, *a, v, b)?;
                let rb = self.emit(*bb, Some(&x), b)?;
                self.connect(rb, *bb, v, b)?;
                Ok(Some(v))
            }
        }
    }

    fn connect(&self, child: Option<usize>, f: usize, parent: usize, b: &mut Builder) -> Result<()> {
        let fam = &self.families[f];
        match child {
            Some(c) => b.edges.push(Edge::bounded(c, parent, fam.dir, fam.weight)),
            None => b.edges.push(Edge::unbounded(parent, -fam.dir, fam.weight)),
        }
        Ok(())
    }

    pub fn by_size(&self, s: usize) -> &[usize] {
        self.by_size.get(s).map_or(&[], Vec::as_slice)
    }
}

fn compatible(a: &[u32], b: &[u32], limits: &Limits) -> bool {
    let mut total = 0;
    for i in 0..a.len() {
        let s = a[i] + b[i];
        if s > limits.delta[i] {
            return false;
        }
        total += s;
    }
    total <= limits.total
}

/// How to close off a family when realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finish<'q> {
    Curve,
    Tree,
    Disk(&'q RatVec2),
}

#[derive(Default)]
struct Builder {
    vertices: Vec<RatVec2>,
    edges: Vec<Edge>,
    marks: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, p: RatVec2) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }
}
