//! Walls, diagrams built from Maslov index 0 trees, path-ordered crossing and
//! the loop test at singular points.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::auto::{crossing_automorphism, RingAutomorphism};
use super::ring::{u_labels, u_mask, Monomial, RingElement};
use crate::enumeration::{enumerate_maslov0_trees, EnumOptions, TreeSolution};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{primitive, rat, IntVec2, Rat, RatVec2};

pub const DIAGRAM_SCHEMA: &str = "tropenum.diagram/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Ray,
    Line,
}

/// A wall with support `base - R_{>=0} r(m0)` (or the full line) and a
/// function in `Q[z^{m0}] (x) R_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub base: RatVec2,
    pub carrier: Carrier,
    pub exponent: Vec<i64>,
    /// Primitive direction of the support, pointing along `-r(m0)`.
    pub dir: IntVec2,
    pub f: RingElement,
}

impl Wall {
    pub fn new(fan: &Fan, base: RatVec2, carrier: Carrier, exponent: Vec<i64>, f: RingElement) -> Result<Wall> {
        let r = fan.image(&exponent);
        if r.is_zero() {
            return Err(Error::Domain("wall exponent maps to zero".into()));
        }
        let (dir, _) = primitive(-r)?;
        Ok(Wall { base, carrier, exponent, dir, f })
    }

    pub fn normal(&self) -> IntVec2 {
        self.dir.rot90()
    }

    /// Labels of the `u_i` in the non-unit part of `f`.
    pub fn labels(&self) -> Vec<usize> {
        u_labels(self.f.terms().filter(|(m, _)| !m.is_unit()).fold(0, |acc, (m, _)| acc | m.u))
    }

    /// Whether `p` lies on the support.
    pub fn contains(&self, p: &RatVec2) -> bool {
        let d = p - &self.base;
        if d.x.is_zero() && d.y.is_zero() {
            return true;
        }
        match d.multiple_of(self.dir) {
            Some(s) => self.carrier == Carrier::Line || s.is_positive(),
            None => false,
        }
    }

    /// Lower bound on the sup-norm distance from `p` to the support, zero
    /// exactly when `p` lies on it.
    pub fn distance_bound(&self, p: &RatVec2) -> Rat {
        if self.contains(p) {
            return Rat::zero();
        }
        let n = self.normal();
        let off = (p - &self.base).dot_int(n).abs();
        if !off.is_zero() {
            return off / rat(n.x.abs() + n.y.abs());
        }
        let d = p - &self.base;
        d.x.abs().max(d.y.abs())
    }

    /// Same support line and direction.
    pub fn co_supported(&self, o: &Wall) -> bool {
        self.dir == o.dir && (&o.base - &self.base).dot_int(self.normal()).is_zero()
    }
}

/// Side from which a path crosses a wall, relative to `normal()`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingSign {
    /// `<normal, path'> > 0`.
    WithNormal,
    /// `<normal, path'> < 0`.
    AgainstNormal,
}

/// `z^m -> z^m f^{<n0, r(m)>}` with `n0 = -+normal` so that `<n0, path'> < 0`.
pub fn wall_crossing(fan: &Fan, w: &Wall, sign: CrossingSign) -> Result<RingAutomorphism> {
    let n0 = match sign {
        CrossingSign::WithNormal => -w.normal(),
        CrossingSign::AgainstNormal => w.normal(),
    };
    crossing_automorphism(fan, &w.f, n0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteringDiagram {
    pub schema: String,
    pub fan: Fan,
    pub walls: Vec<Wall>,
    pub marked_points: Vec<RatVec2>,
}

/// One wall per Maslov index 0 tree, with `f = 1 + w_out Mult u_I z^Delta`.
pub fn build_diagram(fan: &Fan, points: &[RatVec2], opts: EnumOptions) -> Result<ScatteringDiagram> {
    let trees = enumerate_maslov0_trees(fan, points, opts)?;
    diagram_from_trees(fan, points, &trees)
}

pub fn diagram_from_trees(fan: &Fan, points: &[RatVec2], trees: &[TreeSolution]) -> Result<ScatteringDiagram> {
    let n = fan.len();
    let mut walls = Vec::with_capacity(trees.len());
    for t in trees {
        let exponent: Vec<i64> = t.mono.delta.iter().map(|&d| d as i64).collect();
        let mut f = RingElement::one(n);
        let c = Rat::from_integer((t.out_weight as u64 * t.mono.coeff).into());
        f.add_term(Monomial::new(exponent.clone(), u_mask(&t.mono.marks)), c);
        let w = Wall::new(fan, t.base.clone(), Carrier::Ray, exponent, f)?;
        if w.dir != t.dir {
            return Err(Error::Property(format!("tree out-direction {} differs from -r(Delta)", t.dir)));
        }
        walls.push(w);
    }
    Ok(ScatteringDiagram { schema: DIAGRAM_SCHEMA.into(), fan: fan.clone(), walls, marked_points: points.to_vec() })
}

struct Hit {
    t: Rat,
    wall: usize,
    sign: CrossingSign,
}

/// Crossing of the segment `a -> b` with the wall, as the parameter along
/// the segment. Touching the wall anywhere but transversally in the open
/// segment is an error.
fn segment_hit(w: &Wall, a: &RatVec2, b: &RatVec2) -> Result<Option<(Rat, CrossingSign)>> {
    let d = b - a;
    let u = w.dir.to_rat();
    let den = d.cross(&u);
    let ba = &w.base - a;
    if den.is_zero() {
        if !ba.cross(&u).is_zero() {
            return Ok(None);
        }
        let overlaps = match w.carrier {
            Carrier::Line => true,
            // the segment's end parameters along the wall
            Carrier::Ray => {
                let sa = (a - &w.base).dot(&u);
                let sb = (b - &w.base).dot(&u);
                !sa.is_negative() || !sb.is_negative()
            }
        };
        if overlaps {
            return Err(Error::NonTransverse(format!("path runs along a wall from {}", w.base)));
        }
        return Ok(None);
    }
    let t = ba.cross(&u) / &den;
    let s = ba.cross(&d) / &den;
    if t.is_negative() || t > Rat::one() {
        return Ok(None);
    }
    if w.carrier == Carrier::Ray {
        if s.is_negative() {
            return Ok(None);
        }
        if s.is_zero() {
            return Err(Error::NonTransverse(format!("path meets the end of a wall at {}", w.base)));
        }
    }
    if t.is_zero() || t.is_one() {
        return Err(Error::NonTransverse("path corner lies on a wall".into()));
    }
    let sign = if d.dot_int(w.normal()).is_positive() { CrossingSign::WithNormal } else { CrossingSign::AgainstNormal };
    Ok(Some((t, sign)))
}

/// The ordered composition of the crossings along a polyline.
pub fn path_automorphism(d: &ScatteringDiagram, path: &[RatVec2]) -> Result<RingAutomorphism> {
    let mut acc = RingAutomorphism::identity(&d.fan);
    for (i, p) in path.iter().enumerate() {
        let is_end = i == 0 || i + 1 == path.len();
        if is_end && d.walls.iter().any(|w| w.contains(p)) {
            return Err(Error::NonTransverse(format!("path endpoint {p} lies on a wall")));
        }
    }
    for seg in path.windows(2) {
        let mut hits = Vec::new();
        for (i, w) in d.walls.iter().enumerate() {
            if let Some((t, sign)) = segment_hit(w, &seg[0], &seg[1])? {
                hits.push(Hit { t, wall: i, sign });
            }
        }
        hits.sort_by(|a, b| a.t.cmp(&b.t).then(a.wall.cmp(&b.wall)));
        for pair in hits.windows(2) {
            if pair[0].t == pair[1].t && !d.walls[pair[0].wall].co_supported(&d.walls[pair[1].wall]) {
                return Err(Error::NonTransverse("path passes through a singular point".into()));
            }
        }
        for h in &hits {
            acc = acc.then(&wall_crossing(&d.fan, &d.walls[h.wall], h.sign)?)?;
        }
    }
    Ok(acc)
}

/// Points where walls end or cross.
pub fn singular_points(d: &ScatteringDiagram) -> Vec<RatVec2> {
    let mut out: Vec<RatVec2> = d.walls.iter().map(|w| w.base.clone()).collect();
    for (i, a) in d.walls.iter().enumerate() {
        for b in &d.walls[i + 1..] {
            let ua = a.dir.to_rat();
            let ub = b.dir.to_rat();
            let den = ua.cross(&ub);
            if den.is_zero() {
                continue;
            }
            let diff = &b.base - &a.base;
            let s = diff.cross(&ub) / &den;
            let r = diff.cross(&ua) / &den;
            let ok = |c: Carrier, v: &Rat| c == Carrier::Line || !v.is_negative();
            if ok(a.carrier, &s) && ok(b.carrier, &r) {
                out.push(&a.base + &(&ua * &s));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Result of the loop test at one singular point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularCheck {
    pub point: RatVec2,
    pub marked: bool,
    pub walls: Vec<usize>,
    pub identity: bool,
    /// The loop automorphism when it is not the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphism: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub checks: Vec<SingularCheck>,
    pub consistent: bool,
}

impl ConsistencyReport {
    pub fn failures(&self) -> impl Iterator<Item = &SingularCheck> {
        self.checks.iter().filter(|c| !c.marked && !c.identity)
    }
}

const LOOP_SHAPES: [[(i64, i64); 4]; 4] = [
    [(2, 1), (-1, 2), (-2, -1), (1, -2)],
    [(3, 1), (-1, 3), (-3, -1), (1, -3)],
    [(3, 2), (-2, 3), (-3, -2), (2, -3)],
    [(5, 2), (-2, 5), (-5, -2), (2, -5)],
];

/// A small counterclockwise loop around `p` that meets only the walls
/// through `p`.
pub fn small_loop(d: &ScatteringDiagram, p: &RatVec2, shape: usize) -> Vec<RatVec2> {
    let mut delta = d.walls.iter().map(|w| w.distance_bound(p)).filter(|r| !r.is_zero()).min().unwrap_or_else(Rat::one);
    for q in singular_points(d) {
        let diff = &q - p;
        let dist = diff.x.abs().max(diff.y.abs());
        if !dist.is_zero() && dist < delta {
            delta = dist;
        }
    }
    let corners = LOOP_SHAPES[shape % LOOP_SHAPES.len()];
    let scale = delta / rat(2 * corners[0].0);
    let mut path: Vec<RatVec2> = corners.iter().map(|&(x, y)| p + &RatVec2::from_ints(x, y).scale(&scale)).collect();
    path.push(path[0].clone());
    path
}

/// Loop automorphism around `p`, retrying a few loop shapes when a corner
/// happens to lie on a wall.
pub fn loop_automorphism(d: &ScatteringDiagram, p: &RatVec2) -> Result<RingAutomorphism> {
    let mut last = None;
    for shape in 0..LOOP_SHAPES.len() {
        match path_automorphism(d, &small_loop(d, p, shape)) {
            Ok(a) => return Ok(a),
            Err(e @ Error::NonTransverse(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Loop test at every singular point; marked points are recorded but not
/// required to pass.
pub fn check_consistency(d: &ScatteringDiagram) -> Result<ConsistencyReport> {
    let mut checks = Vec::new();
    for p in singular_points(d) {
        let a = loop_automorphism(d, &p)?;
        let walls = (0..d.walls.len()).filter(|&i| d.walls[i].contains(&p)).collect();
        let identity = a.is_identity();
        checks.push(SingularCheck {
            marked: d.marked_points.contains(&p),
            point: p,
            walls,
            identity,
            automorphism: (!identity).then(|| a.to_string()),
        });
    }
    let consistent = checks.iter().all(|c| c.marked || c.identity);
    Ok(ConsistencyReport { checks, consistent })
}

impl ScatteringDiagram {
    /// The same diagram without wall `i`.
    pub fn without_wall(&self, i: usize) -> ScatteringDiagram {
        let mut d = self.clone();
        d.walls.remove(i);
        d
    }

    /// Indices of walls starting at a collision away from the marked points.
    pub fn scattered_walls(&self) -> Vec<usize> {
        (0..self.walls.len())
            .filter(|&i| self.walls[i].labels().len() >= 2 && !self.marked_points.contains(&self.walls[i].base))
            .collect()
    }

    pub fn is_singular(&self, p: &RatVec2) -> bool {
        singular_points(self).binary_search(p).is_ok()
    }

    /// Whether `p` lies on the support of some wall.
    pub fn on_support(&self, p: &RatVec2) -> bool {
        self.walls.iter().any(|w| w.contains(p))
    }
}

/// Orders walls by base, then direction.
pub fn wall_order(a: &Wall, b: &Wall) -> Ordering {
    (&a.base, a.dir, &a.exponent).cmp(&(&b.base, b.dir, &b.exponent))
}
