//! Parametrized tropical curves, disks and trees in the plane.
//!
//! Marked points are stored as labels on vertices rather than as literal
//! collapsed edges. A vertex carrying a label is the image of the marked edge;
//! in the abstract graph it is trivalent (two edges plus the marked one), so
//! here it has valence two.

mod canon;
mod corner;

pub use canon::{canonical_type, geometric_key};
pub use corner::{corner_locus, Convention, MinPlusPoly, PlaneCurve, PlaneEdge};

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Degree, Fan};
use crate::lattice::{primitive, wedge, IntVec2, RatVec2};

/// An edge of the curve. Bounded edges run from `tail` to `head` and `dir`
/// is the primitive direction of `pos(head) - pos(tail)`; unbounded edges
/// have no head and `dir` points to infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<usize>,
    pub dir: IntVec2,
    pub weight: u32,
}

impl Edge {
    pub fn bounded(tail: usize, head: usize, dir: IntVec2, weight: u32) -> Edge {
        Edge { tail, head: Some(head), dir, weight }
    }

    pub fn unbounded(tail: usize, dir: IntVec2, weight: u32) -> Edge {
        Edge { tail, head: None, dir, weight }
    }

    pub fn is_bounded(&self) -> bool {
        self.head.is_some()
    }

    /// Primitive direction pointing away from vertex `v`.
    pub fn outgoing(&self, v: usize) -> IntVec2 {
        if self.tail == v {
            self.dir
        } else {
            -self.dir
        }
    }

    pub fn other(&self, v: usize) -> Option<usize> {
        if self.tail == v {
            self.head
        } else {
            Some(self.tail)
        }
    }
}

/// What kind of object the curve is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CurveKind {
    /// A closed tropical curve: balanced at every vertex.
    Curve,
    /// A tropical disk: `v_out` is univalent and exempt from balancing.
    Disk { v_out: usize },
    /// A tropical tree: `e_out` is unbounded, excluded from the degree and
    /// the Maslov index.
    Tree { e_out: usize },
}

/// A marked parametrized tropical curve together with its plane positions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TropCurve {
    pub kind: CurveKind,
    pub vertices: Vec<RatVec2>,
    pub edges: Vec<Edge>,
    /// `(label, vertex)`; labels are 1-based point indices.
    pub marks: Vec<(usize, usize)>,
}

/// Multiplicity bookkeeping at one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexMult {
    pub vertex: usize,
    pub mult: u64,
}

impl TropCurve {
    pub fn new(kind: CurveKind, vertices: Vec<RatVec2>, edges: Vec<Edge>, marks: Vec<(usize, usize)>) -> TropCurve {
        TropCurve { kind, vertices, edges, marks }
    }

    /// Edge indices incident to each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.tail].push(i);
            if let Some(h) = e.head {
                inc[h].push(i);
            }
        }
        inc
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.tail == v) as usize + (e.head == Some(v)) as usize).sum()
    }

    pub fn mark_at(&self, v: usize) -> Option<usize> {
        self.marks.iter().find(|m| m.1 == v).map(|m| m.0)
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.mark_at(v).is_some()
    }

    fn balancing_exempt(&self, v: usize) -> bool {
        matches!(self.kind, CurveKind::Disk { v_out } if v_out == v)
    }

    /// Edges that count toward the degree: unbounded, excluding a tree's
    /// outgoing edge.
    pub fn ends(&self) -> impl Iterator<Item = (usize, &Edge)> {
        let skip = match self.kind {
            CurveKind::Tree { e_out } => Some(e_out),
            _ => None,
        };
        self.edges.iter().enumerate().filter(move |(i, e)| !e.is_bounded() && Some(*i) != skip)
    }

    /// The distinguished outgoing edge of a disk or tree.
    pub fn out_edge(&self) -> Option<usize> {
        match self.kind {
            CurveKind::Curve => None,
            CurveKind::Tree { e_out } => Some(e_out),
            CurveKind::Disk { v_out } => self.edges.iter().position(|e| e.tail == v_out || e.head == Some(v_out)),
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let inc = self.incidence();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &e in &inc[v] {
                if let Some(w) = self.edges[e].other(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks structure and geometry: primitive directions, bounded edges of
    /// positive length along their direction, positive weights, no
    /// unmarked vertices of valence below three (except a disk's `v_out`),
    /// connectivity and balancing.
    pub fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= nv || e.head.is_some_and(|h| h >= nv) {
                return Err(Error::InvalidCurve(format!("edge {i} has a missing endpoint")));
            }
            if primitive(e.dir).map(|p| p.0) != Ok(e.dir) {
                return Err(Error::InvalidCurve(format!("edge {i} direction {} is not primitive", e.dir)));
            }
            if e.weight == 0 {
                return Err(Error::InvalidCurve(format!("edge {i} has weight 0")));
            }
            if let Some(h) = e.head {
                let diff = &self.vertices[h] - &self.vertices[e.tail];
                match diff.multiple_of(e.dir) {
                    Some(t) if t.is_positive() => {}
                    Some(_) => return Err(Error::InvalidCurve(format!("edge {i} has non-positive length"))),
                    None => return Err(Error::InvalidCurve(format!("edge {i} is not parallel to its direction"))),
                }
            }
        }
        if let CurveKind::Tree { e_out } = self.kind {
            if self.edges.get(e_out).is_none_or(Edge::is_bounded) {
                return Err(Error::InvalidCurve("outgoing edge must be unbounded".into()));
            }
        }
        if let CurveKind::Disk { v_out } = self.kind {
            if v_out >= nv || self.valence(v_out) != 1 || self.is_marked(v_out) {
                return Err(Error::InvalidCurve("v_out must be an unmarked univalent vertex".into()));
            }
        }
        let mut labels: Vec<usize> = self.marks.iter().map(|m| m.0).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidCurve("repeated marking label".into()));
        }
        for v in 0..nv {
            let val = self.valence(v);
            let marks = self.marks.iter().filter(|m| m.1 == v).count();
            if marks > 1 {
                return Err(Error::InvalidCurve(format!("vertex {v} carries several marks")));
            }
            if !self.balancing_exempt(v) && val + marks < 3 {
                return Err(Error::InvalidCurve(format!("vertex {v} has valence {}", val + marks)));
            }
        }
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        check_balancing(self).map_err(|bad| Error::InvalidCurve(format!("balancing fails at vertices {bad:?}")))
    }

    /// Point at parameter `t` along edge `e` from its tail.
    pub fn point_on(&self, e: usize, t: &crate::lattice::Rat) -> RatVec2 {
        self.vertices[self.edges[e].tail].offset(self.edges[e].dir, t)
    }

    /// Length of a bounded edge in units of its primitive direction.
    pub fn edge_length(&self, e: usize) -> Option<crate::lattice::Rat> {
        self.edge_length_of(&self.edges[e])
    }

    pub fn edge_length_of(&self, ed: &Edge) -> Option<crate::lattice::Rat> {
        let h = ed.head?;
        (&self.vertices[h] - &self.vertices[ed.tail]).multiple_of(ed.dir)
    }
}

/// Balancing at every vertex except a disk's `v_out`. Returns the violating
/// vertices on failure.
pub fn check_balancing(c: &TropCurve) -> std::result::Result<(), Vec<usize>> {
    let mut sums = vec![IntVec2::ZERO; c.vertices.len()];
    for e in &c.edges {
        sums[e.tail] = sums[e.tail] + e.dir.scale(e.weight as i64);
        if let Some(h) = e.head {
            sums[h] = sums[h] - e.dir.scale(e.weight as i64);
        }
    }
    let bad: Vec<usize> =
        sums.iter().enumerate().filter(|(v, s)| !s.is_zero() && !c.balancing_exempt(*v)).map(|(v, _)| v).collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// The degree of a curve with respect to `fan`: the number of unbounded
/// edges (counted with weight) along each ray. Only closed curves are
/// required to have balanced degree.
pub fn degree(c: &TropCurve, fan: &Fan) -> Result<Degree> {
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut d = vec![0u32; fan.len()];
    for (_, e) in c.ends() {
        match fan.ray_index(e.dir) {
            Some(i) => d[i] += e.weight,
            None => return Err(Error::NotInFan(format!("unbounded direction {}", e.dir))),
        }
    }
    match c.kind {
        CurveKind::Curve => Degree::new(fan, d),
        _ => Ok(Degree::unbalanced(d)),
    }
}

/// First Betti number of the underlying graph.
pub fn genus(c: &TropCurve) -> Result<usize> {
    if !c.is_connected() {
        return Err(Error::Disconnected);
    }
    let bounded = c.edges.iter().filter(|e| e.is_bounded()).count();
    Ok(bounded + 1 - c.vertices.len())
}

/// Maslov index `2(|Delta| - d)` of a disk or tree.
pub fn maslov_index(c: &TropCurve, fan: &Fan) -> Result<i64> {
    let d = degree(c, fan)?;
    Ok(2 * (d.total() as i64 - c.marks.len() as i64))
}

/// `h` is injective on vertices and no two edges overlap in a segment.
pub fn is_simple(c: &TropCurve) -> bool {
    let mut seen = BTreeMap::new();
    for (i, p) in c.vertices.iter().enumerate() {
        if seen.insert(p.clone(), i).is_some() {
            return false;
        }
    }
    for i in 0..c.edges.len() {
        for j in i + 1..c.edges.len() {
            if edges_overlap(c, i, j) {
                return false;
            }
        }
    }
    true
}

fn edges_overlap(c: &TropCurve, i: usize, j: usize) -> bool {
    let (a, b) = (&c.edges[i], &c.edges[j]);
    if wedge(a.dir, b.dir) != 0 {
        return false;
    }
    let pa = &c.vertices[a.tail];
    let pb = &c.vertices[b.tail];
    if (pb - pa).cross(&a.dir.to_rat()) != Zero::zero() {
        return false;
    }
    // parametrize the common line by multiples of a.dir from pa
    let param = |p: &RatVec2| (p - pa).multiple_of(a.dir).expect("collinear");
    let interval = |e: &Edge| -> (Option<crate::lattice::Rat>, Option<crate::lattice::Rat>) {
        let s = param(&c.vertices[e.tail]);
        match e.head {
            Some(h) => {
                let t = param(&c.vertices[h]);
                if s <= t {
                    (Some(s), Some(t))
                } else {
                    (Some(t), Some(s))
                }
            }
            None => {
                if e.dir == a.dir {
                    (Some(s), None)
                } else {
                    (None, Some(s))
                }
            }
        }
    };
    let (alo, ahi) = interval(a);
    let (blo, bhi) = interval(b);
    let lo = match (alo, blo) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    };
    let hi = match (ahi, bhi) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    };
    match (lo, hi) {
        (Some(l), Some(h)) => l < h,
        _ => true,
    }
}

/// Multiplicity of each vertex: `w1 w2 |m1 ∧ m2|` at trivalent unmarked
/// vertices, 1 at marked vertices. Requires a simple curve with trivalent
/// unmarked vertices and bivalent marked ones.
pub fn vertex_multiplicities(c: &TropCurve) -> Result<Vec<VertexMult>> {
    if !is_simple(c) {
        return Err(Error::Precondition("curve is not simple".into()));
    }
    let inc = c.incidence();
    let mut out = Vec::new();
    for (v, es) in inc.iter().enumerate() {
        if c.balancing_exempt(v) {
            continue;
        }
        if c.is_marked(v) {
            if es.len() != 2 {
                return Err(Error::Precondition(format!("marked vertex {v} has valence {}", es.len())));
            }
            out.push(VertexMult { vertex: v, mult: 1 });
            continue;
        }
        if es.len() != 3 {
            return Err(Error::Precondition(format!("vertex {v} is not trivalent")));
        }
        let m: Vec<(i64, IntVec2)> = es.iter().map(|&e| (c.edges[e].weight as i64, c.edges[e].outgoing(v))).collect();
        let f = |a: usize, b: usize| (m[a].0 * m[b].0 * wedge(m[a].1, m[b].1)).unsigned_abs();
        let (x, y, z) = (f(0, 1), f(1, 2), f(2, 0));
        debug_assert!(x == y && y == z, "vertex formulas disagree at {v}");
        if x != y || y != z {
            return Err(Error::InvalidCurve(format!("vertex {v} is not balanced")));
        }
        out.push(VertexMult { vertex: v, mult: x });
    }
    Ok(out)
}

/// `Mult(h)`: product of vertex multiplicities.
pub fn mikhalkin_multiplicity(c: &TropCurve) -> Result<u64> {
    Ok(vertex_multiplicities(c)?.iter().map(|m| m.mult).product())
}

/// Per vertex `(-1)^((m-1)/2)` for odd `m`, 0 for even `m`.
pub fn welschinger_sign(mult: u64) -> i64 {
    if mult.is_multiple_of(2) {
        0
    } else if (mult / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn welschinger_multiplicity(c: &TropCurve) -> Result<i64> {
    Ok(vertex_multiplicities(c)?.iter().map(|m| welschinger_sign(m.mult)).product())
}
