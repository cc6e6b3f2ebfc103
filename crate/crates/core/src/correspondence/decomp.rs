//! Polyhedral decompositions of the plane containing tropical curves in their
//! one-skeleton.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{angle_cmp, Fan};
use crate::lattice::{common_denominator, rat_direction, IntVec2, Rat, RatVec2};
use crate::tropcurve::TropCurve;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompEdge {
    pub from: usize,
    /// `None` for an unbounded edge.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<usize>,
    /// Primitive direction from `from` toward `to` (or to infinity).
    pub dir: IntVec2,
}

/// A two-dimensional cell, with its boundary vertices in counterclockwise
/// order and the generators of its recession cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub recession: Vec<IntVec2>,
}

/// A cell of any dimension as the Minkowski sum `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub vertices: Vec<RatVec2>,
    pub rays: Vec<IntVec2>,
}

impl Cell {
    pub fn new(mut vertices: Vec<RatVec2>, mut rays: Vec<IntVec2>) -> Cell {
        vertices.sort();
        vertices.dedup();
        rays.sort();
        rays.dedup();
        Cell { vertices, rays }
    }
}

/// Outcome of the five structural checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// The curves lie in the one-skeleton.
    pub curves_in_skeleton: bool,
    /// Every marked point is a vertex.
    pub points_are_vertices: bool,
    /// All vertices are rational.
    pub rational: bool,
    /// Every cell contains a vertex.
    pub cells_have_vertices: bool,
    /// Every recession cone is a cone of the fan.
    pub recession_in_fan: bool,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.curves_in_skeleton
            && self.points_are_vertices
            && self.rational
            && self.cells_have_vertices
            && self.recession_in_fan
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDecomp {
    pub schema: String,
    pub vertices: Vec<RatVec2>,
    pub edges: Vec<DecompEdge>,
    pub faces: Vec<Face>,
    /// Vertex index of each marked point.
    pub points: Vec<usize>,
    pub report: PropertyReport,
}

pub const DECOMP_SCHEMA: &str = "tropenum.decomposition/1";

impl PolyDecomp {
    /// All cells: vertices, edges and faces.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out: Vec<Cell> = self.vertices.iter().map(|v| Cell::new(vec![v.clone()], vec![])).collect();
        for e in &self.edges {
            out.push(match e.to {
                Some(t) => Cell::new(vec![self.vertices[e.from].clone(), self.vertices[t].clone()], vec![]),
                None => Cell::new(vec![self.vertices[e.from].clone()], vec![e.dir]),
            });
        }
        for f in &self.faces {
            out.push(Cell::new(f.vertices.iter().map(|&v| self.vertices[v].clone()).collect(), f.recession.clone()));
        }
        out.sort();
        out
    }

    pub fn vertex_index(&self, p: &RatVec2) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }
}

/// `p + t d` for `t` in `[0, len]`, or `[0, inf)` when `len` is `None`.
#[derive(Clone, Debug)]
struct Piece {
    base: RatVec2,
    dir: IntVec2,
    len: Option<Rat>,
    from_curve: bool,
}

impl Piece {
    fn segment(a: &RatVec2, b: &RatVec2, from_curve: bool) -> Piece {
        let dir = rat_direction(&(b - a)).expect("segment of positive length");
        let len = (b - a).multiple_of(dir).unwrap();
        Piece { base: a.clone(), dir, len: Some(len), from_curve }
    }

    fn ray(a: &RatVec2, dir: IntVec2, from_curve: bool) -> Piece {
        Piece { base: a.clone(), dir, len: None, from_curve }
    }

    fn contains_param(&self, t: &Rat) -> bool {
        !t.is_negative() && self.len.as_ref().is_none_or(|l| t <= l)
    }

    /// Parameter of `p` if it lies on the piece.
    fn param_of(&self, p: &RatVec2) -> Option<Rat> {
        let t = (p - &self.base).multiple_of(self.dir)?;
        self.contains_param(&t).then_some(t)
    }

    fn end(&self) -> Option<RatVec2> {
        self.len.as_ref().map(|l| self.base.offset(self.dir, l))
    }
}

fn pieces_of_curve(c: &TropCurve) -> Vec<Piece> {
    c.edges
        .iter()
        .map(|e| match e.head {
            Some(h) => Piece::segment(&c.vertices[e.tail], &c.vertices[h], true),
            None => Piece::ray(&c.vertices[e.tail], e.dir, true),
        })
        .collect()
}

/// Overlays the curves with translates of the fan at every marked point
/// (at the origin when there are none), then checks the five properties.
pub fn build_decomposition(curves: &[TropCurve], fan: &Fan, points: &[RatVec2]) -> Result<PolyDecomp> {
    let mut pieces: Vec<Piece> = curves.iter().flat_map(pieces_of_curve).collect();
    let origin = [RatVec2::zero()];
    let centers: &[RatVec2] = if points.is_empty() { &origin } else { points };
    for p in centers {
        for &r in fan.rays() {
            pieces.push(Piece::ray(p, r, false));
        }
    }
    let mut d = overlay(&pieces)?;
    d.points = points.iter().filter_map(|p| d.vertex_index(p)).collect();
    d.report = check_properties(&d, &pieces, fan, points);
    Ok(d)
}

fn overlay(pieces: &[Piece]) -> Result<PolyDecomp> {
    let mut on: Vec<Vec<Rat>> = vec![Vec::new(); pieces.len()];
    for (i, p) in pieces.iter().enumerate() {
        on[i].push(Rat::zero());
        if let Some(l) = &p.len {
            on[i].push(l.clone());
        }
    }
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (a, b) = (&pieces[i], &pieces[j]);
            let cross = crate::lattice::wedge(a.dir, b.dir);
            if cross == 0 {
                // collinear overlaps: endpoints of each on the other
                for (x, y, ix) in [(a, b, i), (b, a, j)] {
                    for q in [Some(y.base.clone()), y.end()].into_iter().flatten() {
                        if let Some(t) = x.param_of(&q) {
                            on[ix].push(t);
                        }
                    }
                }
                continue;
            }
            let d = &b.base - &a.base;
            let c = Rat::from_integer(cross.into());
            let t = d.cross(&b.dir.to_rat()) / &c;
            let s = d.cross(&a.dir.to_rat()) / &c;
            if a.contains_param(&t) && b.contains_param(&s) {
                on[i].push(t);
                on[j].push(s);
            }
        }
    }
    let mut index: BTreeMap<RatVec2, usize> = BTreeMap::new();
    let mut vertices: Vec<RatVec2> = Vec::new();
    let mut vid = |p: RatVec2, vertices: &mut Vec<RatVec2>| -> usize {
        *index.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let mut seg_keys: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut ray_keys: BTreeSet<(usize, IntVec2)> = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, p) in pieces.iter().enumerate() {
        let mut ts = std::mem::take(&mut on[i]);
        ts.sort();
        ts.dedup();
        let ids: Vec<usize> = ts.iter().map(|t| vid(p.base.offset(p.dir, t), &mut vertices)).collect();
        for w in ids.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            if seg_keys.insert(key) {
                edges.push(DecompEdge { from: w[0], to: Some(w[1]), dir: p.dir });
            }
        }
        if p.len.is_none() {
            let last = *ids.last().unwrap();
            if ray_keys.insert((last, p.dir)) {
                edges.push(DecompEdge { from: last, to: None, dir: p.dir });
            }
        }
    }
    let faces = trace_faces(&vertices, &edges)?;
    Ok(PolyDecomp {
        schema: DECOMP_SCHEMA.into(),
        vertices,
        edges,
        faces,
        points: Vec::new(),
        report: PropertyReport::default(),
    })
}

#[derive(Clone, Debug)]
struct HalfEdge {
    from: Option<usize>,
    to: Option<usize>,
    dir: IntVec2,
}

fn trace_faces(vertices: &[RatVec2], edges: &[DecompEdge]) -> Result<Vec<Face>> {
    let mut half = Vec::with_capacity(2 * edges.len());
    for e in edges {
        half.push(HalfEdge { from: Some(e.from), to: e.to, dir: e.dir });
        half.push(HalfEdge { from: e.to, to: Some(e.from), dir: -e.dir });
    }
    let twin = |h: usize| h ^ 1;
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (h, he) in half.iter().enumerate() {
        if let Some(f) = he.from {
            outgoing[f].push(h);
        }
    }
    for out in &mut outgoing {
        out.sort_by(|&a, &b| angle_cmp(half[a].dir, half[b].dir));
        if out.windows(2).any(|w| half[w[0]].dir == half[w[1]].dir) {
            return Err(Error::Property("overlapping edges at a vertex".into()));
        }
    }
    let mut position = vec![0; half.len()];
    for out in &outgoing {
        for (k, &h) in out.iter().enumerate() {
            position[h] = k;
        }
    }
    // unbounded edges in counterclockwise order at infinity
    let mut at_inf: Vec<usize> = (0..half.len()).filter(|&h| half[h].to.is_none()).collect();
    at_inf.sort_by(|&a, &b| {
        let (da, db) = (half[a].dir, half[b].dir);
        angle_cmp(da, db).then_with(|| {
            let oa = vertices[half[a].from.unwrap()].dot_int(da.rot90());
            let ob = vertices[half[b].from.unwrap()].dot_int(db.rot90());
            oa.cmp(&ob)
        })
    });
    let mut inf_next = vec![usize::MAX; half.len()];
    for (k, &h) in at_inf.iter().enumerate() {
        let n = at_inf[(k + 1) % at_inf.len()];
        inf_next[h] = twin(n);
    }
    let next = |h: usize| -> usize {
        match half[h].to {
            Some(v) => {
                let t = twin(h);
                let out = &outgoing[v];
                out[(position[t] + out.len() - 1) % out.len()]
            }
            None => inf_next[h],
        }
    };
    let mut seen = vec![false; half.len()];
    let mut faces = Vec::new();
    for start in 0..half.len() {
        if seen[start] {
            continue;
        }
        let mut vs = Vec::new();
        let mut rec = Vec::new();
        let mut h = start;
        loop {
            if seen[h] {
                return Err(Error::Property("face traversal did not close".into()));
            }
            seen[h] = true;
            if let Some(f) = half[h].from {
                vs.push(f);
            }
            if half[h].to.is_none() {
                let n = inf_next[h];
                rec.push(half[h].dir);
                rec.push(-half[n].dir);
            }
            h = next(h);
            if h == start {
                break;
            }
        }
        rec.dedup();
        if rec.len() == 2 && rec[0] == rec[1] {
            rec.pop();
        }
        faces.push(Face { vertices: vs, recession: rec });
    }
    Ok(faces)
}

fn check_properties(d: &PolyDecomp, pieces: &[Piece], fan: &Fan, points: &[RatVec2]) -> PropertyReport {
    let mut r = PropertyReport {
        curves_in_skeleton: true,
        points_are_vertices: true,
        rational: true,
        cells_have_vertices: true,
        recession_in_fan: true,
        failures: Vec::new(),
    };
    let seg: BTreeSet<(usize, usize)> =
        d.edges.iter().filter_map(|e| e.to.map(|t| (e.from.min(t), e.from.max(t)))).collect();
    let rays: BTreeSet<(usize, IntVec2)> = d.edges.iter().filter(|e| e.to.is_none()).map(|e| (e.from, e.dir)).collect();
    for (i, p) in pieces.iter().enumerate().filter(|(_, p)| p.from_curve) {
        let mut on: Vec<(Rat, usize)> =
            d.vertices.iter().enumerate().filter_map(|(v, q)| p.param_of(q).map(|t| (t, v))).collect();
        on.sort();
        let ok_ends = on.first().is_some_and(|(t, _)| t.is_zero())
            && p.len.as_ref().is_none_or(|l| on.last().is_some_and(|(t, _)| t == l));
        let ok_chain = on.windows(2).all(|w| seg.contains(&(w[0].1.min(w[1].1), w[0].1.max(w[1].1))));
        let ok_ray = p.len.is_some() || on.last().is_some_and(|(_, v)| rays.contains(&(*v, p.dir)));
        if !(ok_ends && ok_chain && ok_ray) {
            r.curves_in_skeleton = false;
            r.failures.push(format!("curve piece {i} is not in the one-skeleton"));
        }
    }
    for (i, p) in points.iter().enumerate() {
        if d.vertex_index(p).is_none() {
            r.points_are_vertices = false;
            r.failures.push(format!("point {} is not a vertex", i + 1));
        }
    }
    for (i, f) in d.faces.iter().enumerate() {
        if f.vertices.is_empty() {
            r.cells_have_vertices = false;
            r.failures.push(format!("face {i} has no vertex"));
        }
        if !recession_ok(&f.recession, fan) {
            r.recession_in_fan = false;
            r.failures.push(format!("face {i} has recession cone {:?}", f.recession));
        }
        if f.recession.is_empty() && signed_area(d, f).is_negative() {
            r.failures.push(format!("face {i} is not counterclockwise"));
            r.cells_have_vertices = false;
        }
    }
    for e in d.edges.iter().filter(|e| e.to.is_none()) {
        if fan.ray_index(e.dir).is_none() {
            r.recession_in_fan = false;
            r.failures.push(format!("unbounded edge along {}", e.dir));
        }
    }
    r
}

fn recession_ok(rec: &[IntVec2], fan: &Fan) -> bool {
    match rec {
        [] => true,
        [a] => fan.ray_index(*a).is_some(),
        [a, b] => match (fan.ray_index(*a), fan.ray_index(*b)) {
            (Some(i), Some(j)) => j == (i + 1) % fan.len(),
            _ => false,
        },
        _ => false,
    }
}

fn signed_area(d: &PolyDecomp, f: &Face) -> Rat {
    let n = f.vertices.len();
    let mut a = Rat::zero();
    for k in 0..n {
        let p = &d.vertices[f.vertices[k]];
        let q = &d.vertices[f.vertices[(k + 1) % n]];
        a += p.cross(q);
    }
    a
}

/// Scales by the least common denominator `a` of the vertex coordinates so
/// that every vertex becomes integral.
pub fn rescale_lattice(d: &PolyDecomp) -> (PolyDecomp, BigInt) {
    let a = common_denominator(d.vertices.iter().flat_map(|v| [&v.x, &v.y]));
    let s = Rat::from_integer(a.clone());
    let mut out = d.clone();
    for v in &mut out.vertices {
        *v = v.scale(&s);
    }
    (out, a)
}
