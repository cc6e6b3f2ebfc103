//! The lattice map comparing vertex positions with edge and point
//! constraints, its index, and the degeneration decomposition.

mod decomp;
mod fan3d;

pub use decomp::{
    build_decomposition, rescale_lattice, Cell, DecompEdge, Face, PolyDecomp, PropertyReport, DECOMP_SCHEMA,
};
pub use fan3d::{fan_cones, fan_over, Cone3, Fan3D, FAN3D_SCHEMA};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cokernel_order, CokernelOrder, IntMatrix, IntVec2, RatVec2};
use crate::tropcurve::{mikhalkin_multiplicity, CurveKind, TropCurve};

/// Which endpoint of a bounded edge is `v_-`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `v_-` is the lexicographically smaller endpoint.
    #[default]
    Lex,
    /// `v_-` is the lexicographically larger endpoint.
    Reversed,
}

/// An edge of the reduced graph: a maximal chain of edges through marked
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedEdge {
    /// Reduced-graph vertices at the ends; `None` for an unbounded end.
    pub ends: [Option<usize>; 2],
    /// Original edges along the chain.
    pub chain: Vec<usize>,
    pub weight: u32,
    /// Primitive direction from `v_-` to `v_+` (or to infinity).
    pub dir: IntVec2,
    /// Labels of the marked points on the chain.
    pub marks: Vec<usize>,
}

/// The matrix of the lattice map together with the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiSystem {
    /// Original vertex of each reduced vertex.
    pub vertices: Vec<usize>,
    pub edges: Vec<ReducedEdge>,
    /// Rows: bounded reduced edges first, then marks by label.
    pub matrix: IntMatrix,
    pub row_labels: Vec<String>,
    /// For each mark label (in row order), the reduced edge containing it.
    pub mark_edges: Vec<(usize, usize)>,
}

/// The quotient `M -> M / Z u` as `m -> <n, m>` with `n` primitive,
/// orthogonal to `u` and lexicographically positive.
pub fn quotient_normal(u: IntVec2) -> IntVec2 {
    u.lex_normal()
}

pub fn build_phi(c: &TropCurve) -> Result<PhiSystem> {
    build_phi_oriented(c, Orientation::Lex)
}

pub fn build_phi_oriented(c: &TropCurve, orient: Orientation) -> Result<PhiSystem> {
    if c.kind != CurveKind::Curve {
        return Err(Error::Precondition("the lattice map is defined for closed curves".into()));
    }
    c.validate()?;
    let nv = c.vertices.len();
    let inc = c.incidence();
    let reduced: Vec<usize> = (0..nv).filter(|&v| !c.is_marked(v)).collect();
    if reduced.is_empty() {
        return Err(Error::Precondition("curve has no unmarked vertex".into()));
    }
    let mut index = vec![usize::MAX; nv];
    for (i, &v) in reduced.iter().enumerate() {
        index[v] = i;
    }
    let mut used = vec![false; c.edges.len()];
    let mut edges = Vec::new();
    for &start in &reduced {
        for &e0 in &inc[start] {
            if used[e0] {
                continue;
            }
            // walk the chain from `start` through marked vertices
            let mut chain = vec![e0];
            let mut marks = Vec::new();
            used[e0] = true;
            let mut at = c.edges[e0].other(start);
            let mut last = e0;
            while let Some(v) = at {
                if !c.is_marked(v) {
                    break;
                }
                marks.push(c.mark_at(v).unwrap());
                let next = inc[v]
                    .iter()
                    .copied()
                    .find(|&e| e != last)
                    .ok_or_else(|| Error::InvalidCurve(format!("marked vertex {v} is a leaf")))?;
                used[next] = true;
                chain.push(next);
                last = next;
                at = c.edges[next].other(v);
            }
            let weight = c.edges[e0].weight;
            let out0 = c.edges[e0].outgoing(start);
            let (ends, dir) = match at {
                None => ([Some(index[start]), None], out0),
                Some(end) => {
                    let (a, b) = (index[start], index[end]);
                    let start_first = c.vertices[start] < c.vertices[end];
                    let keep = match orient {
                        Orientation::Lex => start_first,
                        Orientation::Reversed => !start_first,
                    };
                    if keep {
                        ([Some(a), Some(b)], out0)
                    } else {
                        chain.reverse();
                        marks.reverse();
                        ([Some(b), Some(a)], -out0)
                    }
                }
            };
            edges.push(ReducedEdge { ends, chain, weight, dir, marks });
        }
    }
    let bounded: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].ends[1].is_some()).collect();
    let mut mark_edges: Vec<(usize, usize)> =
        edges.iter().enumerate().flat_map(|(i, e)| e.marks.iter().map(move |&l| (l, i))).collect();
    mark_edges.sort_unstable();
    let rows = bounded.len() + mark_edges.len();
    let cols = 2 * reduced.len();
    let mut m = IntMatrix::zeros(rows, cols);
    let mut labels = Vec::with_capacity(rows);
    for (r, &ei) in bounded.iter().enumerate() {
        let e = &edges[ei];
        let n = quotient_normal(e.dir);
        let (vm, vp) = (e.ends[0].unwrap(), e.ends[1].unwrap());
        m.set(r, 2 * vp, n.x.into());
        m.set(r, 2 * vp + 1, n.y.into());
        m.set(r, 2 * vm, (-n.x).into());
        m.set(r, 2 * vm + 1, (-n.y).into());
        labels.push(format!("edge {ei}"));
    }
    for (j, &(label, ei)) in mark_edges.iter().enumerate() {
        let r = bounded.len() + j;
        let e = &edges[ei];
        let n = quotient_normal(e.dir);
        let vm = e.ends[0].unwrap();
        m.set(r, 2 * vm, n.x.into());
        m.set(r, 2 * vm + 1, n.y.into());
        labels.push(format!("mark {label}"));
    }
    Ok(PhiSystem { vertices: reduced, edges, matrix: m, row_labels: labels, mark_edges })
}

/// `|coker Phi|`.
pub fn index_d(sys: &PhiSystem) -> Result<BigUint> {
    if sys.matrix.rows() != sys.matrix.cols() {
        return Err(Error::NonRigid(format!("{} constraints on {} coordinates", sys.matrix.rows(), sys.matrix.cols())));
    }
    match cokernel_order(&sys.matrix) {
        CokernelOrder::Finite(d) => Ok(d),
        CokernelOrder::Infinite => Err(Error::InfiniteCokernel),
    }
}

/// Product of the bounded reduced edge weights times the weights of the
/// reduced edges carrying the marks.
pub fn log_count_w(sys: &PhiSystem) -> u64 {
    let bounded: u64 = sys.edges.iter().filter(|e| e.ends[1].is_some()).map(|e| e.weight as u64).product();
    let marked: u64 = sys.mark_edges.iter().map(|&(_, ei)| sys.edges[ei].weight as u64).product();
    bounded * marked
}

/// Checks `index_d * log_count_w == Mult`.
pub fn verify_correspondence(c: &TropCurve) -> Result<bool> {
    let sys = build_phi(c)?;
    let d = index_d(&sys)?;
    let w = log_count_w(&sys);
    let mult = mikhalkin_multiplicity(c)?;
    Ok(d * BigUint::from(w) == BigUint::from(mult))
}

/// Positions of the reduced vertices, for inspection.
pub fn reduced_positions(c: &TropCurve, sys: &PhiSystem) -> Vec<RatVec2> {
    sys.vertices.iter().map(|&v| c.vertices[v].clone()).collect()
}
