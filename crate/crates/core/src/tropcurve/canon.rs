//! Canonical encodings of curves, used to deduplicate enumeration output.

use std::collections::BTreeSet;

use super::{CurveKind, TropCurve};
use crate::lattice::fmt_rat;

/// Canonical string of the combinatorial type of a rational curve: the
/// abstract tree with edge directions, weights and markings, up to graph
/// isomorphism. Curves of positive genus fall back to [`geometric_key`].
pub fn canonical_type(c: &TropCurve) -> String {
    let nv = c.vertices.len();
    let bounded = c.edges.iter().filter(|e| e.is_bounded()).count();
    if nv == 0 || bounded + 1 != nv || !c.is_connected() {
        return format!("geom:{}", geometric_key(c));
    }
    let inc = c.incidence();
    // tree centers by peeling leaves of the bounded-edge graph
    let mut deg: Vec<usize> = (0..nv).map(|v| inc[v].iter().filter(|&&e| c.edges[e].is_bounded()).count()).collect();
    let mut alive: BTreeSet<usize> = (0..nv).collect();
    let mut layer: Vec<usize> = (0..nv).filter(|&v| deg[v] <= 1).collect();
    while alive.len() > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            alive.remove(&v);
            for &e in &inc[v] {
                if let Some(w) = c.edges[e].other(v) {
                    if c.edges[e].is_bounded() && alive.contains(&w) {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
            }
        }
        layer = next;
    }
    alive.into_iter().map(|r| encode(c, &inc, r, None)).min().unwrap()
}

fn encode(c: &TropCurve, inc: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut parts = Vec::new();
    if let Some(l) = c.mark_at(v) {
        parts.push(format!("m{l}"));
    }
    if matches!(c.kind, CurveKind::Disk { v_out } if v_out == v) {
        parts.push("q".to_string());
    }
    for &e in &inc[v] {
        if Some(e) == parent {
            continue;
        }
        let ed = &c.edges[e];
        let d = ed.outgoing(v);
        match ed.other(v) {
            Some(w) => parts.push(format!("b{},{},{}:{}", d.x, d.y, ed.weight, encode(c, inc, w, Some(e)))),
            None => {
                let tag = if matches!(c.kind, CurveKind::Tree { e_out } if e_out == e) { "o" } else { "u" };
                parts.push(format!("{tag}{},{},{}", d.x, d.y, ed.weight));
            }
        }
    }
    parts.sort();
    format!("[{}]", parts.join(";"))
}

/// Canonical string of the image: sorted edge list with exact endpoints,
/// weights and marked positions.
pub fn geometric_key(c: &TropCurve) -> String {
    let p = |i: usize| {
        let v = &c.vertices[i];
        format!("({},{})", fmt_rat(&v.x), fmt_rat(&v.y))
    };
    let mut items: Vec<String> = c
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let out = if matches!(c.kind, CurveKind::Tree { e_out } if e_out == i) { "o" } else { "" };
            match e.head {
                Some(h) => {
                    let (a, b) = (p(e.tail), p(h));
                    let (a, b) = if c.vertices[e.tail] <= c.vertices[h] { (a, b) } else { (b, a) };
                    format!("s{a}{b}w{}", e.weight)
                }
                None => format!("r{out}{}d{}w{}", p(e.tail), e.dir, e.weight),
            }
        })
        .collect();
    for &(l, v) in &c.marks {
        items.push(format!("m{l}@{}", p(v)));
    }
    if let CurveKind::Disk { v_out } = c.kind {
        items.push(format!("q@{}", p(v_out)));
    }
    items.sort();
    items.join("|")
}

#[cfg(test)]
mod tests {
    use super::super::Edge;
    use super::*;
    use crate::lattice::{IntVec2, RatVec2};

    fn v(x: i64, y: i64) -> IntVec2 {
        IntVec2::new(x, y)
    }

    fn curve(order: bool, shift: i64) -> TropCurve {
        let verts = vec![RatVec2::from_ints(shift, 0), RatVec2::from_ints(shift + 2, 0)];
        let mut edges = vec![
            Edge::bounded(0, 1, v(1, 0), 2),
            Edge::unbounded(0, v(-1, 1), 1),
            Edge::unbounded(0, v(-1, -1), 1),
            Edge::unbounded(1, v(1, 1), 1),
            Edge::unbounded(1, v(1, -1), 1),
        ];
        if order {
            edges.reverse();
        }
        TropCurve::new(CurveKind::Curve, verts, edges, vec![])
    }

    #[test]
    fn type_ignores_order_and_position() {
        let a = canonical_type(&curve(false, 0));
        assert_eq!(a, canonical_type(&curve(true, 0)));
        assert_eq!(a, canonical_type(&curve(false, 7)));
        assert_ne!(geometric_key(&curve(false, 0)), geometric_key(&curve(false, 7)));
        assert_eq!(geometric_key(&curve(false, 0)), geometric_key(&curve(true, 0)));
    }

    #[test]
    fn type_sees_markings() {
        let mut a = curve(false, 0);
        let b = a.clone();
        a.marks.push((1, 0));
        assert_ne!(canonical_type(&a), canonical_type(&b));
    }
}
