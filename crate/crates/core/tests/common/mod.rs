//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use tropenum_core::broken::enumerate_broken_lines;
use tropenum_core::enumeration::enumerate_maslov2_disks;
use tropenum_core::lattice::{ratio, Rat, RatVec2};
use tropenum_core::scattering::{u_mask, Carrier, Monomial, RingElement, ScatteringDiagram, Wall};
use tropenum_core::{EnumOptions, Fan};

/// Rational plane curve counts from the WDVV recursion.
pub fn kontsevich(d_max: usize) -> Vec<BigInt> {
    let mut n = vec![BigInt::zero(); d_max + 1];
    if d_max >= 1 {
        n[1] = BigInt::one();
    }
    for d in 2..=d_max {
        let mut s = BigInt::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let (a, b) = (d1 as i64, d2 as i64);
            let c1 = binomial(BigInt::from(3 * d - 4), BigInt::from(3 * d1 - 2));
            let c2 = binomial(BigInt::from(3 * d - 4), BigInt::from(3 * d1 - 1));
            let bracket = BigInt::from(b) * c1 - BigInt::from(a) * c2;
            s += &n[d1] * &n[d2] * BigInt::from(a * a * b) * bracket;
        }
        n[d] = s;
    }
    n
}

pub type P = (i64, i64);

fn cross(a: P, b: P) -> i64 {
    a.0 * b.1 - a.1 * b.0
}

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

/// A convex lattice polygon with counterclockwise vertices.
pub struct Polygon {
    pub vertices: Vec<P>,
}

impl Polygon {
    pub fn triangle(d: i64) -> Polygon {
        Polygon { vertices: vec![(0, 0), (d, 0), (0, d)] }
    }

    pub fn hexagon() -> Polygon {
        Polygon { vertices: vec![(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)] }
    }

    pub fn contains(&self, p: P) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(sub(self.vertices[(i + 1) % n], self.vertices[i]), sub(p, self.vertices[i])) >= 0)
    }

    fn bbox(&self) -> (i64, i64, i64, i64) {
        let xs = self.vertices.iter().map(|v| v.0);
        let ys = self.vertices.iter().map(|v| v.1);
        (xs.clone().min().unwrap(), xs.max().unwrap(), ys.clone().min().unwrap(), ys.max().unwrap())
    }

    pub fn lattice_points(&self) -> Vec<P> {
        let (x0, x1, y0, y1) = self.bbox();
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.contains((x, y)) {
                    out.push((x, y));
                }
            }
        }
        out.sort_by(|a, b| lambda_cmp(*a, *b));
        out
    }

    pub fn boundary_points(&self) -> usize {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let d = sub(self.vertices[(i + 1) % n], self.vertices[i]);
                num_integer::gcd(d.0, d.1) as usize
            })
            .sum()
    }

    /// The boundary lattice points from `from` to `to`, clockwise when
    /// `clockwise` is set.
    fn boundary_path(&self, from: P, to: P, clockwise: bool) -> Vec<P> {
        let n = self.vertices.len();
        let mut ring = Vec::new();
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let d = sub(b, a);
            let g = num_integer::gcd(d.0, d.1);
            for t in 0..g {
                ring.push((a.0 + d.0 / g * t, a.1 + d.1 / g * t));
            }
        }
        if clockwise {
            ring.reverse();
        }
        let start = ring.iter().position(|&p| p == from).unwrap();
        let m = ring.len();
        let mut out = Vec::new();
        for k in 0..=m {
            let p = ring[(start + k) % m];
            out.push(p);
            if p == to {
                break;
            }
        }
        out
    }
}

/// `lambda(x, y) = x - eps y` for a tiny irrational `eps`.
pub fn lambda_cmp(a: P, b: P) -> std::cmp::Ordering {
    a.0.cmp(&b.0).then(b.1.cmp(&a.1))
}

fn increasing(path: &[P]) -> bool {
    path.windows(2).all(|w| lambda_cmp(w[0], w[1]).is_lt())
}

/// Signed multiplicity half: `left` pushes left turns onto the clockwise
/// boundary path, otherwise right turns onto the counterclockwise one.
fn mu_half(poly: &Polygon, path: &[P], target: &[P], left: bool) -> u64 {
    if path == target {
        return 1;
    }
    let turn = |j: usize| {
        let c = cross(sub(path[j], path[j - 1]), sub(path[j + 1], path[j]));
        if left {
            c > 0
        } else {
            c < 0
        }
    };
    let Some(j) = (1..path.len().saturating_sub(1)).find(|&j| turn(j)) else {
        return 0;
    };
    let area = cross(sub(path[j], path[j - 1]), sub(path[j + 1], path[j])).unsigned_abs();
    let mut short = path.to_vec();
    short.remove(j);
    let mut total = area * mu_half(poly, &short, target, left);
    let flip = sub((path[j - 1].0 + path[j + 1].0, path[j - 1].1 + path[j + 1].1), path[j]);
    let mut flipped = path.to_vec();
    flipped[j] = flip;
    if poly.contains(flip) && increasing(&flipped) {
        total += mu_half(poly, &flipped, target, left);
    }
    total
}

/// Lattice path count of curves with Newton polygon `poly` through
/// `boundary + genus - 1` points, reducible curves included. Returns the
/// count and the multiset of path multiplicities.
pub fn lattice_path_count(poly: &Polygon, genus: usize) -> (u64, Vec<u64>) {
    let pts = poly.lattice_points();
    let (p, q) = (pts[0], *pts.last().unwrap());
    let steps = poly.boundary_points() + genus - 1;
    let plus = poly.boundary_path(p, q, true);
    let minus = poly.boundary_path(p, q, false);
    let inner = &pts[1..pts.len() - 1];
    let mut mults = Vec::new();
    // a path is an increasing choice of steps - 1 intermediate points
    let need = steps - 1;
    let mut choose = vec![0usize; need];
    fn rec(i: usize, start: usize, choose: &mut Vec<usize>, inner: &[P], f: &mut dyn FnMut(&[usize])) {
        if i == choose.len() {
            f(choose);
            return;
        }
        for s in start..inner.len() {
            choose[i] = s;
            rec(i + 1, s + 1, choose, inner, f);
        }
    }
    let mut visit = |c: &[usize]| {
        let mut path = vec![p];
        path.extend(c.iter().map(|&i| inner[i]));
        path.push(q);
        let m = mu_half(poly, &path, &plus, true) * mu_half(poly, &path, &minus, false);
        if m > 0 {
            mults.push(m);
        }
    };
    rec(0, 0, &mut choose, inner, &mut visit);
    mults.sort();
    (mults.iter().sum(), mults)
}

pub fn to_u64(b: &BigInt) -> u64 {
    b.to_u64().unwrap()
}

/// Parameter in `[0, 1]` where segment `a b` meets the support of `w`.
pub fn meets(w: &Wall, a: &RatVec2, b: &RatVec2) -> Option<Rat> {
    let d = b - a;
    let dir = w.dir.to_rat();
    let den = d.cross(&dir);
    let off = &w.base - a;
    if den.is_zero() {
        // parallel: only a collinear overlap counts
        return if off.cross(&d).is_zero() { Some(Rat::zero()) } else { None };
    }
    let t = off.cross(&dir) / &den;
    let s = off.cross(&d) / &den;
    let on_support = w.carrier == Carrier::Line || !s.is_negative();
    (on_support && !t.is_negative() && t <= Rat::from_integer(1.into())).then_some(t)
}

/// Pairs `(Q, Q')` on either side of one wall, away from every other wall.
pub fn adjacent_pairs(d: &ScatteringDiagram) -> Vec<(usize, RatVec2, RatVec2)> {
    let eps = ratio(1, 1_000_003);
    let mut out = Vec::new();
    for (i, w) in d.walls.iter().enumerate() {
        for t in [ratio(1, 3), ratio(5, 2), ratio(17, 2)] {
            let x = w.base.offset(w.dir, &t);
            let q = x.offset(w.normal(), &eps);
            let q2 = x.offset(w.normal(), &-&eps);
            let others = d
                .walls
                .iter()
                .enumerate()
                .filter(|(j, o)| *j != i && !o.co_supported(w))
                .any(|(_, o)| meets(o, &q, &q2).is_some());
            if !others && !d.on_support(&q) && !d.on_support(&q2) {
                out.push((i, q, q2));
            }
        }
    }
    out
}

/// Sorted final broken-line terms at `q`.
pub fn final_terms(d: &ScatteringDiagram, q: &RatVec2) -> Vec<String> {
    let mut out: Vec<String> = enumerate_broken_lines(d, q, EnumOptions::default())
        .unwrap()
        .iter()
        .map(|l| {
            let (c, m) = l.final_term();
            RingElement::monomial(c, m).to_string()
        })
        .collect();
    out.sort();
    out
}

/// Sorted `Mono(h)` of the Maslov index 2 disks ending at `q`.
pub fn disk_terms(pts: &[RatVec2], q: &RatVec2) -> Vec<String> {
    let mut out: Vec<String> = enumerate_maslov2_disks(&Fan::p2(), pts, q, EnumOptions::default())
        .unwrap()
        .iter()
        .map(|h| {
            let exp: Vec<i64> = h.mono.delta.iter().map(|&x| x as i64).collect();
            let c = Rat::from_integer(h.mono.coeff.into());
            RingElement::monomial(c, Monomial::new(exp, u_mask(&h.mono.marks))).to_string()
        })
        .collect();
    out.sort();
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn laplace(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        let minor: Vec<Vec<i64>> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect()).collect();
        let term = BigInt::from(m[0][c]) * laplace(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}
