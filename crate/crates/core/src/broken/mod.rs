//! Broken lines ending at `Q`, the potential `W_k(Q)`, and its transport
//! across walls.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate_maslov2_disks, EnumOptions};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{Rat, RatVec2};
use crate::scattering::{build_diagram, path_automorphism, u_mask, Monomial, RingElement, ScatteringDiagram, Wall};

pub const POTENTIAL_SCHEMA: &str = "tropenum.potential/1";

/// A straight piece of a broken line, travelling in direction `-r(exp)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    /// `None` for the initial segment coming in from infinity.
    pub start: Option<RatVec2>,
    pub end: RatVec2,
    #[serde(with = "crate::lattice::serde_rat")]
    pub coeff: Rat,
    pub exp: Vec<i64>,
    pub u: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BrokenLine {
    /// Index of the ray whose generator labels the first segment.
    pub ray: usize,
    pub segments: Vec<Segment>,
}

impl BrokenLine {
    pub fn last(&self) -> &Segment {
        self.segments.last().expect("a broken line has a segment")
    }

    pub fn endpoint(&self) -> &RatVec2 {
        &self.last().end
    }

    /// The final monomial `c z^m u_I`.
    pub fn final_term(&self) -> (Rat, Monomial) {
        let s = self.last();
        (s.coeff.clone(), Monomial::new(s.exp.clone(), u_mask(&s.u)))
    }

    pub fn bends(&self) -> usize {
        self.segments.len() - 1
    }
}

/// Hits of the backward ray `x + t r`, `t > 0`, grouped by parameter.
fn backward_hits(d: &ScatteringDiagram, x: &RatVec2, r: &RatVec2, skip: &[usize]) -> Result<Vec<(Rat, Vec<usize>)>> {
    let mut hits: Vec<(Rat, usize)> = Vec::new();
    for (i, w) in d.walls.iter().enumerate() {
        if skip.contains(&i) {
            continue;
        }
        let u = w.dir.to_rat();
        let den = r.cross(&u);
        let bx = &w.base - x;
        if den.is_zero() {
            if bx.cross(&u).is_zero() {
                return Err(Error::NonGenericQ(format!("a broken line would run along the wall from {}", w.base)));
            }
            continue;
        }
        let t = bx.cross(&u) / &den;
        let s = bx.cross(r) / &den;
        if s.is_negative() && w.carrier == crate::scattering::Carrier::Ray {
            continue;
        }
        if t.is_negative() {
            continue;
        }
        if t.is_zero() {
            return Err(Error::NonGenericQ(format!("{x} lies on a wall")));
        }
        if s.is_zero() && w.carrier == crate::scattering::Carrier::Ray {
            return Err(Error::NonGenericQ(format!("a broken line would pass through {}", w.base)));
        }
        hits.push((t, i));
    }
    hits.sort();
    let mut out: Vec<(Rat, Vec<usize>)> = Vec::new();
    for (t, i) in hits {
        match out.last_mut() {
            Some((t0, g)) if *t0 == t => {
                if !d.walls[g[0]].co_supported(&d.walls[i]) {
                    return Err(Error::NonGenericQ("a broken line would pass through a singular point".into()));
                }
                g.push(i);
            }
            _ => out.push((t, vec![i])),
        }
    }
    Ok(out)
}

fn wall_term(w: &Wall) -> (Rat, &Monomial) {
    let (m, c) = w.f.terms().find(|(m, _)| !m.is_unit()).expect("tree walls carry one non-unit term");
    (c.clone(), m)
}

/// Backward state: the line from here on is already fixed.
struct Trace<'a> {
    d: &'a ScatteringDiagram,
    out: Vec<BrokenLine>,
}

impl Trace<'_> {
    /// `tail` holds the segments from `x` to `q`, the one ending at `q` first.
    fn run(&mut self, x: &RatVec2, exp: Vec<i64>, u: u64, skip: &[usize], tail: &mut Vec<Segment>) -> Result<()> {
        let fan = &self.d.fan;
        let r = fan.image(&exp);
        if r.is_zero() {
            return Ok(());
        }
        let rr = r.to_rat();
        let hits = backward_hits(self.d, x, &rr, skip)?;
        // the line may also come straight from infinity
        if u == 0 {
            if let Some(rho) = (0..fan.len()).find(|&i| Monomial::generator(fan.len(), i).exp == exp) {
                let mut segs = tail.clone();
                if let Some(first) = segs.last_mut() {
                    first.start = None;
                }
                segs.reverse();
                self.out.push(BrokenLine { ray: rho, segments: segs });
            }
            return Ok(());
        }
        for (t, group) in hits {
            let y = &(x + &(&rr * &t));
            // choose a nonempty set of co-supported walls to unbend at
            let n = group.len();
            for mask in 1u32..(1 << n) {
                let chosen: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| group[b]).collect();
                let mut prev = exp.clone();
                let mut pu = u;
                let mut ok = true;
                let mut terms = Vec::new();
                for &wi in &chosen {
                    let (c, m) = wall_term(&self.d.walls[wi]);
                    if m.u & pu != m.u {
                        ok = false;
                        break;
                    }
                    pu &= !m.u;
                    for (a, b) in prev.iter_mut().zip(&m.exp) {
                        *a -= b;
                    }
                    terms.push(c);
                }
                if !ok {
                    continue;
                }
                let rp = fan.image(&prev);
                let e = self.d.walls[group[0]].normal().dot(rp).abs();
                if e == 0 {
                    continue;
                }
                let factor: Rat = terms.iter().fold(Rat::one(), |acc, c| acc * c * Rat::from_integer(e.into()));
                // the segment ending at x started at y
                let seg_idx = tail.len() - 1;
                tail[seg_idx].start = Some(y.clone());
                let coeff = &tail[seg_idx].coeff / &factor;
                tail.push(Segment {
                    start: None,
                    end: y.clone(),
                    coeff,
                    exp: prev.clone(),
                    u: crate::scattering::u_labels(pu),
                });
                let res = self.run(y, prev, pu, &group, tail);
                tail.pop();
                res?;
            }
        }
        Ok(())
    }
}

/// Broken lines ending at `q`, traced backwards from every admissible final
/// monomial.
pub fn enumerate_broken_lines(d: &ScatteringDiagram, q: &RatVec2, opts: EnumOptions) -> Result<Vec<BrokenLine>> {
    if d.on_support(q) {
        return Err(Error::NonGenericQ(format!("{q} lies on a wall")));
    }
    for w in &d.walls {
        let mut it = w.f.terms().filter(|(m, _)| !m.is_unit());
        let single = matches!((it.next(), it.next()), (Some((m, _)), None) if m.u != 0);
        if !single || !w.f.coeff(&Monomial::unit(d.fan.len())).is_one() {
            return Err(Error::Unsupported("broken lines need walls of the form 1 + c u_I z^m".into()));
        }
    }
    let n = d.fan.len();
    // final monomials: a generator times wall terms with disjoint u-sets
    let mut finals: BTreeSet<(Vec<i64>, u64)> = BTreeSet::new();
    let mut frontier: Vec<(Vec<i64>, u64)> = (0..n).map(|i| (Monomial::generator(n, i).exp, 0)).collect();
    while let Some((e, u)) = frontier.pop() {
        if !finals.insert((e.clone(), u)) {
            continue;
        }
        for w in &d.walls {
            let (_, m) = wall_term(w);
            if m.u & u == 0 {
                let ne = e.iter().zip(&m.exp).map(|(a, b)| a + b).collect();
                frontier.push((ne, u | m.u));
            }
        }
    }
    let run_one = |(exp, u): &(Vec<i64>, u64)| -> Result<Vec<BrokenLine>> {
        let mut tr = Trace { d, out: Vec::new() };
        // coefficients are fixed once the start is reached; trace with 1 and rescale
        let mut tail = vec![Segment {
            start: None,
            end: q.clone(),
            coeff: Rat::one(),
            exp: exp.clone(),
            u: crate::scattering::u_labels(*u),
        }];
        tr.run(q, exp.clone(), *u, &[], &mut tail)?;
        Ok(tr.out)
    };
    let finals: Vec<_> = finals.into_iter().collect();
    let parts: Vec<Result<Vec<BrokenLine>>> =
        if opts.jobs > 1 { finals.par_iter().map(run_one).collect() } else { finals.iter().map(run_one).collect() };
    let mut lines = Vec::new();
    for p in parts {
        for mut l in p? {
            normalise(&mut l);
            lines.push(l);
        }
    }
    lines.sort();
    Ok(lines)
}

/// Rescales coefficients so that the first segment carries 1.
fn normalise(l: &mut BrokenLine) {
    let c0 = l.segments[0].coeff.clone();
    for s in &mut l.segments {
        s.coeff = &s.coeff / &c0;
    }
}

/// `W_k(Q) = y0 + sum of final broken-line monomials`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Potential {
    pub schema: String,
    pub k: usize,
    pub q: RatVec2,
    pub value: RingElement,
    pub provenance: Vec<BrokenLine>,
}

impl Potential {
    pub fn from_lines(k: usize, nrays: usize, q: RatVec2, lines: Vec<BrokenLine>) -> Potential {
        let mut value = RingElement::y0(nrays);
        for l in &lines {
            let (c, m) = l.final_term();
            value.add_term(m, c);
        }
        Potential { schema: POTENTIAL_SCHEMA.into(), k, q, value, provenance: lines }
    }

    /// `kappa = prod_rho x_rho`; the flat coordinate `y1` is `log kappa`.
    pub fn kappa(&self) -> RingElement {
        let n = self.value.nrays();
        RingElement::monomial(Rat::one(), Monomial::new(vec![1; n], 0))
    }

    /// `y1 = log kappa` at positive values of the `x_rho`.
    pub fn y1_at(&self, x: &[f64]) -> f64 {
        x.iter().map(|v| v.ln()).sum()
    }

    /// `y2 = u_1 + ... + u_k`.
    pub fn y2(&self) -> RingElement {
        let n = self.value.nrays();
        let mut r = RingElement::zero(n);
        for l in 1..=self.k {
            r.add_term(Monomial::new(vec![0; n], u_mask(&[l])), Rat::one());
        }
        r
    }

    /// `W mod (u_1, ..., u_k)`.
    pub fn classical(&self) -> RingElement {
        self.value.mod_u()
    }

    /// No term contains a `u_i` twice; holds by construction of the ring and
    /// is checked against the provenance.
    pub fn is_multilinear(&self) -> bool {
        self.provenance.iter().all(|l| {
            let u = &l.last().u;
            u.windows(2).all(|w| w[0] < w[1])
        })
    }
}

pub fn potential(d: &ScatteringDiagram, q: &RatVec2, opts: EnumOptions) -> Result<Potential> {
    let lines = enumerate_broken_lines(d, q, opts)?;
    Ok(Potential::from_lines(d.marked_points.len(), d.fan.len(), q.clone(), lines))
}

/// Final broken-line terms against the Maslov index 2 disk monomials, both
/// as sorted multisets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskComparison {
    pub broken: Vec<String>,
    pub disks: Vec<String>,
    pub equal: bool,
}

fn term_key(c: &Rat, m: &Monomial) -> String {
    RingElement::monomial(c.clone(), m.clone()).to_string()
}

pub fn compare_disks(fan: &Fan, points: &[RatVec2], q: &RatVec2, opts: EnumOptions) -> Result<DiskComparison> {
    let d = build_diagram(fan, points, opts)?;
    let mut broken: Vec<String> = enumerate_broken_lines(&d, q, opts)?
        .iter()
        .map(|l| {
            let (c, m) = l.final_term();
            term_key(&c, &m)
        })
        .collect();
    let mut disks: Vec<String> = enumerate_maslov2_disks(fan, points, q, opts)?
        .iter()
        .map(|h| {
            let exp = h.mono.delta.iter().map(|&x| x as i64).collect();
            term_key(&Rat::from_integer(h.mono.coeff.into()), &Monomial::new(exp, u_mask(&h.mono.marks)))
        })
        .collect();
    broken.sort();
    disks.sort();
    let equal = broken == disks;
    Ok(DiskComparison { broken, disks, equal })
}

pub fn verify_disk_correspondence(fan: &Fan, points: &[RatVec2], q: &RatVec2, opts: EnumOptions) -> Result<bool> {
    compare_disks(fan, points, q, opts).map(|c| c.equal)
}

/// Applies the path automorphism from `w.q` to `to`; `y0` is fixed.
pub fn transport(d: &ScatteringDiagram, w: &Potential, path: &[RatVec2]) -> Result<Potential> {
    let mut full = Vec::with_capacity(path.len() + 1);
    if path.first() != Some(&w.q) {
        full.push(w.q.clone());
    }
    full.extend_from_slice(path);
    let theta = path_automorphism(d, &full)?;
    Ok(Potential {
        schema: POTENTIAL_SCHEMA.into(),
        k: w.k,
        q: full.last().cloned().unwrap_or_else(|| w.q.clone()),
        value: theta.apply(&w.value)?,
        provenance: Vec::new(),
    })
}
