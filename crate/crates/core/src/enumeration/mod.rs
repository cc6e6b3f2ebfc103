//! Enumeration of rational tropical curves, Maslov index 0 trees and
//! Maslov index 2 disks through generic points.

pub mod families;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Degree, Fan};
use crate::lattice::{IntVec2, Rat, RatVec2};
use crate::tropcurve::{
    canonical_type, geometric_key, is_simple, mikhalkin_multiplicity, welschinger_multiplicity, TropCurve,
};
use families::{membership, Family, FamilyStore, Finish, Limits, Membership};

/// Number of resamples before giving up on a generic configuration.
pub const RETRY_BUDGET: u32 = 32;

/// Axis-parallel box `[lo, hi]^2` for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBox {
    pub lo: i64,
    pub hi: i64,
}

impl Default for BBox {
    fn default() -> Self {
        BBox { lo: -20, hi: 20 }
    }
}

/// Record of the genericity checks a configuration has passed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Resamples consumed before this configuration.
    pub attempt: u32,
    pub distinct_coordinates: bool,
    pub coprime_denominators: bool,
    /// Enumeration runs that completed on this configuration with only
    /// simple trivalent solutions of positive edge lengths.
    pub runs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfig {
    pub points: Vec<RatVec2>,
    pub seed: u64,
    pub certificate: Certificate,
}

impl PointConfig {
    /// A configuration from explicit points, with the coordinate checks run.
    pub fn from_points(points: Vec<RatVec2>) -> Result<PointConfig> {
        let (dc, cd) = coordinate_checks(&points);
        if !dc {
            return Err(Error::Genericity("points share a coordinate".into()));
        }
        Ok(PointConfig {
            points,
            seed: 0,
            certificate: Certificate {
                attempt: 0,
                distinct_coordinates: dc,
                coprime_denominators: cd,
                runs: Vec::new(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn coordinate_checks(points: &[RatVec2]) -> (bool, bool) {
    use num_integer::Integer;
    use num_traits::One;
    let mut xs: Vec<&Rat> = points.iter().map(|p| &p.x).collect();
    let mut ys: Vec<&Rat> = points.iter().map(|p| &p.y).collect();
    xs.sort();
    ys.sort();
    let distinct = xs.windows(2).all(|w| w[0] != w[1]) && ys.windows(2).all(|w| w[0] != w[1]);
    let dens: Vec<&BigInt> = points.iter().flat_map(|p| [p.x.denom(), p.y.denom()]).collect();
    let mut coprime = true;
    for i in 0..dens.len() {
        for j in i + 1..dens.len() {
            if !dens[i].gcd(dens[j]).is_one() {
                coprime = false;
            }
        }
    }
    (distinct, coprime)
}

fn primes_in(lo: u32, hi: u32) -> Vec<u32> {
    (lo..hi).filter(|&n| n > 1 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

/// Deterministic configuration number `attempt` for `seed`: coordinates
/// `p/q` with distinct prime denominators `q`.
fn sample_attempt(k: usize, seed: u64, attempt: u32, bbox: BBox) -> PointConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    let mut primes = primes_in(1000, 4000);
    let mut coords = Vec::with_capacity(2 * k);
    for _ in 0..2 * k {
        let q = primes.swap_remove(rng.gen_range(0..primes.len())) as i64;
        let num = loop {
            let n = rng.gen_range(bbox.lo * q + 1..bbox.hi * q);
            if n % q != 0 {
                break n;
            }
        };
        coords.push(Rat::new(num.into(), q.into()));
    }
    let points: Vec<RatVec2> = coords.chunks(2).map(|c| RatVec2::new(c[0].clone(), c[1].clone())).collect();
    let (dc, cd) = coordinate_checks(&points);
    PointConfig {
        points,
        seed,
        certificate: Certificate { attempt, distinct_coordinates: dc, coprime_denominators: cd, runs: Vec::new() },
    }
}

/// `k` pseudo-random points determined by `seed`.
pub fn sample_generic_points(k: usize, seed: u64, bbox: BBox) -> Result<PointConfig> {
    with_generic_points(k, seed, bbox, |_| Ok(())).map(|(c, _)| c)
}

/// Samples configurations until `run` succeeds without a genericity failure,
/// up to [`RETRY_BUDGET`] resamples.
pub fn with_generic_points<T>(
    k: usize,
    seed: u64,
    bbox: BBox,
    mut run: impl FnMut(&PointConfig) -> Result<T>,
) -> Result<(PointConfig, T)> {
    let mut last = String::new();
    for attempt in 0..=RETRY_BUDGET {
        let cfg = sample_attempt(k, seed, attempt, bbox);
        if !cfg.certificate.distinct_coordinates || !cfg.certificate.coprime_denominators {
            last = "coordinate check".into();
            continue;
        }
        match run(&cfg) {
            Ok(t) => return Ok((cfg, t)),
            Err(Error::Genericity(m)) => last = m,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Genericity(format!("retry budget of {RETRY_BUDGET} exhausted for seed {seed}; last failure: {last}")))
}

/// Options for the enumeration engine.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub jobs: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSolution {
    pub curve: TropCurve,
    pub mult: u64,
    pub wmult: i64,
    pub combinatorial_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub schema: String,
    pub fan: String,
    pub rays: Vec<IntVec2>,
    pub degree: Degree,
    pub seed: u64,
    pub points: Vec<RatVec2>,
    pub certificate: Certificate,
    pub solutions: Vec<CurveSolution>,
    pub n_trop: u64,
    pub w_trop: i64,
}

pub const COUNT_SCHEMA: &str = "tropenum.count/1";

fn check_solution(c: &TropCurve, points: &[RatVec2]) -> Result<()> {
    c.validate().map_err(|e| Error::Genericity(format!("degenerate solution: {e}")))?;
    if !is_simple(c) {
        return Err(Error::Genericity("non-simple solution".into()));
    }
    for (v, _) in c.vertices.iter().enumerate() {
        let val = c.valence(v);
        let marked = c.is_marked(v);
        if (marked && val != 2)
            || (!marked && val != 3 && !matches!(c.kind, crate::tropcurve::CurveKind::Disk { v_out } if v_out == v))
        {
            return Err(Error::Genericity(format!("vertex {v} is not trivalent")));
        }
    }
    for &(l, v) in &c.marks {
        if c.vertices[v] != points[l - 1] {
            return Err(Error::Property(format!("mark {l} is not at its point")));
        }
    }
    Ok(())
}

/// All rational curves of degree `delta` through the `|delta| - 1` points.
pub fn enumerate_rational_curves(
    fan: &Fan,
    delta: &Degree,
    config: &PointConfig,
    opts: EnumOptions,
) -> Result<CountReport> {
    let total = delta.total();
    if !delta.is_balanced(fan) {
        return Err(Error::Unbalanced("degree is not balanced".into()));
    }
    if total == 0 {
        return Err(Error::Domain("zero degree".into()));
    }
    if config.len() + 1 != total as usize {
        return Err(Error::Domain(format!("degree {total} needs {} points, got {}", total - 1, config.len())));
    }
    let (star, dstar) = delta
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d > 0)
        .min_by_key(|(_, &d)| d)
        .map(|(i, &d)| (i, d))
        .unwrap();
    let mut bound = delta.coeffs().to_vec();
    bound[star] -= 1;
    let limits = Limits { delta: bound.clone(), total: total - 1 };
    let store = FamilyStore::build(fan, &config.points, &limits, opts.jobs)?;
    let all = if config.is_empty() { 0 } else { (1u64 << config.len()) - 1 };
    let v_star = fan.ray(star);
    let mut found: BTreeMap<String, (TropCurve, u32)> = BTreeMap::new();
    for (i, f) in store.families.iter().enumerate() {
        if f.dim() != 0 || f.marks != all || f.delta != bound {
            continue;
        }
        debug_assert!(f.dir == v_star && f.weight == 1);
        let c = store.realize(i, Finish::Curve)?;
        check_solution(&c, &config.points)?;
        let e = found.entry(geometric_key(&c)).or_insert((c, 0));
        e.1 += 1;
    }
    let mut solutions = Vec::new();
    for (_, (c, times)) in found {
        if times != dstar {
            return Err(Error::Property(format!("curve found {times} times, expected {dstar}")));
        }
        let mult = mikhalkin_multiplicity(&c)?;
        let wmult = welschinger_multiplicity(&c)?;
        solutions.push(CurveSolution { combinatorial_type: canonical_type(&c), curve: c, mult, wmult });
    }
    solutions.sort_by(|a, b| {
        a.combinatorial_type
            .cmp(&b.combinatorial_type)
            .then_with(|| geometric_key(&a.curve).cmp(&geometric_key(&b.curve)))
    });
    let mut types: Vec<&String> = solutions.iter().map(|s| &s.combinatorial_type).collect();
    types.sort();
    if types.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Genericity("two solutions share a combinatorial type".into()));
    }
    let mut certificate = config.certificate.clone();
    certificate.runs.push(format!(
        "curves {}:{:?} ({} families, {} solutions)",
        fan.name(),
        delta.coeffs(),
        store.families.len(),
        solutions.len()
    ));
    Ok(CountReport {
        schema: COUNT_SCHEMA.into(),
        fan: fan.name().into(),
        rays: fan.rays().to_vec(),
        degree: delta.clone(),
        seed: config.seed,
        points: config.points.clone(),
        certificate,
        n_trop: solutions.iter().map(|s| s.mult).sum(),
        w_trop: solutions.iter().map(|s| s.wmult).sum(),
        solutions,
    })
}

/// Samples a generic configuration for `seed` and enumerates.
pub fn count_report(fan: &Fan, delta: &Degree, seed: u64, opts: EnumOptions) -> Result<CountReport> {
    let k = (delta.total() as usize).saturating_sub(1);
    with_generic_points(k, seed, BBox::default(), |cfg| enumerate_rational_curves(fan, delta, cfg, opts))
        .map(|(_, r)| r)
}

pub fn count_n_trop(fan: &Fan, delta: &Degree, seed: u64) -> Result<u64> {
    count_report(fan, delta, seed, EnumOptions::default()).map(|r| r.n_trop)
}

pub fn count_w_trop(fan: &Fan, delta: &Degree, seed: u64) -> Result<i64> {
    count_report(fan, delta, seed, EnumOptions::default()).map(|r| r.w_trop)
}

/// `Mult(h) u_I z^Delta`: the monomial data carried by a disk or tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonoData {
    pub coeff: u64,
    /// Sorted 1-based labels.
    pub marks: Vec<usize>,
    /// Ends per ray.
    pub delta: Vec<u32>,
}

/// A Maslov index 0 tree; its outgoing edge is the ray `base + t dir`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeSolution {
    pub curve: TropCurve,
    pub mono: MonoData,
    pub out_weight: u32,
    pub base: RatVec2,
    pub dir: IntVec2,
}

/// A Maslov index 2 disk with boundary point `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskSolution {
    pub curve: TropCurve,
    pub mono: MonoData,
}

fn mono_of(f: &Family) -> MonoData {
    MonoData { coeff: f.mult, marks: f.labels(), delta: f.delta.clone() }
}

fn store_for_points<'a>(fan: &'a Fan, points: &'a [RatVec2], extra: u32, opts: EnumOptions) -> Result<FamilyStore<'a>> {
    let total = points.len() as u32 + extra;
    let limits = Limits { delta: vec![total; fan.len()], total };
    FamilyStore::build(fan, points, &limits, opts.jobs)
}

fn trees_from_store(store: &FamilyStore<'_>) -> Result<Vec<TreeSolution>> {
    let mut out = Vec::new();
    for (i, f) in store.families.iter().enumerate() {
        if f.dim() != 0 {
            continue;
        }
        let c = store.realize(i, Finish::Tree)?;
        check_solution(&c, store.points)?;
        debug_assert_eq!(mikhalkin_multiplicity(&c)?, f.mult);
        out.push(TreeSolution {
            curve: c,
            mono: mono_of(f),
            out_weight: f.weight,
            base: f.root.clone().unwrap(),
            dir: f.dir,
        });
    }
    out.sort_by(|a, b| (&a.mono, &a.base, a.dir).cmp(&(&b.mono, &b.base, b.dir)));
    Ok(out)
}

/// All Maslov index 0 trees with marked points among `points`.
pub fn enumerate_maslov0_trees(fan: &Fan, points: &[RatVec2], opts: EnumOptions) -> Result<Vec<TreeSolution>> {
    let store = store_for_points(fan, points, 0, opts)?;
    trees_from_store(&store)
}

/// All Maslov index 2 disks with boundary `q` and marked points among `points`.
pub fn enumerate_maslov2_disks(
    fan: &Fan,
    points: &[RatVec2],
    q: &RatVec2,
    opts: EnumOptions,
) -> Result<Vec<DiskSolution>> {
    let store = store_for_points(fan, points, 1, opts)?;
    // q must avoid every tree edge, in particular the walls
    for t in trees_from_store(&store)? {
        if on_curve(&t.curve, q) {
            return Err(Error::NonGenericQ(format!("{q} lies on a tree")));
        }
    }
    let mut out = Vec::new();
    for (i, f) in store.families.iter().enumerate() {
        if f.dim() != 1 {
            continue;
        }
        match membership(&f.region, q) {
            Membership::Outside => continue,
            Membership::Boundary => return Err(Error::NonGenericQ(format!("{q} on the boundary of a disk family"))),
            Membership::Inside => {}
        }
        let c = store.realize(i, Finish::Disk(q))?;
        check_solution(&c, points).map_err(|e| Error::NonGenericQ(e.to_string()))?;
        out.push(DiskSolution { curve: c, mono: mono_of(f) });
    }
    out.sort_by(|a, b| a.mono.cmp(&b.mono));
    Ok(out)
}

/// Whether `q` lies on the image of the curve.
pub fn on_curve(c: &TropCurve, q: &RatVec2) -> bool {
    use num_traits::{Signed, Zero};
    c.edges.iter().any(|e| {
        let d = q - &c.vertices[e.tail];
        match d.multiple_of(e.dir) {
            Some(t) => {
                if d.x.is_zero() && d.y.is_zero() {
                    return true;
                }
                if !t.is_positive() {
                    return false;
                }
                match c.edge_length_of(e) {
                    Some(len) => t <= len,
                    None => true,
                }
            }
            None => d.x.is_zero() && d.y.is_zero(),
        }
    })
}
