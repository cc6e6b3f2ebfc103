//! Versioned JSON documents produced by the command-line drivers, and a
//! loader that dispatches on the `schema` field.

use serde::{Deserialize, Serialize};

use crate::broken::{potential, Potential};
use crate::correspondence::{
    build_decomposition, build_phi, fan_over, index_d, log_count_w, rescale_lattice, Fan3D, PolyDecomp, DECOMP_SCHEMA,
};
use crate::enumeration::{
    count_report, enumerate_maslov0_trees, enumerate_maslov2_disks, with_generic_points, BBox, Certificate,
    CountReport, DiskSolution, EnumOptions, TreeSolution, COUNT_SCHEMA,
};
use crate::error::{Error, Result};
use crate::fan::{Degree, Fan};
use crate::lattice::RatVec2;
use crate::render;
use crate::scattering::{
    build_diagram, check_consistency, u_mask, ConsistencyReport, Monomial, RingElement, ScatteringDiagram,
    DIAGRAM_SCHEMA,
};
use crate::tropcurve::mikhalkin_multiplicity;

pub const TREES_SCHEMA: &str = "tropenum.trees/1";
pub const DISKS_SCHEMA: &str = "tropenum.disks/1";
pub const SCATTER_SCHEMA: &str = "tropenum.scatter/1";
pub const POTENTIAL_RUN_SCHEMA: &str = "tropenum.potential-run/1";
pub const PHI_SCHEMA: &str = "tropenum.phi/1";
pub const DEGENERATE_SCHEMA: &str = "tropenum.degenerate/1";

fn mono_text(coeff: u64, marks: &[usize], delta: &[u32]) -> String {
    let exp = delta.iter().map(|&d| d as i64).collect();
    RingElement::monomial(crate::lattice::Rat::from_integer(coeff.into()), Monomial::new(exp, u_mask(marks)))
        .to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreesReport {
    pub schema: String,
    pub fan: Fan,
    pub seed: u64,
    pub points: Vec<RatVec2>,
    pub certificate: Certificate,
    pub trees: Vec<TreeSolution>,
    pub monomials: Vec<String>,
}

pub fn trees_report(fan: &Fan, k: usize, seed: u64, opts: EnumOptions) -> Result<TreesReport> {
    let (cfg, trees) =
        with_generic_points(k, seed, BBox::default(), |c| enumerate_maslov0_trees(fan, &c.points, opts))?;
    Ok(TreesReport {
        schema: TREES_SCHEMA.into(),
        fan: fan.clone(),
        seed,
        monomials: trees.iter().map(|t| mono_text(t.mono.coeff, &t.mono.marks, &t.mono.delta)).collect(),
        points: cfg.points,
        certificate: cfg.certificate,
        trees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisksReport {
    pub schema: String,
    pub fan: Fan,
    pub seed: u64,
    pub points: Vec<RatVec2>,
    pub certificate: Certificate,
    pub q: RatVec2,
    pub disks: Vec<DiskSolution>,
    pub monomials: Vec<String>,
}

pub fn disks_report(fan: &Fan, k: usize, seed: u64, q: &RatVec2, opts: EnumOptions) -> Result<DisksReport> {
    let (cfg, disks) =
        with_generic_points(k, seed, BBox::default(), |c| enumerate_maslov2_disks(fan, &c.points, q, opts))?;
    Ok(DisksReport {
        schema: DISKS_SCHEMA.into(),
        fan: fan.clone(),
        seed,
        monomials: disks.iter().map(|h| mono_text(h.mono.coeff, &h.mono.marks, &h.mono.delta)).collect(),
        points: cfg.points,
        certificate: cfg.certificate,
        q: q.clone(),
        disks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatterReport {
    pub schema: String,
    pub seed: u64,
    pub certificate: Certificate,
    pub diagram: ScatteringDiagram,
    pub consistency: ConsistencyReport,
}

pub fn scatter_report(fan: &Fan, k: usize, seed: u64, opts: EnumOptions) -> Result<ScatterReport> {
    let (cfg, (diagram, consistency)) = with_generic_points(k, seed, BBox::default(), |c| {
        let d = build_diagram(fan, &c.points, opts)?;
        let r = check_consistency(&d).map_err(|e| match e {
            Error::NonTransverse(m) => Error::Genericity(m),
            e => e,
        })?;
        Ok((d, r))
    })?;
    Ok(ScatterReport { schema: SCATTER_SCHEMA.into(), seed, certificate: cfg.certificate, diagram, consistency })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialReport {
    pub schema: String,
    pub seed: u64,
    pub certificate: Certificate,
    pub diagram: ScatteringDiagram,
    pub potential: Potential,
    pub text: String,
    pub classical: String,
}

pub fn potential_report(fan: &Fan, k: usize, seed: u64, q: &RatVec2, opts: EnumOptions) -> Result<PotentialReport> {
    let (cfg, (diagram, w)) = with_generic_points(k, seed, BBox::default(), |c| {
        let d = build_diagram(fan, &c.points, opts)?;
        let w = potential(&d, q, opts)?;
        Ok((d, w))
    })?;
    Ok(PotentialReport {
        schema: POTENTIAL_RUN_SCHEMA.into(),
        seed,
        certificate: cfg.certificate,
        diagram,
        text: w.value.to_string(),
        classical: w.classical().to_string(),
        potential: w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub solution: usize,
    /// `|coker Phi|` in decimal.
    pub index: String,
    pub log_count: u64,
    pub mult: u64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiReport {
    pub schema: String,
    pub count: CountReport,
    pub entries: Vec<PhiEntry>,
    pub all_hold: bool,
}

pub fn phi_report(fan: &Fan, delta: &Degree, seed: u64, opts: EnumOptions) -> Result<PhiReport> {
    let count = count_report(fan, delta, seed, opts)?;
    let mut entries = Vec::new();
    for (i, s) in count.solutions.iter().enumerate() {
        let sys = build_phi(&s.curve)?;
        let d = index_d(&sys)?;
        let w = log_count_w(&sys);
        let mult = mikhalkin_multiplicity(&s.curve)?;
        entries.push(PhiEntry {
            solution: i,
            holds: d.clone() * num_bigint::BigUint::from(w) == num_bigint::BigUint::from(mult),
            index: d.to_string(),
            log_count: w,
            mult,
        });
    }
    let all_hold = entries.iter().all(|e| e.holds);
    Ok(PhiReport { schema: PHI_SCHEMA.into(), count, entries, all_hold })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateReport {
    pub schema: String,
    pub count: CountReport,
    pub decomposition: PolyDecomp,
    /// The integer `a` with `a * P` integral, in decimal.
    pub rescale: String,
    pub rescaled: PolyDecomp,
    pub fan_over: Fan3D,
}

pub fn degenerate_report(fan: &Fan, delta: &Degree, seed: u64, opts: EnumOptions) -> Result<DegenerateReport> {
    let count = count_report(fan, delta, seed, opts)?;
    let curves: Vec<_> = count.solutions.iter().map(|s| s.curve.clone()).collect();
    let decomposition = build_decomposition(&curves, fan, &count.points)?;
    let (rescaled, a) = rescale_lattice(&decomposition);
    let f3 = fan_over(&rescaled, fan)?;
    Ok(DegenerateReport {
        schema: DEGENERATE_SCHEMA.into(),
        count,
        decomposition,
        rescale: a.to_string(),
        rescaled,
        fan_over: f3,
    })
}

/// Any document this crate writes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Count(CountReport),
    Trees(TreesReport),
    Disks(DisksReport),
    Scatter(ScatterReport),
    Diagram(ScatteringDiagram),
    Potential(PotentialReport),
    Phi(PhiReport),
    Degenerate(DegenerateReport),
    Decomposition(PolyDecomp),
}

pub fn load_document(text: &str) -> Result<Document> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    let schema = v
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or_else(|| Error::Parse("missing \"schema\" field".into()))?
        .to_string();
    Ok(match schema.as_str() {
        COUNT_SCHEMA => Document::Count(serde_json::from_value(v)?),
        TREES_SCHEMA => Document::Trees(serde_json::from_value(v)?),
        DISKS_SCHEMA => Document::Disks(serde_json::from_value(v)?),
        SCATTER_SCHEMA => Document::Scatter(serde_json::from_value(v)?),
        DIAGRAM_SCHEMA => Document::Diagram(serde_json::from_value(v)?),
        POTENTIAL_RUN_SCHEMA => Document::Potential(serde_json::from_value(v)?),
        PHI_SCHEMA => Document::Phi(serde_json::from_value(v)?),
        DEGENERATE_SCHEMA => Document::Degenerate(serde_json::from_value(v)?),
        DECOMP_SCHEMA => Document::Decomposition(serde_json::from_value(v)?),
        other => return Err(Error::Parse(format!("unknown schema {other:?}"))),
    })
}

/// An SVG picture of the document.
pub fn render_document(doc: &Document) -> String {
    match doc {
        Document::Count(r) => render_count(r),
        Document::Phi(r) => render_count(&r.count),
        Document::Trees(r) => {
            let curves: Vec<_> = r.trees.iter().map(|t| t.curve.clone()).collect();
            render::render_curves(&curves, &r.points)
        }
        Document::Disks(r) => {
            let curves: Vec<_> = r.disks.iter().map(|t| t.curve.clone()).collect();
            let mut pts = r.points.clone();
            pts.push(r.q.clone());
            render::render_curves(&curves, &pts)
        }
        Document::Scatter(r) => render::render_diagram(&r.diagram, None),
        Document::Diagram(d) => render::render_diagram(d, None),
        Document::Potential(r) => render::render_diagram(&r.diagram, Some(&r.potential)),
        Document::Degenerate(r) => render::render_decomposition(&r.decomposition),
        Document::Decomposition(d) => render::render_decomposition(d),
    }
}

fn render_count(r: &CountReport) -> String {
    let curves: Vec<_> = r.solutions.iter().map(|s| s.curve.clone()).collect();
    render::render_curves(&curves, &r.points)
}
