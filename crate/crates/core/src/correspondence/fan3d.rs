//! The fan in `M_R x R` over a polyhedral decomposition placed at height 1.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::decomp::{Cell, PolyDecomp};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{fmt_rat, IntVec2, RatVec2};

/// A cone generated by points `(v, 1)` and directions `(d, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cone3 {
    /// Generators at height 1.
    pub apex_points: Vec<RatVec2>,
    /// Generators at height 0.
    pub directions: Vec<IntVec2>,
}

impl Cone3 {
    pub fn dim(&self) -> usize {
        match (self.apex_points.len(), self.directions.len()) {
            (0, 0) => 0,
            (0, 1) | (1, 0) => 1,
            (0, _) => 2,
            (1, 1) | (2, 0) => 2,
            _ => 3,
        }
    }

    pub fn at_height_zero(&self) -> bool {
        self.apex_points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan3D {
    pub schema: String,
    pub cones: Vec<Cone3>,
}

pub const FAN3D_SCHEMA: &str = "tropenum.fan3d/1";

impl Fan3D {
    /// The decomposition recovered by slicing at height 1.
    pub fn slice_height_one(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self
            .cones
            .iter()
            .filter(|c| !c.at_height_zero())
            .map(|c| Cell::new(c.apex_points.clone(), c.directions.clone()))
            .collect();
        cells.sort();
        cells
    }

    /// The cones contained in `M_R x {0}`, as sorted generator lists.
    pub fn height_zero_subfan(&self) -> BTreeSet<Vec<IntVec2>> {
        self.cones
            .iter()
            .filter(|c| c.at_height_zero())
            .map(|c| {
                let mut d = c.directions.clone();
                d.sort();
                d
            })
            .collect()
    }

    /// One line per cone: dimension then generators `x y h`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cones {
            let _ = write!(s, "{}", c.dim());
            for p in &c.apex_points {
                let _ = write!(s, " {} {} 1", fmt_rat(&p.x), fmt_rat(&p.y));
            }
            for d in &c.directions {
                let _ = write!(s, " {} {} 0", d.x, d.y);
            }
            s.push('\n');
        }
        s
    }
}

/// Cones of the fan as sorted generator lists, including the zero cone.
pub fn fan_cones(fan: &Fan) -> BTreeSet<Vec<IntVec2>> {
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for &r in fan.rays() {
        out.insert(vec![r]);
    }
    for i in 0..fan.len() {
        let (a, b) = fan.cone(i);
        let mut c = vec![a, b];
        c.sort();
        out.insert(c);
    }
    out
}

/// Cones over all cells of an integral decomposition, together with their
/// faces at height 0. Verifies that the height-0 part is the fan and that
/// slicing at height 1 gives back the decomposition.
pub fn fan_over(d: &PolyDecomp, fan: &Fan) -> Result<Fan3D> {
    if !d.report.all() {
        return Err(Error::Property(format!("decomposition fails its checks: {:?}", d.report.failures)));
    }
    if !d.vertices.iter().all(RatVec2::is_integral) {
        return Err(Error::Precondition("decomposition is not integral".into()));
    }
    let cells = d.cells();
    let mut cones: BTreeSet<Cone3> = BTreeSet::new();
    for c in &cells {
        cones.insert(Cone3 { apex_points: c.vertices.clone(), directions: c.rays.clone() });
        // the face at height 0 is the recession cone of the cell
        cones.insert(Cone3 { apex_points: Vec::new(), directions: c.rays.clone() });
        for &r in &c.rays {
            cones.insert(Cone3 { apex_points: Vec::new(), directions: vec![r] });
        }
    }
    let out = Fan3D { schema: FAN3D_SCHEMA.into(), cones: cones.into_iter().collect() };
    if out.height_zero_subfan() != fan_cones(fan) {
        return Err(Error::Property("height-0 subfan differs from the fan".into()));
    }
    if out.slice_height_one() != cells {
        return Err(Error::Property("height-1 slice differs from the decomposition".into()));
    }
    Ok(out)
}
