//! Exact enumeration of rational tropical plane curves, the lattice-index
//! correspondence, scattering diagrams and broken lines for toric surfaces.

pub mod broken;
pub mod correspondence;
pub mod enumeration;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod render;
pub mod reports;
pub mod scattering;
pub mod tropcurve;

pub use broken::{BrokenLine, Potential};
pub use correspondence::{Fan3D, PhiSystem, PolyDecomp};
pub use enumeration::{CountReport, EnumOptions, PointConfig};
pub use error::{Error, Result};
pub use fan::{Degree, Fan};
pub use lattice::{IntVec2, Rat, RatVec2};
pub use scattering::{RingAutomorphism, RingElement, ScatteringDiagram, Wall};
pub use tropcurve::{Convention, TropCurve};
