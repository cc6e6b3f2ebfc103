//! The coefficient ring, wall-crossing automorphisms and the scattering
//! diagram of Maslov index 0 trees.

mod auto;
mod diagram;
mod ring;

pub use auto::{apply_generator, crossing_automorphism, RingAutomorphism};
pub use diagram::{
    build_diagram, check_consistency, diagram_from_trees, loop_automorphism, path_automorphism, singular_points,
    small_loop, wall_crossing, wall_order, Carrier, ConsistencyReport, CrossingSign, ScatteringDiagram, SingularCheck,
    Wall, DIAGRAM_SCHEMA,
};
pub use ring::{is_positive, u_labels, u_mask, Monomial, RingElement};
