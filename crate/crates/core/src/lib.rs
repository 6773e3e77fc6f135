//! Order-one invariants of stable planar curves.
//!
//! The pipeline reads a closed polyline, finds its transverse double points
//! with exact orientation predicates, assigns each exterior arc a double
//! index and sums the resulting symbols into exact rational vectors.

pub mod config;
pub mod corpus;
pub mod curve;
pub mod error;
pub mod exactness;
pub mod geom;
pub mod indices;
pub mod invariant;
pub mod io;
pub mod linalg;
pub mod moves;
pub mod render;
pub mod symbols;

pub use config::ToleranceConfig;
pub use curve::{
    find_crossings, radial_winding, turning_along, validate_stable, whitney_number, Crossing,
    GenericityReport, PlanarCurve, Violation, ViolationKind,
};
pub use error::{Error, Result};
pub use geom::Point;
pub use indices::{
    arc_angles, bottom_index, crosscheck_top_index, double_index, exterior_arcs, top_index,
    ArcAngles, ExteriorArc,
};
pub use invariant::{
    compute, crossing_sum_of, invariant_of, projection_of, winding_term_of, InvariantResult,
};
pub use io::{parse_curve, read_curve, RunConfig};
pub use moves::{make_j_move, make_move, make_s_move, perturb, MoveOutcome, MoveSite, MoveSymbol};
pub use render::render_svg;
pub use symbols::{
    project, winding_functional, DoubleIndex, JKind, JSymbol, SSymbol, XSymbol, XVector, YSymbol,
    YVector,
};
