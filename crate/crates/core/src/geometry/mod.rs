//! Realization of a decomposition as a polygonal surface on its double
//! cover, straight-line flow and re-decomposition along new directions.

pub mod complex;
pub mod decompose;
pub mod trace;

pub use complex::{cone_type, PlanarComplex, Point, VertexInfo};
pub use trace::{JsVerdict, Segment, SeparatrixTrace, TraceEnd};
pub use decompose::{redecompose, RedecomposeOutcome, Redecomposition};
