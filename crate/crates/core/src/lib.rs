//! Exact geometry and combinatorial checkers for drawings of multigraphs in which
//! parallel edges bound lenses.
//!
//! Coordinates are rationals throughout; no predicate uses floating point.

pub mod bisection;
pub mod bounds;
pub mod cli;
pub mod crossing;
pub mod decompose;
pub mod drawing;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod lens;
pub mod log2;
pub mod rational;
pub mod replay;
pub mod svg;
mod sweep;

pub use bisection::{bisection_width_exact, BisectionResult};
pub use bounds::{check_drawing_bounds, check_lemma4, evaluate_bounds, thrackle_check, BoundReport, Verdict};
pub use crossing::{count_crossings, count_crossings_sweep, is_single_crossing, CrossingReport};
pub use drawing::{load, save, validate, Arc, Drawing, Edge, EdgeId, ValidationReport, VertexId};
pub use error::{Error, Result};
pub use geometry::{orient, point_in_polygon, segment_intersection, IntersectionKind, Point, Segment};
pub use lens::{analyze, lenses, parallel_classes, separated_verdict, LensRecord, SeparatedVerdict};
pub use decompose::{decompose, DecompositionTrace};
pub use rational::Rational;
pub use replay::{replay_theorem1, sampling_statistics, ReplayTrace, SamplingSummary};
