//! Design engine for planispheric astrolabes.
//!
//! The crate computes the stereographic geometry of the plate (tympan), the
//! rete and the back of an astrolabe from closed-form relations, renders the
//! result as deterministic SVG, and propagates engraving errors into
//! observational readout errors.
//!
//! Conventions shared by every module:
//!
//! * lengths are millimetres on the drawing plane;
//! * the canonical scale `S` is the projected radius of the celestial equator;
//! * public functions take and return angles in degrees, geometric primitives
//!   store radians;
//! * the plate frame has `+y` along the upper meridian (toward the projected
//!   zenith) and polar angles grow clockwise from `+y`, so hour angle `H`
//!   lands at `(r sin H, r cos H)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod back;
pub mod error;
pub mod errors;
pub mod exec;
pub mod geometry;
pub mod plate;
pub mod projection;
pub mod render;
pub mod rete;

pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{Arc, Circle, FitResult, Orientation, PlanePoint, Segment};
pub use plate::{PlateConfig, PlateModel};
pub use projection::{ProjectionKind, SphereCircleSpec, SpherePoint};

/// Default obliquity of the ecliptic in degrees.
pub const DEFAULT_OBLIQUITY: f64 = 23.44;
