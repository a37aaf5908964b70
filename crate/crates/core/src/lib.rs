//! Spherical sampling lattices and point-counting area measurement.
//!
//! The crate builds two families of sampling lattices on the unit sphere —
//! the classic equal-angle latitude–longitude grid and the golden-angle
//! Fibonacci spiral lattice — and measures the area of spherical regions
//! (caps and cap unions) by counting the weighted lattice points they cover.
//! A Monte Carlo harness characterizes the measurement error over randomly
//! placed caps, fits the observed rmse scaling laws, and provides an exact
//! per-center maximum-error oracle plus a random-sampling baseline.
//!
//! Coordinates are geographic degrees at the API surface; distances and cap
//! radii are angles in radians on a unit sphere (all areas are reported as
//! fractions of the whole sphere, so results are scale-free).

pub mod bench;
pub mod estimate;
pub mod geo;
pub mod lattice;

mod error;
mod sum;

pub use error::{Error, Result};
