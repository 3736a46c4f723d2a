//! Tonal loading-noise prediction for rotating centrifugal-fan impellers.
//!
//! The crate is organised as a pipeline:
//!
//! * [`geom`] builds the panelised blade, shroud and backplate surfaces and
//!   provides rigid-rotation kinematics plus closed-form design checks.
//! * [`sources`] produces per-panel surface-pressure histories, either
//!   synthesised (steady blade loading, travelling recirculation modulation)
//!   or read from a CSV export.
//! * [`fwh`] integrates the loading (dipole) term of the acoustic analogy over
//!   the rotating panels and carries the analytic reference solutions.
//! * [`spectra`] estimates power spectral densities, labels tones on a shaft
//!   order grid and builds band-filtered surface source maps.

// Range checks are written as negated comparisons so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod format;
pub mod fwh;
pub mod geom;
pub mod sources;
pub mod spectra;

pub use error::{Error, Result};
pub use nalgebra::Vector3;
