//! Conformal navigation transformations for planar robot workspaces.
//!
//! This crate maps a bounded, multiply connected 2D workspace with smooth
//! obstacle boundaries onto a *sphere world* (unit disk with circular holes)
//! by composing simply connected conformal maps built from boundary integral
//! equations. On the circular image domain the Koditschek–Rimon navigation
//! function has a closed form; its gradient is pulled back through the map's
//! Jacobian to drive kinematic and second-order point robots to a goal
//! without collisions.
//!
//! Pipeline: [`geometry`] describes workspaces as spectrally sampled closed
//! curves, [`boundary_integral`] solves the Riemann–Hilbert system for each
//! single-curve map, [`simply_connected`] assembles interior/exterior unit
//! disk maps, [`koebe`] iterates them to circularize every boundary,
//! [`navigation`] evaluates the navigation function and its gradient, and
//! [`control_sim`] integrates the closed-loop robot models.

pub mod boundary_integral;
pub mod cauchy;
pub mod control_sim;
pub mod error;
pub mod geometry;
pub mod koebe;
pub mod navigation;
pub mod simply_connected;
pub mod spectral;

pub use error::{Error, Result};

/// Complex scalar used throughout: points in the plane are `re + i*im`.
pub type Complex = num_complex::Complex64;
