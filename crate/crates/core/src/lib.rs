//! Relativistic scalar field modes on the spacetime/four-velocity tangent
//! bundle, with a universal maximal proper acceleration.
//!
//! The crate evaluates the separable mode functions in log-domain form,
//! checks them against the eight-dimensional wave operator by finite
//! differences, verifies the kinematic lower bound `a·v/a >= 1`, and
//! computes the exponential suppression of macroscopic many-body states.

pub mod cli;
pub mod error;
pub mod extremum;
pub mod fock;
pub mod format;
pub mod kinematics;
pub mod modes;
pub mod pde;
pub mod transition;
pub mod units;

pub use error::{Error, Result};
pub use kinematics::{DeviceState, FourVector, ParticleKinematics, ThreeVector};
pub use modes::{Branch, LogAmplitude, ModeSpec};
pub use units::{PhysicalConstants, UnitContext, UnitMode};
