//! Bound states of a particle confined to a helicoid stripe, and the quantum
//! Otto cycle driven by that spectrum.
//!
//! The crate is split by concern:
//!
//! * [`geometry`] holds the helicoid's metric quantities, curvatures, potentials
//!   and the finite-helicoid area.
//! * [`spectrum`] solves the dimensionless radial eigenproblem by shooting, with
//!   a finite-difference oracle and the flat (Bessel) limit.
//! * [`heun`] evaluates the confluent Heun series used as a closed-form
//!   cross-check of the radial wavefunction.
//! * [`otto`] runs the four-stroke cycle: populations, heats, work, efficiency,
//!   COP, operation modes, work windows and compression-ratio sweeps.
//!
//! [`ode`] and [`roots`] are the numerical building blocks underneath.

pub mod error;
pub mod geometry;
pub mod heun;
pub mod ode;
pub mod otto;
pub mod roots;
pub mod spectrum;

pub use error::{Error, Result};
pub use geometry::{CurvatureSample, HelicoidGeometry};
pub use otto::{BathParams, CycleConfig, CycleModel, CycleResult, Mode, Substance, SweepRow, SweepSpec, WorkingLevels};
pub use spectrum::{RadialMode, RadialProblem, Spectrum};
