//! Normalised, nondegenerate Rayleigh-Schrödinger perturbation theory
//! expressed through Bloch diagrams.
//!
//! The crate enumerates Bloch sequences, computes the exact rational
//! coefficients `c` (eigenvector) and `e` (eigenvalue) by recurrence and in
//! closed form, groups diagrams into operator-equivalence classes, and
//! evaluates the energy and normalised eigenvector corrections of concrete
//! Hamiltonians to arbitrary order.

pub mod cli;
pub mod coeff;
pub mod diagram;
pub mod equivalence;
pub mod error;
pub mod rational;
pub mod render;
pub mod report;
pub mod series;
pub mod spectral;
pub mod verify;

pub use coeff::{CoefficientEngine, Method};
pub use diagram::{BlochSequence, CrossingNumbers, ZDecomposition};
pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{CorrectionSeries, Route};
pub use spectral::HamiltonianSpec;
