//! Poisson structures and conservation-law verification for rigid-body
//! rotation under axisymmetric force fields and gyroscopic torques.
//!
//! The crate builds the torque-modified 6×6 Poisson matrix, checks the
//! reduced Jacobi and Casimir condition equations numerically, integrates the
//! equations of motion with a controlled-order scheme, and monitors how well
//! the recovered conservation laws hold along trajectories — including the
//! corrected replacement for a published first integral that fails the
//! Casimir condition.

pub mod algebra;
pub mod catalog;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod poisson;
pub mod sample;
pub mod torque;

pub use algebra::{InertiaTensor, Mat3, State, SymMatrix3, Vec3};
pub use catalog::{NamedCasimir, Scenario};
pub use error::{Error, Result};
pub use fields::{Domain, Fn1, PolyGamma, ScalarField, ScalarField6};
pub use poisson::{Matrix6Skew, PoissonStructure};
pub use torque::TorqueModel;
