//! Simulation of the entropic, state-independent contextuality test on a
//! single photonic four-level system.
//!
//! * [`qcore`]: two-qubit linear algebra, Pauli operators and the 26 tested states
//! * [`pmsquare`]: the Peres–Mermin observables, contexts and outcome statistics
//! * [`nct`]: the noncontextual value-assignment model and quantum/classical mixing
//! * [`entropic`]: binary entropies and the entropic inequality
//! * [`photonlab`]: shot-noise simulation, bootstrap errors and table generation
//! * [`optics`]: Jones-calculus model of the wave-plate/beam-displacer devices
//!
//! The algebra is generic over [`Scalar`]; the aliases below pin the common
//! instantiations.

pub mod entropic;
pub mod error;
pub mod nct;
pub mod optics;
pub mod photonlab;
pub mod pmsquare;
pub mod qcore;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Rational, Real, Scalar};

pub type Complex64 = num_complex::Complex<f64>;
pub type Operator2 = qcore::Operator<f64, 2>;
pub type Operator4 = qcore::Operator<f64, 4>;
pub type DensityMatrix = qcore::DensityMatrix<f64>;
pub type StateVector = qcore::StateVector<f64>;
pub type JointDistribution8 = pmsquare::JointDistribution8<f64>;
pub type ProductDistribution = pmsquare::BinaryDistribution<f64>;
pub type EntropySextet = entropic::EntropySextet<f64>;

pub type ExactOperator4 = qcore::Operator<Rational, 4>;
pub type ExactDensityMatrix = qcore::DensityMatrix<Rational>;
pub type ExactJointDistribution8 = pmsquare::JointDistribution8<Rational>;
pub type ExactProductDistribution = pmsquare::BinaryDistribution<Rational>;

pub type DensityMatrix32 = qcore::DensityMatrix<f32>;
