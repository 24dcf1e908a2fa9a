//! Complex linear algebra on the two-qubit (spatial ⊗ polarization) space:
//! operators, Pauli matrices, eigenprojectors and the state catalog.

mod operator;
mod pauli;
mod state;

pub use operator::{Operator, Operator2, Operator4};
pub use pauli::{pauli, projector_pm, tensor, Pauli, Sign};
pub use state::{
    expectation, random_state, state_factory, CatalogState, DensityMatrix, RandomStateKind,
    StateVector,
};
