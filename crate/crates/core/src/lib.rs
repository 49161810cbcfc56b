//! Finite quantum graphs `(B, psi, A)` as concrete numerical objects.
//!
//! The crate builds quantum edge indicators and edge correspondences,
//! truncated Fock representations, and evaluates the quantum Cuntz-Krieger
//! relation systems for concrete operator families.

pub mod cli;
pub mod constructors;
pub mod correspondence;
pub mod error;
pub mod fock;
pub mod graph;
pub mod linalg;
pub mod relations;
pub mod space;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
pub use graph::{LinearMapOnB, QuantumGraph};
pub use relations::CkFamily;
pub use space::{
    adapted_unit, gns_inner, modular_half, modular_minus_i, AlgebraElement, BlockStructure,
    DeltaState,
};
pub use tensor::{comultiply, sharp, TensorElement};
