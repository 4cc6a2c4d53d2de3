//! Finite modules over `ℤ/m`, algebras and bimodules, relative tensor
//! products, Segal presheaves, and the double category of algebras.

pub mod error;
pub mod alg;
pub mod algebra;
pub mod bimodule;
pub mod composite;
pub mod corpus;
pub mod lattice;
pub mod segal;
pub mod sweeps;
pub mod module;

pub use error::{AlgebraError, Result};
