//! Combinatorics of Δ, Δⁿ and Γ: factorizations, slices over sequences,
//! cellular maps, the nerve filtration, and the functor to Γ.

pub mod category;
pub mod error;
pub mod gamma;
pub mod nerve;
pub mod simplex;
pub mod slice;
pub mod tally;

pub use error::{CombinatError, Result};
pub use tally::{Tally, Verdict};
pub use simplex::{Budget, Cell, DeltaMorphism, DeltaNMorphism, DeltaNObject, DeltaObject, MorphismClass};
