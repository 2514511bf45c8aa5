//! Exact computations with Verma modules over sl(2) and the Virasoro algebra:
//! Gram matrices and the Kac determinant, Fock-space realizations, formal
//! series geometry of the coefficient space of univalent functions, and a
//! linear constraint solver for tensor-operator families.

pub mod error;
pub mod exactalg;
pub mod fock;
pub mod geometry;
pub mod graded;
pub mod nomizu;
pub mod partitions;
pub mod report;
pub mod sl2verma;
pub mod virasoro;

pub use error::{Error, Result};
