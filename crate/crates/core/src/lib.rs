//! Exact construction of the Virasoro-like operators attached to the
//! spectrum data of a Frobenius manifold, together with the machinery to
//! verify their commutation relations, genus-zero constraints and Hodge
//! deformations on concrete examples.

pub mod boson;
pub mod error;
pub mod exact;
pub mod genus_zero;
pub mod hodge;
pub mod lie;
pub mod report;
pub mod series;
pub mod spectrum;
pub mod stress_tensor;

pub use error::{Error, Result};
