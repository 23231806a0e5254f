//! Combinatorics, index theory, multiple-cover invariants and gluing
//! estimates for moduli spaces of bordered Riemann surfaces.

mod bigint_serde;
pub mod cli;
pub mod error;
pub mod gluing;
pub mod index;
pub mod invariants;
pub mod pants;
pub mod strata;
pub mod surface_types;

pub use error::{Error, Result};
