//! Kisin varieties of two-dimensional irreducible mod-p representations with a
//! tame principal-series type: genes, equations, components, genre strata,
//! and an independent lattice-level verification oracle.

pub mod components;
pub mod decorate;
pub mod error;
pub mod expr;
pub mod field;
pub mod gene;
pub mod laurent;
pub mod lattice;
pub mod params;
pub mod pipeline;
pub mod random;
pub mod strata;
pub mod variety;

pub use error::{Error, Result};
pub use gene::{compute_gene, Gene, Symbol, Symbols};
pub use params::Params;
