//! Exact arithmetic on central Cantor sets.
//!
//! Certified sum and product decompositions of reals into points of
//! central Cantor sets `C_α`, with every step carried in exact rationals.

pub mod c1_maps;
pub mod cantor_model;
pub mod engine;
pub mod error;
pub mod intervals;
pub mod oracle;
pub mod parameters;
pub mod product_solver;
pub mod ratio;
pub mod sum_solver;

pub use error::{Error, Result};
pub use ratio::Ratio;
