//! Exact Igusa local zeta functions of Newton non-degenerate polynomials.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod newton;
pub mod oracle;
pub mod padic;
pub mod poly;
pub mod ratfun;
pub mod report;
pub mod scalar;
pub mod spf;

pub use error::{IgusaError, Result};
