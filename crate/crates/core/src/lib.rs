//! Homological lower bounds on the number of rules of a complete term
//! rewriting system.

pub mod conversion;
pub mod critical;
pub mod equiv;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod linalg;
pub mod report;
pub mod syntax;
pub mod term;
pub mod tietze;
pub mod trs;

pub use error::{Error, Result};
