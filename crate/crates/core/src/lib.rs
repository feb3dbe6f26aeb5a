//! Exact deciders, certifiers and instance generators for local minimizers of
//! graph-derived quadratic programs and quartic forms.
//!
//! Everything is computed in exact rational arithmetic. The exponential-time
//! oracles (stable sets, active-set enumeration) are capped to desk-scale
//! sizes and refuse larger inputs.

pub mod algebra;
pub mod error;
pub mod format;
pub mod graph;
pub mod localmin;
pub mod polyopt;
pub mod quartic;
pub mod report;
pub mod verdict;

pub use error::{Error, Result};
