//! Set-valued dynamics on compact metric spaces.
//!
//! A finite family `F = {f_1, ..., f_k}` of continuous self-maps acts on a
//! point by sending it to the set of its images. This crate evaluates such
//! systems exactly where the space allows it, lifts them to the hyperspace of
//! finite sets under the Hausdorff metric, and runs bounded checkers for the
//! usual recurrence and mixing properties.

pub mod checkers;
pub mod error;
pub mod experiments;
pub mod hyperspace;
pub mod relation;
pub mod spaces;

pub use error::{Error, Result};
