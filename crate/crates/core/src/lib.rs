//! Norm growth of powers of `{0,1}`-matrices.
//!
//! A `b x b` matrix `M` with entries in `{0,1}` is read as the adjacency
//! matrix of a digraph on `{1, ..., b}`. The crate classifies the growth
//! of `‖M^n‖` (the entry sum), enumerates admissible words, decides
//! permutation similarity and re-checks the underlying combinatorial
//! statements by exhaustive enumeration.

pub mod classifier;
pub mod cli;
pub mod digraph;
pub mod equivalence;
pub mod error;
mod json;
pub mod matrix;
pub mod symbolic;
pub mod verify;

pub use classifier::{classify, dimension, spectral_radius, sup_norm, GrowthClass};
pub use error::{Error, Result};
pub use json::big_strings;
pub use matrix::{BitMatrix, NatMatrix};
