//! Executable combinatorics behind the improved upper bound on Graham's
//! number: hypercube edge classes and planar K4s, the SAT instance showing
//! that parallel-class colorings of `{-1,+1}^6` always contain a
//! monochromatic planar K4, the hyperbowtie / tic-tac-toe correspondence and
//! both coloring transfers, the 2x2-square counting bounds, and exact
//! up-arrow bound arithmetic.

pub mod bounds;
pub mod constructions;
pub mod cube;
pub mod encode;
pub mod error;
pub mod params;
pub mod solver;
pub mod squares;

pub use error::{Error, Result};
