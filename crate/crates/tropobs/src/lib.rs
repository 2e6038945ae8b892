//! Superabundancy of tropical curves and the dual obstruction space `H`,
//! computed with exact rational linear algebra.

pub mod cli;
pub mod curve;
pub mod error;
pub mod fm;
pub mod gen;
pub mod graph;
pub mod higher_valent;
pub mod linalg;
pub mod obstruction;
pub mod rational;
pub mod report;
pub mod resolve;

pub use error::{Error, Result};
