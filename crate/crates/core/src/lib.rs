//! One-way communication over a single prime-dimensional system.
//!
//! The crate models prepare-and-measure protocols, shows that protocols
//! restricted to stabilizer states and MUB measurements are reproduced
//! exactly by a `d`-level classical message plus shared random dits, and
//! evaluates random access codes where a single non-stabilizer encoding
//! beats the classical optimum.

pub mod algebra;
pub mod channel;
pub mod error;
pub mod optimum;
pub mod rac;
pub mod simulation;
pub mod stabilizer;

pub use error::{Error, Result, ValidationError};
