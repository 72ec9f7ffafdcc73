//! Reversible logic synthesis for arithmetic designs.
//!
//! The crate covers the whole flow from a combinational design to a verified
//! Toffoli cascade: reciprocal generators ([`arith`]), logic representations
//! ([`logic`]), reversible embeddings ([`embedding`]), the circuit IR with
//! simulation and costing ([`revcirc`]) and three synthesis back ends
//! ([`synth`]).

pub mod arith;
pub mod embedding;
pub mod error;
mod limits;
pub mod logic;
pub mod revcirc;
pub mod synth;
#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use limits::{Limits, TT_LIMIT_ENV};
