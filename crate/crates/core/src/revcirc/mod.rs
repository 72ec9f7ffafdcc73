//! Reversible circuit IR: MCT gates, simulation, verification, costing and
//! REAL text I/O.

mod circuit;
mod cost;
mod gate;
mod real;

pub use circuit::{verify_circuit, Counterexample, Line, RevCircuit};
pub use cost::{cost_report, CostModel, CostReport};
pub use gate::{Control, MctGate};
pub use real::{read_real, write_real};
