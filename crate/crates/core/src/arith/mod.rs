//! Reciprocal designs: software oracles and XMG generators for the integer
//! division and Newton-Raphson datapaths.

mod design;
mod fixed;
mod gen;
mod words;

pub use design::{
    design_table, newton_model, newton_trace, oracle_reciprocal, Design, DesignSpec, NewtonTrace,
};
pub use fixed::{FixedPointValue, INT_BITS, MAX_FRAC_BITS};
pub use gen::{gen_design_xmg, gen_intdiv_xmg, gen_newton_xmg};
