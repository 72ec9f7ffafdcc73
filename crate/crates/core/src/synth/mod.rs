//! Synthesis backends: transformation-based (from a permutation), ESOP-based
//! (from a cube list) and hierarchical (from an XMG).

mod esop;
mod functional;
mod hier;

pub use esop::{esop_share_cubes, esop_synth};
pub use functional::{
    functional_synth, tbs, tbs_invariant_check, tbs_with_trace, TRACE_WIDTH_LIMIT,
};
pub use hier::{hier_synth, hier_synth_with, Cleanup, HierOptions};
