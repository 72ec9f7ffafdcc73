//! Function representations: explicit truth tables, ESOP cube lists and
//! XOR-majority graphs, with conversions and text formats.

mod esop;
mod pla;
mod truth_table;
mod xmg;

pub use esop::{esop_from_tt, esop_minimize, Cube, EsopForm, Polarity};
pub use pla::{read_pla, write_pla};
pub use truth_table::TruthTable;
pub use xmg::{tt_from_xmg, Edge, Node, Xmg, XmgBuilder};
