//! Shared fixtures for the criterion benches.

use revflow::arith::{design_table, gen_design_xmg, DesignSpec};
use revflow::embedding::{optimum_embed, Permutation};
use revflow::logic::{esop_from_tt, esop_minimize, EsopForm, TruthTable, Xmg};
use revflow::Limits;

pub fn table(spec: &DesignSpec) -> TruthTable {
    design_table(spec, &Limits::default()).expect("bench sizes fit the table limit")
}

pub fn network(spec: &DesignSpec) -> Xmg {
    gen_design_xmg(spec).expect("valid bench spec")
}

pub fn minimized(spec: &DesignSpec) -> EsopForm {
    esop_minimize(&esop_from_tt(&table(spec)))
}

pub fn optimum_permutation(spec: &DesignSpec) -> Permutation {
    optimum_embed(&table(spec), &Limits::default())
        .expect("bench sizes fit the embedding limit")
        .0
}
