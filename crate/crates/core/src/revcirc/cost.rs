use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::revcirc::RevCircuit;

/// T-count of an MCT gate as a function of its control count.
///
/// The default charges nothing for NOT/CNOT, 7 for a Toffoli and
/// `8(c - 2) + 7` for `c >= 3` controls (linear decomposition with clean
/// ancillas). Negative controls cost the same as positive ones. Explicit
/// entries override the formula for individual control counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostModel {
    overrides: BTreeMap<usize, u64>,
}

impl CostModel {
    pub fn default_t_count(controls: usize) -> u64 {
        match controls {
            0 | 1 => 0,
            c => 8 * (c as u64 - 2) + 7,
        }
    }

    pub fn with_overrides(overrides: BTreeMap<usize, u64>) -> Result<Self> {
        let model = CostModel { overrides };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.t_count(0) != 0 || self.t_count(1) != 0 {
            return Err(Error::invalid("cost model", "NOT and CNOT must cost 0"));
        }
        let top = self.overrides.keys().next_back().copied().unwrap_or(0) + 1;
        for c in 0..top {
            if self.t_count(c + 1) < self.t_count(c) {
                return Err(Error::invalid(
                    "cost model",
                    format!("T-count decreases from {c} to {} controls", c + 1),
                ));
            }
        }
        Ok(())
    }

    pub fn t_count(&self, controls: usize) -> u64 {
        self.overrides
            .get(&controls)
            .copied()
            .unwrap_or_else(|| Self::default_t_count(controls))
    }

    /// Parses `c: T` lines (`#` comments allowed) as overrides of the default.
    pub fn parse(text: &str) -> Result<Self> {
        let mut overrides = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let bad = || {
                Error::parse(
                    "cost model",
                    idx + 1,
                    format!("expected `c: T`, got {line:?}"),
                )
            };
            let (c, t) = line.split_once(':').ok_or_else(bad)?;
            let c: usize = c.trim().parse().map_err(|_| bad())?;
            let t: u64 = t.trim().parse().map_err(|_| bad())?;
            overrides.insert(c, t);
        }
        CostModel::with_overrides(overrides)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CostReport {
    pub qubits: usize,
    pub gates: usize,
    pub t_count: u64,
    /// Number of gates per control count.
    pub controls_histogram: BTreeMap<usize, usize>,
}

pub fn cost_report(circ: &RevCircuit, model: &CostModel) -> CostReport {
    let mut controls_histogram = BTreeMap::new();
    let mut t_count = 0;
    for g in circ.gates() {
        *controls_histogram.entry(g.num_controls()).or_insert(0) += 1;
        t_count += model.t_count(g.num_controls());
    }
    CostReport {
        qubits: circ.width(),
        gates: circ.gates().len(),
        t_count,
        controls_histogram,
    }
}
