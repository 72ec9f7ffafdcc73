use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub line: usize,
    pub positive: bool,
}

impl Control {
    pub fn pos(line: usize) -> Self {
        Control {
            line,
            positive: true,
        }
    }

    pub fn neg(line: usize) -> Self {
        Control {
            line,
            positive: false,
        }
    }

    /// Control on `line` that fires when the line equals `value`.
    pub fn when(line: usize, value: bool) -> Self {
        Control {
            line,
            positive: value,
        }
    }
}

/// Mixed-polarity multiple-controlled Toffoli gate: flips `target` iff every
/// positive control is 1 and every negative control is 0.
///
/// Controls are kept sorted by line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MctGate {
    target: usize,
    controls: Vec<Control>,
}

impl MctGate {
    pub fn new(target: usize, mut controls: Vec<Control>) -> Result<Self> {
        controls.sort();
        for pair in controls.windows(2) {
            if pair[0].line == pair[1].line {
                return Err(Error::invalid(
                    "gate",
                    format!("line {} is controlled twice", pair[0].line),
                ));
            }
        }
        if controls.iter().any(|c| c.line == target) {
            return Err(Error::invalid(
                "gate",
                format!("target {target} is also a control"),
            ));
        }
        Ok(MctGate { target, controls })
    }

    pub fn not(target: usize) -> Self {
        MctGate {
            target,
            controls: Vec::new(),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        MctGate::new(target, vec![Control::pos(control)]).expect("control differs from target")
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    pub fn positive_controls(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().filter(|c| c.positive).map(|c| c.line)
    }

    pub fn negative_controls(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().filter(|c| !c.positive).map(|c| c.line)
    }

    pub fn max_line(&self) -> usize {
        self.controls
            .iter()
            .map(|c| c.line)
            .chain(std::iter::once(self.target))
            .max()
            .unwrap_or(0)
    }

    /// Applies the gate to 64 lanes at once (`lanes[line]`).
    #[inline]
    pub fn apply_lanes(&self, lanes: &mut [u64]) {
        let mut fire = u64::MAX;
        for c in &self.controls {
            let v = lanes[c.line];
            fire &= if c.positive { v } else { !v };
        }
        lanes[self.target] ^= fire;
    }
}
