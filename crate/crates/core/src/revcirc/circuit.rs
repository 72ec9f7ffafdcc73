use crate::embedding::{Embedding, Permutation};
use crate::error::{Error, Result};
use crate::limits::{bit_of, mask_of, Limits};
use crate::logic::TruthTable;
use crate::revcirc::MctGate;

/// Metadata of one circuit line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Line {
    pub name: String,
    /// `None` for a primary input, otherwise the constant the line starts with.
    pub constant: Option<bool>,
    /// Whether the line's final value is discarded.
    pub garbage: bool,
}

impl Line {
    pub fn input(name: impl Into<String>) -> Self {
        Line {
            name: name.into(),
            constant: None,
            garbage: true,
        }
    }

    pub fn constant(name: impl Into<String>, value: bool) -> Self {
        Line {
            name: name.into(),
            constant: Some(value),
            garbage: true,
        }
    }

    pub fn output(mut self) -> Self {
        self.garbage = false;
        self
    }
}

/// Cascade of MCT gates over named lines.
///
/// Primary inputs are the lines without a constant, in line order; output
/// `j` is the `j`-th non-garbage line. States are packed MSB first: line `i`
/// of an `r`-line circuit is bit `r - 1 - i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RevCircuit {
    lines: Vec<Line>,
    gates: Vec<MctGate>,
}

#[derive(Clone, Copy)]
struct Masks {
    pos: u64,
    neg: u64,
    target: u64,
}

/// Input on which a circuit disagrees with the expected truth table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub input: u64,
    pub expected: u64,
    pub actual: u64,
}

impl RevCircuit {
    pub fn new(lines: Vec<Line>) -> Self {
        RevCircuit {
            lines,
            gates: Vec::new(),
        }
    }

    /// `width` anonymous lines `l1..lr`, all primary inputs and outputs.
    pub fn with_width(width: usize) -> Self {
        RevCircuit::new(
            (1..=width)
                .map(|i| Line {
                    name: format!("l{i}"),
                    constant: None,
                    garbage: false,
                })
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.lines.len()
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn gates(&self) -> &[MctGate] {
        &self.gates
    }

    pub fn push(&mut self, gate: MctGate) -> Result<()> {
        if gate.max_line() >= self.width() {
            return Err(Error::invalid(
                "circuit",
                format!("gate touches line {} of {}", gate.max_line(), self.width()),
            ));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub(crate) fn emit(&mut self, gate: MctGate) {
        debug_assert!(gate.max_line() < self.width());
        self.gates.push(gate);
    }

    pub(crate) fn add_line(&mut self, line: Line) -> usize {
        self.lines.push(line);
        self.lines.len() - 1
    }

    pub fn set_lines(&mut self, lines: Vec<Line>) -> Result<()> {
        if lines.len() != self.lines.len() {
            return Err(Error::invalid("circuit", "line count mismatch"));
        }
        self.lines = lines;
        Ok(())
    }

    /// Same lines, gates in reverse order: the inverse circuit.
    pub fn reversed(&self) -> RevCircuit {
        RevCircuit {
            lines: self.lines.clone(),
            gates: self.gates.iter().rev().cloned().collect(),
        }
    }

    pub fn input_lines(&self) -> Vec<usize> {
        (0..self.width())
            .filter(|&l| self.lines[l].constant.is_none())
            .collect()
    }

    pub fn output_lines(&self) -> Vec<usize> {
        (0..self.width())
            .filter(|&l| !self.lines[l].garbage)
            .collect()
    }

    /// Embedding described by the line metadata.
    pub fn embedding(&self) -> Embedding {
        let input_lines = self.input_lines();
        let output_lines = self.output_lines();
        Embedding {
            num_inputs: input_lines.len(),
            num_outputs: output_lines.len(),
            width: self.width(),
            input_lines,
            constant_inputs: (0..self.width())
                .filter_map(|l| self.lines[l].constant.map(|c| (l, c)))
                .collect(),
            output_lines,
            garbage_lines: (0..self.width())
                .filter(|&l| self.lines[l].garbage)
                .collect(),
        }
    }

    fn masks(&self) -> Vec<Masks> {
        let r = self.width();
        self.gates
            .iter()
            .map(|g| Masks {
                pos: g.positive_controls().fold(0, |a, l| a | mask_of(r, l)),
                neg: g.negative_controls().fold(0, |a, l| a | mask_of(r, l)),
                target: mask_of(r, g.target()),
            })
            .collect()
    }

    fn run_masks(masks: &[Masks], mut state: u64) -> u64 {
        for m in masks {
            if state & m.pos == m.pos && state & m.neg == 0 {
                state ^= m.target;
            }
        }
        state
    }

    /// Applies the cascade to one `r`-bit state (`r <= 64`).
    pub fn simulate(&self, state: u64) -> u64 {
        assert!(self.width() <= 64, "word simulation needs at most 64 lines");
        Self::run_masks(&self.masks(), state)
    }

    /// Applies the cascade to 64 states at once; `lanes[line]` holds the
    /// line's value in each lane.
    pub fn simulate_lanes(&self, lanes: &mut [u64]) {
        assert_eq!(lanes.len(), self.width());
        for g in &self.gates {
            g.apply_lanes(lanes);
        }
    }

    /// The permutation realized by the circuit.
    pub fn simulate_full(&self, limits: &Limits) -> Result<Permutation> {
        Error::check_limit("permutation width", self.width(), limits.perm_width)?;
        let masks = self.masks();
        let images = (0..1u64 << self.width())
            .map(|x| Self::run_masks(&masks, x))
            .collect();
        Permutation::new(self.width(), images)
    }

    /// Simulates all `2^n` primary input assignments (constants per the
    /// embedding), 64 at a time, and hands each batch's final lanes to `visit`
    /// together with the first input and lane count.
    fn for_each_batch(
        &self,
        emb: &Embedding,
        mut visit: impl FnMut(u64, usize, &[u64]) -> bool,
    ) -> bool {
        let n = emb.num_inputs;
        let total = 1u64 << n;
        let mut base = 0u64;
        let mut lanes = vec![0u64; self.width()];
        while base < total {
            let count = (total - base).min(64) as usize;
            lanes.iter_mut().for_each(|l| *l = 0);
            for &(line, value) in &emb.constant_inputs {
                lanes[line] = if value { u64::MAX } else { 0 };
            }
            for (i, &line) in emb.input_lines.iter().enumerate() {
                let m = mask_of(n, i);
                lanes[line] = (0..count).fold(0u64, |acc, k| {
                    acc | ((((base + k as u64) & m) != 0) as u64) << k
                });
            }
            self.simulate_lanes(&mut lanes);
            if !visit(base, count, &lanes) {
                return false;
            }
            base += count as u64;
        }
        true
    }

    /// First input (in increasing order) whose designated outputs disagree with `tt`.
    pub fn find_counterexample(&self, tt: &TruthTable, emb: &Embedding) -> Option<Counterexample> {
        let m = tt.num_outputs();
        if emb.width != self.width() || emb.num_inputs != tt.num_inputs() || emb.num_outputs != m {
            return Some(Counterexample {
                input: 0,
                expected: tt.row(0),
                actual: u64::MAX,
            });
        }
        let mut found = None;
        self.for_each_batch(emb, |base, count, lanes| {
            for k in 0..count {
                let actual = emb
                    .output_lines
                    .iter()
                    .enumerate()
                    .filter(|(_, &line)| lanes[line] >> k & 1 == 1)
                    .fold(0, |acc, (j, _)| acc | mask_of(m, j));
                let x = base + k as u64;
                if actual != tt.row(x) {
                    found = Some(Counterexample {
                        input: x,
                        expected: tt.row(x),
                        actual,
                    });
                    return false;
                }
            }
            true
        });
        found
    }

    /// Whether every garbage line ends where it started, on every input:
    /// inputs are restored and ancillas return to their constants.
    pub fn is_garbage_free(&self) -> bool {
        let emb = self.embedding();
        let n = emb.num_inputs;
        let input_pos: Vec<Option<usize>> = {
            let mut v = vec![None; self.width()];
            for (i, &l) in emb.input_lines.iter().enumerate() {
                v[l] = Some(i);
            }
            v
        };
        self.for_each_batch(&emb, |base, count, lanes| {
            let valid = if count == 64 {
                u64::MAX
            } else {
                (1u64 << count) - 1
            };
            (0..self.width())
                .filter(|&l| self.lines[l].garbage)
                .all(|l| {
                    let expected = match (self.lines[l].constant, input_pos[l]) {
                        (Some(true), _) => u64::MAX,
                        (Some(false), _) => 0,
                        (None, Some(i)) => (0..count).fold(0u64, |acc, k| {
                            acc | (bit_of(base + k as u64, n, i) as u64) << k
                        }),
                        (None, None) => unreachable!(),
                    };
                    (lanes[l] ^ expected) & valid == 0
                })
        })
    }
}

/// Exhaustive check that `circ` computes `tt` under `emb`.
pub fn verify_circuit(circ: &RevCircuit, tt: &TruthTable, emb: &Embedding) -> bool {
    circ.find_counterexample(tt, emb).is_none()
}
