use crate::error::{Error, Result};
use crate::limits::{bit_of, low_mask};

/// Explicit multi-output Boolean function `B^n -> B^m`.
///
/// Row `x` holds the output word for the input whose binary numeral is `x`,
/// with input 0 as the most significant bit. Within an output word, output 0
/// is the most significant of the `m` bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    num_inputs: usize,
    num_outputs: usize,
    rows: Vec<u64>,
}

impl TruthTable {
    pub fn new(num_inputs: usize, num_outputs: usize, rows: Vec<u64>) -> Result<Self> {
        if num_inputs >= 64 {
            return Err(Error::invalid("truth table", "too many inputs"));
        }
        if num_outputs > 64 {
            return Err(Error::invalid("truth table", "more than 64 outputs"));
        }
        if rows.len() != 1usize << num_inputs {
            return Err(Error::invalid(
                "truth table",
                format!("expected {} rows, got {}", 1usize << num_inputs, rows.len()),
            ));
        }
        let mask = low_mask(num_outputs);
        if let Some(x) = rows.iter().position(|&r| r & !mask != 0) {
            return Err(Error::invalid(
                "truth table",
                format!("row {x} does not fit in {num_outputs} output bits"),
            ));
        }
        Ok(TruthTable {
            num_inputs,
            num_outputs,
            rows,
        })
    }

    /// Tabulates `f` over all `2^num_inputs` inputs; output words are masked to `num_outputs` bits.
    pub fn from_fn(num_inputs: usize, num_outputs: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        if num_inputs >= 64 {
            return Err(Error::invalid("truth table", "too many inputs"));
        }
        let mask = low_mask(num_outputs);
        let rows = (0..1u64 << num_inputs).map(|x| f(x) & mask).collect();
        TruthTable::new(num_inputs, num_outputs, rows)
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn num_outputs(&self) -> usize {
        self.num_outputs
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, x: u64) -> u64 {
        self.rows[x as usize]
    }

    /// Value of output `j` on input `x`.
    pub fn output(&self, x: u64, j: usize) -> bool {
        bit_of(self.rows[x as usize], self.num_outputs, j)
    }

    /// Column of output `j`, one entry per row.
    pub fn column(&self, j: usize) -> Vec<bool> {
        (0..self.rows.len() as u64)
            .map(|x| self.output(x, j))
            .collect()
    }

    pub fn is_bijective(&self) -> bool {
        if self.num_inputs != self.num_outputs {
            return false;
        }
        let mut seen = vec![false; self.rows.len()];
        for &r in &self.rows {
            if std::mem::replace(&mut seen[r as usize], true) {
                return false;
            }
        }
        true
    }

    /// Plain text form: one binary output word per line, rows in input order.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * (self.num_outputs + 1));
        for &r in &self.rows {
            for j in 0..self.num_outputs {
                out.push(if bit_of(r, self.num_outputs, j) {
                    '1'
                } else {
                    '0'
                });
            }
            out.push('\n');
        }
        out
    }

    /// Parses [`TruthTable::to_text`] output; `#` lines and blank lines are skipped.
    /// The input count is inferred from the number of rows.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut width: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            match width {
                None => width = Some(line.len()),
                Some(w) if w != line.len() => {
                    return Err(Error::parse(
                        "truth table",
                        lineno,
                        format!("expected {w} output bits, got {}", line.len()),
                    ))
                }
                _ => {}
            }
            if line.len() > 64 {
                return Err(Error::parse("truth table", lineno, "more than 64 outputs"));
            }
            let mut word = 0u64;
            for ch in line.chars() {
                word <<= 1;
                match ch {
                    '0' => {}
                    '1' => word |= 1,
                    other => {
                        return Err(Error::parse(
                            "truth table",
                            lineno,
                            format!("unexpected character {other:?}"),
                        ))
                    }
                }
            }
            rows.push(word);
        }
        if !rows.len().is_power_of_two() {
            return Err(Error::parse(
                "truth table",
                text.lines().count(),
                format!("{} rows is not a power of two", rows.len()),
            ));
        }
        let n = rows.len().trailing_zeros() as usize;
        TruthTable::new(n, width.unwrap_or(0), rows)
    }
}
