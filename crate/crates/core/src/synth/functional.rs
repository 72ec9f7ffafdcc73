use crate::embedding::{optimum_embed, Permutation};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::TruthTable;
use crate::revcirc::{Control, Line, MctGate, RevCircuit};

/// Widest permutation for which [`tbs_with_trace`] keeps per-row snapshots.
pub const TRACE_WIDTH_LIMIT: usize = 12;

/// Working permutation `g` with its inverse, updated by output-side gates.
struct Working {
    width: usize,
    images: Vec<u64>,
    preimages: Vec<u64>,
}

impl Working {
    fn new(perm: &Permutation) -> Self {
        let images = perm.images().to_vec();
        let mut preimages = vec![0u64; images.len()];
        for (x, &y) in images.iter().enumerate() {
            preimages[y as usize] = x as u64;
        }
        Working {
            width: perm.width(),
            images,
            preimages,
        }
    }

    /// `g := gate . g` for a gate with positive controls `controls` and target
    /// bit `target` (both as word masks).
    fn apply(&mut self, controls: u64, target: u64) {
        let full = if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        };
        let free = full & !(controls | target);
        let mut s = free;
        loop {
            let lo = controls | s;
            let hi = lo | target;
            let (p, q) = (self.preimages[lo as usize], self.preimages[hi as usize]);
            self.images[p as usize] = hi;
            self.images[q as usize] = lo;
            self.preimages[lo as usize] = q;
            self.preimages[hi as usize] = p;
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
    }
}

fn bits(word: u64) -> impl Iterator<Item = u32> {
    (0..64).filter(move |b| word >> b & 1 == 1)
}

fn run(perm: &Permutation, mut trace: Option<&mut Vec<Vec<u64>>>) -> RevCircuit {
    let r = perm.width();
    let line = |b: u32| r - 1 - b as usize;
    let gate = |controls: u64, b: u32| {
        MctGate::new(
            line(b),
            bits(controls).map(|c| Control::pos(line(c))).collect(),
        )
        .expect("target bit is never a control bit")
    };
    let mut g = Working::new(perm);
    let mut gates = Vec::new();
    for i in 0..1u64 << r {
        let mut y = g.images[i as usize];
        if y != i {
            for b in bits(i & !y) {
                gates.push(gate(y, b));
                g.apply(y, 1 << b);
                y |= 1 << b;
            }
            for b in bits(y & !i) {
                gates.push(gate(i, b));
                g.apply(i, 1 << b);
            }
            debug_assert_eq!(g.images[i as usize], i);
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push(g.images.clone());
        }
    }
    let mut circ = RevCircuit::with_width(r);
    for gate in gates.into_iter().rev() {
        circ.emit(gate);
    }
    circ
}

/// Transformation-based synthesis: a positive-control Toffoli cascade on the
/// permutation's own lines that simulates to `perm`.
pub fn tbs(perm: &Permutation) -> RevCircuit {
    run(perm, None)
}

/// [`tbs`] plus the working permutation after each row.
pub fn tbs_with_trace(perm: &Permutation) -> Result<(RevCircuit, Vec<Vec<u64>>)> {
    Error::check_limit("traced permutation width", perm.width(), TRACE_WIDTH_LIMIT)?;
    let mut trace = Vec::with_capacity(1 << perm.width());
    let circ = run(perm, Some(&mut trace));
    Ok((circ, trace))
}

/// Whether every row `j <= i` is a fixed point of snapshot `i`.
pub fn tbs_invariant_check(perm: &Permutation, trace: &[Vec<u64>]) -> bool {
    let size = 1usize << perm.width();
    trace.len() == size
        && trace.iter().enumerate().all(|(i, snap)| {
            snap.len() == size && snap[..=i].iter().enumerate().all(|(j, &y)| y == j as u64)
        })
}

/// Optimum-line embedding of `tt` followed by [`tbs`], with line metadata
/// describing the embedding.
pub fn functional_synth(tt: &TruthTable, limits: &Limits) -> Result<RevCircuit> {
    let (perm, emb) = optimum_embed(tt, limits)?;
    let mut circ = tbs(&perm);
    let r = emb.width;
    let first_output = r - emb.num_outputs;
    let mut ancilla = 0;
    let lines = (0..r)
        .map(|l| {
            let mut line = if l < emb.num_inputs {
                Line::input(format!("x{}", l + 1))
            } else if l >= first_output {
                Line::constant(format!("y{}", l - first_output + 1), false)
            } else {
                ancilla += 1;
                Line::constant(format!("a{ancilla}"), false)
            };
            if l >= first_output {
                line = line.output();
            }
            line
        })
        .collect();
    circ.set_lines(lines)?;
    debug_assert_eq!(circ.embedding(), emb);
    Ok(circ)
}
