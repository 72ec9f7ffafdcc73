use crate::limits::bit_of;
use crate::logic::{EsopForm, Polarity};
use crate::revcirc::{Control, Line, MctGate, RevCircuit};

fn bennett_lines(n: usize, m: usize) -> RevCircuit {
    let inputs = (1..=n).map(|i| Line::input(format!("x{i}")));
    let outputs = (1..=m).map(|j| Line::constant(format!("y{j}"), false).output());
    RevCircuit::new(inputs.chain(outputs).collect())
}

fn cube_controls(esop: &EsopForm, idx: usize) -> Vec<Control> {
    esop.cubes()[idx]
        .literals(esop.num_inputs())
        .into_iter()
        .map(|(i, pol)| Control::when(i, pol == Polarity::Positive))
        .collect()
}

fn cube_outputs(esop: &EsopForm, idx: usize) -> impl Iterator<Item = usize> + '_ {
    let m = esop.num_outputs();
    let mask = esop.cubes()[idx].outputs;
    (0..m).filter(move |&j| bit_of(mask, m, j))
}

/// One mixed-polarity Toffoli per (cube, output) pair on `n + m` lines:
/// inputs on lines `0..n`, zero-initialized outputs on lines `n..n+m`.
pub fn esop_synth(esop: &EsopForm) -> RevCircuit {
    let n = esop.num_inputs();
    let mut circ = bennett_lines(n, esop.num_outputs());
    for idx in 0..esop.cubes().len() {
        let controls = cube_controls(esop, idx);
        for j in cube_outputs(esop, idx) {
            let gate =
                MctGate::new(n + j, controls.clone()).expect("inputs and outputs are disjoint");
            circ.emit(gate);
        }
    }
    circ
}

/// Like [`esop_synth`], but a cube feeding several outputs is computed once
/// onto an output line that no earlier cube has touched (so the line holds
/// exactly that cube) and copied to the others with CNOTs.
pub fn esop_share_cubes(esop: &EsopForm) -> RevCircuit {
    let n = esop.num_inputs();
    let mut circ = bennett_lines(n, esop.num_outputs());
    let mut fed = vec![false; esop.num_outputs()];
    for idx in 0..esop.cubes().len() {
        let controls = cube_controls(esop, idx);
        let targets: Vec<usize> = cube_outputs(esop, idx).collect();
        let toffoli = |j: usize| {
            MctGate::new(n + j, controls.clone()).expect("inputs and outputs are disjoint")
        };
        match targets.iter().copied().find(|&j| !fed[j]) {
            Some(first) if targets.len() > 1 => {
                circ.emit(toffoli(first));
                for &j in targets.iter().filter(|&&j| j != first) {
                    circ.emit(MctGate::cnot(n + first, n + j));
                }
            }
            _ => targets.iter().for_each(|&j| circ.emit(toffoli(j))),
        }
        targets.iter().for_each(|&j| fed[j] = true);
    }
    circ
}
