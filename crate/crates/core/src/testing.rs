//! Shared generators for unit tests.

use rand::Rng;

use crate::logic::{Edge, Node, Xmg};

/// Raw (unsimplified) XMG over `inputs >= 1` inputs with occasional constant and repeated operands.
pub(crate) fn random_xmg(rng: &mut impl Rng, inputs: usize, gates: usize, outputs: usize) -> Xmg {
    let mut net = Xmg::new();
    for i in 0..inputs {
        net.add_input(format!("i{i}"));
    }
    fn pick(rng: &mut impl Rng, len: usize) -> Edge {
        let node = if rng.gen_ratio(1, 12) {
            0
        } else {
            rng.gen_range(1..len)
        };
        Edge::new(node, rng.gen_bool(0.4))
    }
    for _ in 0..gates {
        let len = net.nodes().len();
        if rng.gen_bool(0.5) {
            let ops = [pick(rng, len), pick(rng, len), pick(rng, len)];
            net.push_maj(ops[0], ops[1], ops[2]).unwrap();
        } else {
            net.push_xor(pick(rng, len), pick(rng, len)).unwrap();
        }
    }
    for j in 0..outputs {
        let len = net.nodes().len();
        let node = if rng.gen_ratio(1, 15) {
            0
        } else {
            rng.gen_range(len.saturating_sub(gates + 1).max(1)..len)
        };
        let e = Edge::new(node, rng.gen_bool(0.3));
        net.add_output(e, format!("o{j}")).unwrap();
    }
    net
}

/// Reference evaluation straight from the node definitions.
pub(crate) fn naive_eval(net: &Xmg, x: u64) -> u64 {
    fn value(net: &Xmg, x: u64, e: Edge) -> bool {
        let v = match net.node(e.node()) {
            Node::Const0 => false,
            Node::Input => {
                let i = net.inputs().iter().position(|&id| id == e.node()).unwrap();
                x >> (net.num_inputs() - 1 - i) & 1 == 1
            }
            Node::Maj(ops) => ops.iter().filter(|&&o| value(net, x, o)).count() >= 2,
            Node::Xor([a, b]) => value(net, x, a) != value(net, x, b),
        };
        v != e.is_complemented()
    }
    let m = net.num_outputs();
    net.outputs()
        .iter()
        .enumerate()
        .filter(|(_, &e)| value(net, x, e))
        .fold(0, |acc, (j, _)| acc | 1 << (m - 1 - j))
}

/// Random mixed-polarity cascade with random line metadata.
pub(crate) fn random_circuit(
    rng: &mut impl Rng,
    width: usize,
    gates: usize,
) -> crate::revcirc::RevCircuit {
    use crate::revcirc::{Control, Line, MctGate, RevCircuit};
    let lines = (0..width)
        .map(|l| {
            let line = match rng.gen_range(0..3) {
                0 => Line::input(format!("v{l}")),
                1 => Line::constant(format!("v{l}"), false),
                _ => Line::constant(format!("v{l}"), true),
            };
            if rng.gen_bool(0.5) {
                line.output()
            } else {
                line
            }
        })
        .collect();
    let mut circ = RevCircuit::new(lines);
    for _ in 0..gates {
        let target = rng.gen_range(0..width);
        let mut controls = Vec::new();
        for l in (0..width).filter(|&l| l != target) {
            if rng.gen_bool(0.4) {
                controls.push(Control::when(l, rng.gen_bool(0.6)));
            }
        }
        circ.push(MctGate::new(target, controls).unwrap()).unwrap();
    }
    circ
}

/// Random multi-output table where output bit patterns repeat often.
pub(crate) fn random_table(
    rng: &mut impl Rng,
    inputs: usize,
    outputs: usize,
) -> crate::logic::TruthTable {
    let rows = (0..1u64 << inputs)
        .map(|_| rng.gen_range(0..1u64 << outputs))
        .collect();
    crate::logic::TruthTable::new(inputs, outputs, rows).unwrap()
}
