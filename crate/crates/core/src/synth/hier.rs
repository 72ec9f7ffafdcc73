use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Error;
use crate::logic::{Edge, Node, Xmg};
use crate::revcirc::{Control, Line, MctGate, RevCircuit};

/// When intermediate results are uncomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cleanup {
    /// Compute everything, copy the outputs, then undo all of it.
    #[default]
    Bennett,
    /// Undo each node once its last reader is done and recycle its line.
    Eager,
}

impl Cleanup {
    pub fn name(self) -> &'static str {
        match self {
            Cleanup::Bennett => "bennett",
            Cleanup::Eager => "eager",
        }
    }
}

impl fmt::Display for Cleanup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cleanup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "bennett" => Ok(Cleanup::Bennett),
            "eager" => Ok(Cleanup::Eager),
            other => Err(Error::invalid(
                "cleanup",
                format!("unknown strategy {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HierOptions {
    pub cleanup: Cleanup,
    /// Compute an XOR onto the line of an operand that has no other reader.
    pub inplace_xor: bool,
}

#[derive(Debug, Clone, Copy)]
enum Operand {
    Const(bool),
    Lit { line: usize, complemented: bool },
}

/// Where each node's value lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    /// Computed straight onto output line `j`'s line and never undone.
    Direct(usize),
    /// Takes over the line of operand `k`.
    InPlace(usize),
    Ancilla,
}

struct Analysis {
    /// Consumer edges plus output references, per node.
    refs: Vec<usize>,
    placement: Vec<Option<Placement>>,
    /// Cone MAJ/XOR nodes in topological order.
    order: Vec<usize>,
}

fn edges(node: Node) -> Vec<Edge> {
    match node {
        Node::Maj(ops) => ops.to_vec(),
        Node::Xor(ops) => ops.to_vec(),
        _ => Vec::new(),
    }
}

fn is_gate(node: Node) -> bool {
    matches!(node, Node::Maj(_) | Node::Xor(_))
}

fn analyze(net: &Xmg, opts: &HierOptions) -> Analysis {
    let live = net.cone();
    let size = net.nodes().len();
    let mut consumers = vec![0usize; size];
    let mut out_refs = vec![0usize; size];
    let mut first_output = vec![usize::MAX; size];
    let order: Vec<usize> = (0..size)
        .filter(|&id| live[id] && is_gate(net.node(id)))
        .collect();
    for &id in &order {
        for e in edges(net.node(id)) {
            consumers[e.node()] += 1;
        }
    }
    for (j, e) in net.outputs().iter().enumerate() {
        out_refs[e.node()] += 1;
        first_output[e.node()] = first_output[e.node()].min(j);
    }
    let mut placement = vec![None; size];
    for &id in &order {
        let node = net.node(id);
        placement[id] = Some(if consumers[id] == 0 && out_refs[id] == 1 {
            Placement::Direct(first_output[id])
        } else {
            Placement::Ancilla
        });
        if opts.inplace_xor && placement[id] == Some(Placement::Ancilla) {
            if let Node::Xor([a, b]) = node {
                let dead = |e: Edge| {
                    let id = e.node();
                    is_gate(net.node(id)) && consumers[id] == 1 && out_refs[id] == 0
                };
                if a.node() != b.node() {
                    if let Some(k) = [a, b].iter().position(|&e| dead(e)) {
                        placement[id] = Some(Placement::InPlace(k));
                    }
                }
            }
        }
    }
    let refs = (0..size).map(|id| consumers[id] + out_refs[id]).collect();
    Analysis {
        refs,
        placement,
        order,
    }
}

struct Builder<'a> {
    net: &'a Xmg,
    circ: RevCircuit,
    num_inputs: usize,
    line_of: Vec<usize>,
    compute: Vec<Vec<MctGate>>,
    free: Vec<usize>,
    ancillas: usize,
}

impl<'a> Builder<'a> {
    fn new(net: &'a Xmg) -> Self {
        let n = net.num_inputs();
        let inputs = (1..=n).map(|i| Line::input(format!("x{i}")));
        let outputs =
            (1..=net.num_outputs()).map(|j| Line::constant(format!("y{j}"), false).output());
        let mut line_of = vec![usize::MAX; net.nodes().len()];
        for (i, &id) in net.inputs().iter().enumerate() {
            line_of[id] = i;
        }
        Builder {
            net,
            circ: RevCircuit::new(inputs.chain(outputs).collect()),
            num_inputs: n,
            line_of,
            compute: vec![Vec::new(); net.nodes().len()],
            free: Vec::new(),
            ancillas: 0,
        }
    }

    fn output_line(&self, j: usize) -> usize {
        self.num_inputs + j
    }

    fn allocate(&mut self, recycle: bool) -> usize {
        if recycle {
            if let Some(line) = self.free.pop() {
                return line;
            }
        }
        self.ancillas += 1;
        self.circ
            .add_line(Line::constant(format!("a{}", self.ancillas), false))
    }

    fn operand(&self, e: Edge) -> Operand {
        if e.is_const() {
            Operand::Const(e.is_complemented())
        } else {
            let line = self.line_of[e.node()];
            debug_assert_ne!(line, usize::MAX, "operand computed before use");
            Operand::Lit {
                line,
                complemented: e.is_complemented(),
            }
        }
    }

    /// Gates that XOR node `id`'s value onto `target`, leaving every other
    /// line unchanged. For an in-place XOR `target` is the operand's line.
    fn node_gates(&self, id: usize, target: usize) -> Vec<MctGate> {
        let mut gates = Vec::new();
        let copy = |gates: &mut Vec<MctGate>, op: Operand| match op {
            Operand::Const(v) => {
                if v {
                    gates.push(MctGate::not(target));
                }
            }
            Operand::Lit { line, complemented } => {
                if line != target {
                    gates.push(MctGate::cnot(line, target));
                }
                if complemented {
                    gates.push(MctGate::not(target));
                }
            }
        };
        match self.net.node(id) {
            Node::Xor([a, b]) => {
                let (a, b) = (self.operand(a), self.operand(b));
                match (a, b) {
                    (
                        Operand::Lit {
                            line: la,
                            complemented: ca,
                        },
                        Operand::Lit {
                            line: lb,
                            complemented: cb,
                        },
                    ) if la == lb => copy(&mut gates, Operand::Const(ca != cb)),
                    (Operand::Lit { line, .. }, other) if line == target => {
                        // In place: the line already holds the regular operand.
                        copy(&mut gates, other);
                        if let Operand::Lit {
                            complemented: true, ..
                        } = a
                        {
                            gates.push(MctGate::not(target));
                        }
                    }
                    (other, Operand::Lit { line, .. }) if line == target => {
                        copy(&mut gates, other);
                        if let Operand::Lit {
                            complemented: true, ..
                        } = b
                        {
                            gates.push(MctGate::not(target));
                        }
                    }
                    _ => {
                        copy(&mut gates, a);
                        copy(&mut gates, b);
                    }
                }
            }
            Node::Maj(ops) => {
                let ops = ops.map(|e| self.operand(e));
                self.maj_gates(ops, target, &mut gates, copy);
            }
            Node::Const0 | Node::Input => unreachable!("only gates are computed"),
        }
        gates
    }

    fn maj_gates(
        &self,
        ops: [Operand; 3],
        target: usize,
        gates: &mut Vec<MctGate>,
        copy: impl Fn(&mut Vec<MctGate>, Operand),
    ) {
        let lits: Vec<(usize, bool)> = ops
            .iter()
            .filter_map(|op| match *op {
                Operand::Lit { line, complemented } => Some((line, complemented)),
                Operand::Const(_) => None,
            })
            .collect();
        let consts: Vec<bool> = ops
            .iter()
            .filter_map(|op| match *op {
                Operand::Const(v) => Some(v),
                Operand::Lit { .. } => None,
            })
            .collect();
        let lit = |(line, complemented): (usize, bool)| Operand::Lit { line, complemented };
        // MAJ(u, u, w) = u and MAJ(u, !u, w) = w.
        for i in 0..3 {
            for k in i + 1..3 {
                if let (
                    Operand::Lit {
                        line: li,
                        complemented: ci,
                    },
                    Operand::Lit {
                        line: lk,
                        complemented: ck,
                    },
                ) = (ops[i], ops[k])
                {
                    if li == lk {
                        return copy(gates, if ci == ck { ops[i] } else { ops[3 - i - k] });
                    }
                }
            }
        }
        match consts.len() {
            3 => copy(
                gates,
                Operand::Const(consts.iter().filter(|&&v| v).count() >= 2),
            ),
            2 if consts[0] == consts[1] => copy(gates, Operand::Const(consts[0])),
            2 => copy(gates, lit(lits[0])),
            1 => {
                // MAJ(0, u, w) = u & w; MAJ(1, u, w) = !(!u & !w).
                let or = consts[0];
                let controls = lits
                    .iter()
                    .map(|&(l, c)| Control::when(l, c == or))
                    .collect();
                gates.push(MctGate::new(target, controls).expect("distinct operand lines"));
                if or {
                    gates.push(MctGate::not(target));
                }
            }
            _ => {
                // a ^ (a ^ b)(a ^ c), pivoting on a primary input when possible
                // so that conjugation targets are intermediate lines.
                let pivot = lits
                    .iter()
                    .position(|&(l, _)| l < self.num_inputs)
                    .unwrap_or(0);
                let (la, ca) = lits[pivot];
                let rest: Vec<(usize, bool)> =
                    (0..3).filter(|&i| i != pivot).map(|i| lits[i]).collect();
                let (lb, cb) = rest[0];
                let (lc, cc) = rest[1];
                gates.push(MctGate::cnot(la, lb));
                gates.push(MctGate::cnot(la, lc));
                gates.push(
                    MctGate::new(
                        target,
                        vec![Control::when(lb, ca == cb), Control::when(lc, ca == cc)],
                    )
                    .expect("distinct operand lines"),
                );
                gates.push(MctGate::cnot(la, target));
                if ca {
                    gates.push(MctGate::not(target));
                }
                gates.push(MctGate::cnot(la, lc));
                gates.push(MctGate::cnot(la, lb));
            }
        }
    }

    fn emit_all(&mut self, gates: &[MctGate]) {
        for g in gates {
            self.circ.emit(g.clone());
        }
    }

    /// Places and computes node `id`; returns whether it lives on an ancilla
    /// or operand line (and so must be uncomputed later).
    fn compute_node(&mut self, id: usize, placement: Placement, recycle: bool) -> bool {
        let target = match placement {
            Placement::Direct(j) => self.output_line(j),
            Placement::InPlace(k) => self.line_of[edges(self.net.node(id))[k].node()],
            Placement::Ancilla => self.allocate(recycle),
        };
        let gates = self.node_gates(id, target);
        self.emit_all(&gates);
        self.line_of[id] = target;
        match placement {
            Placement::Direct(j) => {
                if self.net.outputs()[j].is_complemented() {
                    self.circ.emit(MctGate::not(target));
                }
                false
            }
            _ => {
                self.compute[id] = gates;
                true
            }
        }
    }

    fn uncompute_node(&mut self, id: usize, placement: Placement) {
        let gates = std::mem::take(&mut self.compute[id]);
        for g in gates.iter().rev() {
            self.circ.emit(g.clone());
        }
        if placement == Placement::Ancilla {
            self.free.push(self.line_of[id]);
        }
        self.line_of[id] = usize::MAX;
    }

    /// Copies every output whose node is not computed directly on its line.
    fn copy_outputs(&mut self, of: impl Fn(usize) -> bool, placement: &[Option<Placement>]) {
        for (j, &e) in self.net.outputs().iter().enumerate() {
            let id = e.node();
            if !of(id) || matches!(placement[id], Some(Placement::Direct(_))) {
                continue;
            }
            let out = self.output_line(j);
            if !e.is_const() {
                self.circ.emit(MctGate::cnot(self.line_of[id], out));
            }
            if e.is_complemented() {
                self.circ.emit(MctGate::not(out));
            }
        }
    }
}

fn gate_node(net: &Xmg, id: usize) -> bool {
    is_gate(net.node(id))
}

/// Compiles an XMG into a garbage-free reversible circuit.
///
/// Lines are the primary inputs `x1..xn`, zero-initialized outputs
/// `y1..ym`, then ancillas `a1..`. Every MAJ node costs exactly one Toffoli
/// per computation (CNOT conjugation for three distinct operands, a single
/// Toffoli for AND/OR forms); XOR nodes cost none. A node read by nothing but
/// a single output is computed onto that output line and never undone; all
/// other nodes are uncomputed, so ancillas end at 0 and inputs are restored.
pub fn hier_synth(net: &Xmg, cleanup: Cleanup) -> RevCircuit {
    hier_synth_with(
        net,
        &HierOptions {
            cleanup,
            inplace_xor: false,
        },
    )
}

pub fn hier_synth_with(net: &Xmg, opts: &HierOptions) -> RevCircuit {
    let analysis = analyze(net, opts);
    let mut b = Builder::new(net);
    b.copy_outputs(|id| !gate_node(net, id), &analysis.placement);
    match opts.cleanup {
        Cleanup::Bennett => {
            let mut undo = Vec::new();
            for &id in &analysis.order {
                let p = analysis.placement[id].expect("cone node");
                if b.compute_node(id, p, false) {
                    undo.push((id, p));
                }
            }
            b.copy_outputs(|id| gate_node(net, id), &analysis.placement);
            for &(id, p) in undo.iter().rev() {
                b.uncompute_node(id, p);
            }
        }
        Cleanup::Eager => eager(net, &analysis, &mut b),
    }
    b.circ
}

fn eager(net: &Xmg, analysis: &Analysis, b: &mut Builder<'_>) {
    let mut refs = analysis.refs.clone();
    let mut pending = Vec::new();
    let release = |refs: &mut Vec<usize>, pending: &mut Vec<usize>, id: usize| {
        if gate_node(net, id) {
            refs[id] -= 1;
            if refs[id] == 0 {
                pending.push(id);
            }
        }
    };
    for &id in &analysis.order {
        let p = analysis.placement[id].expect("cone node");
        let undoable = b.compute_node(id, p, true);
        if undoable {
            for (j, &e) in net.outputs().iter().enumerate() {
                if e.node() == id {
                    b.circ.emit(MctGate::cnot(b.line_of[id], b.output_line(j)));
                    if e.is_complemented() {
                        b.circ.emit(MctGate::not(b.output_line(j)));
                    }
                    refs[id] -= 1;
                }
            }
            if refs[id] == 0 {
                pending.push(id);
            }
        } else {
            for e in edges(net.node(id)) {
                release(&mut refs, &mut pending, e.node());
            }
        }
        while let Some(done) = pending.pop() {
            b.uncompute_node(done, analysis.placement[done].expect("cone node"));
            for e in edges(net.node(done)) {
                release(&mut refs, &mut pending, e.node());
            }
        }
    }
}
