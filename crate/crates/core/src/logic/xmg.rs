use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use crate::error::{Error, Result};
use crate::limits::{mask_of, Limits};
use crate::logic::TruthTable;

/// Reference to a node output, optionally complemented.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge(u32);

impl Edge {
    pub const ZERO: Edge = Edge(0);
    pub const ONE: Edge = Edge(1);

    pub fn new(node: usize, complemented: bool) -> Self {
        Edge(((node as u32) << 1) | complemented as u32)
    }

    pub fn node(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }

    /// Same edge with the complement flag cleared.
    pub fn regular(self) -> Edge {
        Edge(self.0 & !1)
    }

    pub fn complement_if(self, c: bool) -> Edge {
        Edge(self.0 ^ c as u32)
    }
}

impl Not for Edge {
    type Output = Edge;
    fn not(self) -> Edge {
        Edge(self.0 ^ 1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!{}", self.node())
        } else {
            write!(f, "{}", self.node())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Const0,
    Input,
    Maj([Edge; 3]),
    Xor([Edge; 2]),
}

/// XOR-majority graph. Node 0 is the constant 0; every gate references only
/// lower-indexed nodes, so index order is a topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xmg {
    nodes: Vec<Node>,
    inputs: Vec<usize>,
    outputs: Vec<Edge>,
    input_names: Vec<String>,
    output_names: Vec<String>,
}

impl Default for Xmg {
    fn default() -> Self {
        Xmg::new()
    }
}

impl Xmg {
    pub fn new() -> Self {
        Xmg {
            nodes: vec![Node::Const0],
            inputs: Vec::new(),
            outputs: Vec::new(),
            input_names: Vec::new(),
            output_names: Vec::new(),
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> Edge {
        let id = self.nodes.len();
        self.nodes.push(Node::Input);
        self.inputs.push(id);
        self.input_names.push(name.into());
        Edge::new(id, false)
    }

    fn check_operand(&self, e: Edge) -> Result<()> {
        if e.node() >= self.nodes.len() {
            return Err(Error::invalid(
                "xmg",
                format!("operand {e:?} is not defined yet"),
            ));
        }
        Ok(())
    }

    /// Appends a majority node without any simplification.
    pub fn push_maj(&mut self, a: Edge, b: Edge, c: Edge) -> Result<Edge> {
        for e in [a, b, c] {
            self.check_operand(e)?;
        }
        self.nodes.push(Node::Maj([a, b, c]));
        Ok(Edge::new(self.nodes.len() - 1, false))
    }

    /// Appends an XOR node without any simplification.
    pub fn push_xor(&mut self, a: Edge, b: Edge) -> Result<Edge> {
        for e in [a, b] {
            self.check_operand(e)?;
        }
        self.nodes.push(Node::Xor([a, b]));
        Ok(Edge::new(self.nodes.len() - 1, false))
    }

    pub fn add_output(&mut self, e: Edge, name: impl Into<String>) -> Result<()> {
        self.check_operand(e)?;
        self.outputs.push(e);
        self.output_names.push(name.into());
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Node {
        self.nodes[id]
    }

    /// Node ids of the primary inputs, in variable order.
    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Edge] {
        &self.outputs
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Marks nodes in the transitive fanin of the outputs.
    pub fn cone(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        for e in &self.outputs {
            live[e.node()] = true;
        }
        for id in (0..self.nodes.len()).rev() {
            if !live[id] {
                continue;
            }
            match self.nodes[id] {
                Node::Maj(ops) => ops.iter().for_each(|e| live[e.node()] = true),
                Node::Xor(ops) => ops.iter().for_each(|e| live[e.node()] = true),
                _ => {}
            }
        }
        live
    }

    /// (MAJ, XOR) node counts inside the output cone.
    pub fn gate_counts(&self) -> (usize, usize) {
        let live = self.cone();
        let mut counts = (0, 0);
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            match node {
                Node::Maj(_) => counts.0 += 1,
                Node::Xor(_) => counts.1 += 1,
                _ => {}
            }
        }
        counts
    }

    /// Evaluates 64 assignments at once: `lanes[i]` carries input `i` across
    /// the 64 lanes. Returns one lane word per output.
    pub fn eval_lanes(&self, lanes: &[u64]) -> Vec<u64> {
        assert_eq!(lanes.len(), self.inputs.len(), "one lane word per input");
        let mut values = vec![0u64; self.nodes.len()];
        for (k, &id) in self.inputs.iter().enumerate() {
            values[id] = lanes[k];
        }
        let edge = |values: &[u64], e: Edge| {
            let v = values[e.node()];
            if e.is_complemented() {
                !v
            } else {
                v
            }
        };
        for id in 0..self.nodes.len() {
            values[id] = match self.nodes[id] {
                Node::Const0 => 0,
                Node::Input => values[id],
                Node::Maj([a, b, c]) => {
                    let (a, b, c) = (edge(&values, a), edge(&values, b), edge(&values, c));
                    (a & b) | (a & c) | (b & c)
                }
                Node::Xor([a, b]) => edge(&values, a) ^ edge(&values, b),
            };
        }
        self.outputs.iter().map(|&e| edge(&values, e)).collect()
    }

    /// Evaluates one assignment (input 0 is the most significant bit of
    /// `assignment`); the result packs output 0 as the most significant bit.
    pub fn eval(&self, assignment: u64) -> u64 {
        let n = self.num_inputs();
        let lanes: Vec<u64> = (0..n)
            .map(|i| {
                if assignment & mask_of(n, i) != 0 {
                    1
                } else {
                    0
                }
            })
            .collect();
        let m = self.num_outputs();
        self.eval_lanes(&lanes)
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &v)| {
                acc | if v & 1 != 0 { mask_of(m, j) } else { 0 }
            })
    }
}

/// Truth table of `net`, evaluated 64 rows at a time.
pub fn tt_from_xmg(net: &Xmg, limits: &Limits) -> Result<TruthTable> {
    let n = net.num_inputs();
    let m = net.num_outputs();
    Error::check_limit("truth table inputs", n, limits.tt_inputs)?;
    if m > 64 {
        return Err(Error::invalid("truth table", "more than 64 outputs"));
    }
    let total = 1u64 << n;
    let mut rows = vec![0u64; total as usize];
    let mut base = 0u64;
    while base < total {
        let count = (total - base).min(64);
        let lanes: Vec<u64> = (0..n)
            .map(|i| {
                let m_i = mask_of(n, i);
                (0..count).fold(0u64, |acc, l| acc | (((base + l) & m_i != 0) as u64) << l)
            })
            .collect();
        let outs = net.eval_lanes(&lanes);
        for l in 0..count {
            let mut word = 0u64;
            for (j, &v) in outs.iter().enumerate() {
                if v >> l & 1 != 0 {
                    word |= mask_of(m, j);
                }
            }
            rows[(base + l) as usize] = word;
        }
        base += count;
    }
    TruthTable::new(n, m, rows)
}

/// Structurally hashing XMG constructor with constant propagation.
///
/// Majority nodes are normalized (sorted operands, at most one complemented
/// operand) and XOR nodes carry no complemented operands, so equivalent
/// requests share one node.
#[derive(Debug, Default)]
pub struct XmgBuilder {
    net: Xmg,
    strash: HashMap<Node, Edge>,
}

impl XmgBuilder {
    pub fn new() -> Self {
        XmgBuilder::default()
    }

    pub fn input(&mut self, name: impl Into<String>) -> Edge {
        self.net.add_input(name)
    }

    pub fn output(&mut self, e: Edge, name: impl Into<String>) {
        self.net
            .add_output(e, name)
            .expect("builder edges always reference existing nodes");
    }

    fn intern(&mut self, node: Node) -> Edge {
        if let Some(&e) = self.strash.get(&node) {
            return e;
        }
        self.net.nodes.push(node);
        let e = Edge::new(self.net.nodes.len() - 1, false);
        self.strash.insert(node, e);
        e
    }

    pub fn maj(&mut self, a: Edge, b: Edge, c: Edge) -> Edge {
        let mut ops = [a, b, c];
        ops.sort();
        let [a, b, c] = ops;
        if a == b || b == c {
            return b;
        }
        if a == !b {
            return c;
        }
        if b == !c {
            return a;
        }
        if a == !c {
            return b;
        }
        let complemented = ops.iter().filter(|e| e.is_complemented()).count();
        if complemented >= 2 {
            let inner = self.maj(!a, !b, !c);
            return !inner;
        }
        self.intern(Node::Maj(ops))
    }

    pub fn xor(&mut self, a: Edge, b: Edge) -> Edge {
        let flip = a.is_complemented() ^ b.is_complemented();
        let (mut a, mut b) = (a.regular(), b.regular());
        if a == b {
            return Edge::ZERO.complement_if(flip);
        }
        if a.is_const() {
            return b.complement_if(flip);
        }
        if b.is_const() {
            return a.complement_if(flip);
        }
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        self.intern(Node::Xor([a, b])).complement_if(flip)
    }

    pub fn and(&mut self, a: Edge, b: Edge) -> Edge {
        self.maj(a, b, Edge::ZERO)
    }

    pub fn or(&mut self, a: Edge, b: Edge) -> Edge {
        self.maj(a, b, Edge::ONE)
    }

    /// `sel ? then_ : else_`, as `else ^ (sel & (then ^ else))`.
    pub fn mux(&mut self, sel: Edge, then_: Edge, else_: Edge) -> Edge {
        let d = self.xor(then_, else_);
        let t = self.and(sel, d);
        self.xor(else_, t)
    }

    pub fn network(&self) -> &Xmg {
        &self.net
    }

    pub fn finish(self) -> Xmg {
        self.net
    }
}

fn fmt_edge(e: Edge) -> String {
    format!("{e:?}")
}

fn parse_edge(tok: &str, lineno: usize) -> Result<Edge> {
    let (compl, digits) = match tok.strip_prefix('!') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let id: usize = digits
        .parse()
        .map_err(|_| Error::parse("xmg", lineno, format!("bad edge {tok:?}")))?;
    Ok(Edge::new(id, compl))
}

impl Xmg {
    /// Text form: `.inputs`/`.outputs` name lists, one `maj`/`xor` line per
    /// gate node (numbered after the constant and the inputs), `.out` with the
    /// output edges, then `.end`. Edges are node ids, `!` marks complement.
    pub fn to_text(&self) -> String {
        let mut out = String::from(".xmg\n.inputs");
        for name in &self.input_names {
            out.push(' ');
            out.push_str(name);
        }
        out.push_str("\n.outputs");
        for name in &self.output_names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        // Renumber so inputs occupy 1..=n regardless of construction order.
        let mut remap = vec![0usize; self.nodes.len()];
        let mut next = 1;
        for &id in &self.inputs {
            remap[id] = next;
            next += 1;
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if matches!(node, Node::Maj(_) | Node::Xor(_)) {
                remap[id] = next;
                next += 1;
            }
        }
        let re = |e: Edge| fmt_edge(Edge::new(remap[e.node()], e.is_complemented()));
        for node in &self.nodes {
            match node {
                Node::Maj([a, b, c]) => {
                    out.push_str(&format!("maj {} {} {}\n", re(*a), re(*b), re(*c)))
                }
                Node::Xor([a, b]) => out.push_str(&format!("xor {} {}\n", re(*a), re(*b))),
                _ => {}
            }
        }
        out.push_str(".out");
        for &e in &self.outputs {
            out.push(' ');
            out.push_str(&re(e));
        }
        out.push_str("\n.end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Xmg> {
        let mut net = Xmg::new();
        let mut output_names: Option<Vec<String>> = None;
        let mut saw_outputs = false;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap_or_default();
            match head {
                ".xmg" => {}
                ".inputs" => {
                    if net.nodes.len() > 1 {
                        return Err(Error::parse("xmg", lineno, ".inputs must come first"));
                    }
                    for name in toks {
                        net.add_input(name);
                    }
                }
                ".outputs" => output_names = Some(toks.map(str::to_string).collect()),
                "maj" | "xor" => {
                    let ops = toks
                        .map(|t| parse_edge(t, lineno))
                        .collect::<Result<Vec<_>>>()?;
                    let pushed = match (head, ops.as_slice()) {
                        ("maj", &[a, b, c]) => net.push_maj(a, b, c),
                        ("xor", &[a, b]) => net.push_xor(a, b),
                        _ => return Err(Error::parse("xmg", lineno, "wrong operand count")),
                    };
                    pushed.map_err(|e| Error::parse("xmg", lineno, e.to_string()))?;
                }
                ".out" => {
                    let names = output_names.clone().unwrap_or_default();
                    let edges = toks
                        .map(|t| parse_edge(t, lineno))
                        .collect::<Result<Vec<_>>>()?;
                    if output_names.is_some() && names.len() != edges.len() {
                        return Err(Error::parse(
                            "xmg",
                            lineno,
                            format!("{} output names but {} edges", names.len(), edges.len()),
                        ));
                    }
                    for (j, e) in edges.into_iter().enumerate() {
                        let name = names
                            .get(j)
                            .cloned()
                            .unwrap_or_else(|| format!("y{}", j + 1));
                        net.add_output(e, name)
                            .map_err(|err| Error::parse("xmg", lineno, err.to_string()))?;
                    }
                    saw_outputs = true;
                }
                ".end" | ".e" => break,
                other => {
                    return Err(Error::parse(
                        "xmg",
                        lineno,
                        format!("unknown statement {other}"),
                    ))
                }
            }
        }
        if !saw_outputs {
            return Err(Error::parse(
                "xmg",
                text.lines().count(),
                "missing .out line",
            ));
        }
        Ok(net)
    }
}
