//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Reference values come from helpers defined here (big-integer division,
//! brute-force collision counts, a gate-level simulator and a recursive XMG
//! evaluator) rather than from the library routines under test.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revflow::arith::{gen_intdiv_xmg, gen_newton_xmg, oracle_reciprocal, DesignSpec};
use revflow::embedding::{optimum_embed, Permutation};
use revflow::logic::{
    esop_from_tt, esop_minimize, read_pla, tt_from_xmg, write_pla, Edge, EsopForm, Node,
    TruthTable, Xmg,
};
use revflow::revcirc::{
    cost_report, read_real, verify_circuit, write_real, Control, CostModel, MctGate, RevCircuit,
};
use revflow::synth::{esop_synth, hier_synth, tbs, tbs_invariant_check, tbs_with_trace, Cleanup};
use revflow::Limits;

fn reciprocal(n: usize, x: u64) -> u64 {
    let mask = (1u64 << n) - 1;
    if x == 0 {
        mask
    } else {
        ((1u128 << n) / x as u128) as u64 & mask
    }
}

fn intdiv_table(n: usize) -> TruthTable {
    TruthTable::new(n, n, (0..1u64 << n).map(|x| reciprocal(n, x)).collect()).unwrap()
}

fn max_collision(rows: &[u64]) -> u64 {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    rows.iter()
        .for_each(|&y| *counts.entry(y).or_default() += 1);
    counts.into_values().max().unwrap_or(0)
}

fn bits_for(count: u64) -> usize {
    (0..64).find(|&k| 1u64 << k >= count).unwrap()
}

fn eval_xmg(net: &Xmg, x: u64) -> u64 {
    let n = net.num_inputs();
    let mut value = vec![false; net.nodes().len()];
    for (i, &id) in net.inputs().iter().enumerate() {
        value[id] = x >> (n - 1 - i) & 1 == 1;
    }
    let lit = |value: &[bool], e: Edge| value[e.node()] != e.is_complemented();
    for (id, node) in net.nodes().iter().enumerate() {
        value[id] = match *node {
            Node::Const0 => false,
            Node::Input => value[id],
            Node::Maj(ops) => ops.iter().filter(|&&e| lit(&value, e)).count() >= 2,
            Node::Xor([a, b]) => lit(&value, a) != lit(&value, b),
        };
    }
    let m = net.num_outputs();
    net.outputs().iter().enumerate().fold(0, |acc, (j, &e)| {
        acc | (lit(&value, e) as u64) << (m - 1 - j)
    })
}

fn xmg_table(net: &Xmg) -> TruthTable {
    let n = net.num_inputs();
    TruthTable::new(
        n,
        net.num_outputs(),
        (0..1u64 << n).map(|x| eval_xmg(net, x)).collect(),
    )
    .unwrap()
}

/// Runs `circ` on every input with constant lines at their initial values and
/// returns the final line values per input (`state[x][line]`).
fn run_all(circ: &RevCircuit) -> Vec<Vec<bool>> {
    let inputs: Vec<usize> = (0..circ.width())
        .filter(|&l| circ.lines()[l].constant.is_none())
        .collect();
    let n = inputs.len();
    (0..1u64 << n)
        .map(|x| {
            let mut state: Vec<bool> = circ
                .lines()
                .iter()
                .map(|l| l.constant.unwrap_or(false))
                .collect();
            for (i, &l) in inputs.iter().enumerate() {
                state[l] = x >> (n - 1 - i) & 1 == 1;
            }
            for g in circ.gates() {
                if g.controls().iter().all(|c| state[c.line] == c.positive) {
                    state[g.target()] = !state[g.target()];
                }
            }
            state
        })
        .collect()
}

/// Ancillas back at their constants and inputs unchanged, on every input.
fn clean(circ: &RevCircuit, runs: &[Vec<bool>]) -> bool {
    let inputs: Vec<usize> = (0..circ.width())
        .filter(|&l| circ.lines()[l].constant.is_none())
        .collect();
    let n = inputs.len();
    runs.iter().enumerate().all(|(x, state)| {
        circ.lines().iter().enumerate().all(|(l, line)| {
            if !line.garbage {
                return true;
            }
            match line.constant {
                Some(v) => state[l] == v,
                None => {
                    let i = inputs.iter().position(|&k| k == l).unwrap();
                    state[l] == ((x as u64) >> (n - 1 - i) & 1 == 1)
                }
            }
        })
    })
}

fn is_bijection(perm: &Permutation) -> bool {
    let mut seen = vec![false; perm.images().len()];
    perm.images().iter().all(|&y| {
        let fresh = !seen[y as usize];
        seen[y as usize] = true;
        fresh
    })
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn oracle_spot_check() -> Outcome {
    let y = oracle_reciprocal(8, 22);
    let value = y as f64 / 256.0;
    outcome(
        y == 0b0000_1011 && value == 0.042_968_75 && reciprocal(8, 22) == y,
        format!("oracle_reciprocal(8, 22) = {y:#010b} = {value}"),
    )
}

fn optimum_qubits() -> Outcome {
    let limits = Limits::default();
    let mut widths = Vec::new();
    let mut ok = true;
    for n in 4..=10 {
        let tt = intdiv_table(n);
        let expected = n.max(n + bits_for(max_collision(tt.rows())));
        let (perm, emb) = optimum_embed(&tt, &limits).unwrap();
        ok &= perm.width() == 2 * n - 1 && expected == 2 * n - 1;
        ok &= (0..1u64 << n).all(|x| emb.read_outputs(perm.apply(emb.input_word(x))) == tt.row(x));
        widths.push(perm.width());
    }
    outcome(ok, format!("widths for n = 4..10: {widths:?}"))
}

fn esop_qubits() -> Outcome {
    let mut widths = Vec::new();
    for n in 4..=8 {
        widths.push(esop_synth(&esop_from_tt(&intdiv_table(n))).width());
    }
    let ok = widths.iter().zip(4..).all(|(&w, n)| w == 2 * n);
    outcome(ok, format!("widths for n = 4..8: {widths:?}"))
}

fn functional_flow(circuits: &mut Vec<RevCircuit>) -> Outcome {
    let limits = Limits::default();
    let mut ok = true;
    let mut gates = Vec::new();
    for n in 4..=6 {
        let tt = intdiv_table(n);
        let (perm, emb) = optimum_embed(&tt, &limits).unwrap();
        let circ = tbs(&perm);
        let sim: Vec<u64> = (0..1u64 << perm.width())
            .map(|w| circ.simulate(w))
            .collect();
        ok &= sim == perm.images();
        ok &= verify_circuit(&circ, &tt, &emb);
        gates.push(circ.gates().len());
        circuits.push(circ);
    }
    outcome(ok, format!("gate counts for n = 4..6: {gates:?}"))
}

fn esop_flow(circuits: &mut Vec<RevCircuit>, forms: &mut Vec<EsopForm>) -> Outcome {
    let mut ok = true;
    let mut max_controls = Vec::new();
    for n in 4..=8 {
        let tt = intdiv_table(n);
        let pprm = esop_from_tt(&tt);
        let form = esop_minimize(&pprm);
        let circ = esop_synth(&form);
        let runs = run_all(&circ);
        ok &= runs.iter().enumerate().all(|(x, state)| {
            (0..n).all(|j| state[n + j] == (tt.row(x as u64) >> (n - 1 - j) & 1 == 1))
        });
        ok &= verify_circuit(&circ, &tt, &circ.embedding());
        let worst = circ
            .gates()
            .iter()
            .map(MctGate::num_controls)
            .max()
            .unwrap_or(0);
        ok &= worst <= n;
        max_controls.push(worst);
        forms.push(pprm);
        forms.push(form);
        circuits.push(circ);
    }
    outcome(ok, format!("max controls for n = 4..8: {max_controls:?}"))
}

/// MAJ nodes read by exactly one output and by no other node.
fn output_only_majs(net: &Xmg) -> usize {
    let live = net.cone();
    let mut readers = vec![0usize; net.nodes().len()];
    let mut outputs = vec![0usize; net.nodes().len()];
    for (id, node) in net.nodes().iter().enumerate() {
        let ops: &[Edge] = match node {
            Node::Maj(ops) if live[id] => ops,
            Node::Xor(ops) if live[id] => ops,
            _ => &[],
        };
        ops.iter().for_each(|e| readers[e.node()] += 1);
    }
    net.outputs().iter().for_each(|e| outputs[e.node()] += 1);
    (0..net.nodes().len())
        .filter(|&id| {
            matches!(net.node(id), Node::Maj(_)) && live[id] && readers[id] == 0 && outputs[id] == 1
        })
        .count()
}

fn hier_flow(circuits: &mut Vec<RevCircuit>) -> Outcome {
    let model = CostModel::default();
    let toffoli = model.t_count(2);
    let mut correct = true;
    let mut garbage_free = true;
    let mut literal = true;
    let mut paired = true;
    let mut rows = Vec::new();
    for n in 4..=6 {
        for (name, net) in [
            ("intdiv", gen_intdiv_xmg(n).unwrap()),
            ("newton", gen_newton_xmg(&DesignSpec::newton(n)).unwrap()),
        ] {
            let tt = xmg_table(&net);
            let majs = net.gate_counts().0;
            let instances = 2 * majs - output_only_majs(&net);
            for cleanup in [Cleanup::Bennett, Cleanup::Eager] {
                let circ = hier_synth(&net, cleanup);
                correct &= verify_circuit(&circ, &tt, &circ.embedding());
                let runs = run_all(&circ);
                garbage_free &= clean(&circ, &runs);
                let outputs: Vec<usize> = (0..circ.width())
                    .filter(|&l| !circ.lines()[l].garbage)
                    .collect();
                correct &= runs.iter().enumerate().all(|(x, state)| {
                    outputs.iter().enumerate().all(|(j, &l)| {
                        state[l] == (tt.row(x as u64) >> (outputs.len() - 1 - j) & 1 == 1)
                    })
                });
                let t = cost_report(&circ, &model).t_count;
                literal &= t == toffoli * majs as u64;
                paired &= t == toffoli * instances as u64;
                rows.push(format!(
                    "{name}({n},{cleanup}): T={t} vs {toffoli}x{majs}={}",
                    toffoli * majs as u64
                ));
                circuits.push(circ);
            }
        }
    }
    outcome(
        correct && garbage_free && literal,
        format!(
            "equivalence {}, ancillas clean {}, T-count = cost(Toffoli) x #MAJ {} \
             (T-count = cost(Toffoli) x (2 #MAJ - #output-only MAJ) {}); {}",
            verdict(correct),
            verdict(garbage_free),
            verdict(literal),
            verdict(paired),
            rows.join("; ")
        ),
    )
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

fn newton_accuracy() -> Outcome {
    let limits = Limits::default();
    let mut ok = true;
    let mut worst = Vec::new();
    for n in 4..=8 {
        let tt = tt_from_xmg(&gen_newton_xmg(&DesignSpec::newton(n)).unwrap(), &limits).unwrap();
        let err = (1..1u64 << n)
            .map(|x| tt.row(x).abs_diff(reciprocal(n, x)))
            .max()
            .unwrap();
        ok &= err <= 1 && tt.row(1) == 0;
        worst.push(err);
    }
    outcome(ok, format!("max |error| in ulp for n = 4..8: {worst:?}"))
}

fn random_xmg(rng: &mut ChaCha8Rng) -> Xmg {
    let mut net = Xmg::new();
    let inputs = rng.gen_range(2..=7);
    for i in 0..inputs {
        net.add_input(format!("i{i}"));
    }
    for _ in 0..rng.gen_range(1..=40) {
        let len = net.nodes().len();
        let maj = rng.gen_bool(0.5);
        let mut pick = || Edge::new(rng.gen_range(1..len), rng.gen_bool(0.3));
        let (a, b, c) = (pick(), pick(), pick());
        if maj {
            net.push_maj(a, b, c).unwrap();
        } else {
            net.push_xor(a, b).unwrap();
        }
    }
    let len = net.nodes().len();
    for j in 0..rng.gen_range(1..=4) {
        let e = Edge::new(rng.gen_range(len / 2..len), rng.gen_bool(0.3));
        net.add_output(e, format!("o{j}")).unwrap();
    }
    net
}

fn property_suites(circuits: &[RevCircuit], forms: &[EsopForm]) -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let mut failures = Vec::new();

    // Bijectivity: exhaustive up to 16 lines, sampled round trips beyond.
    let bijective = circuits.iter().all(|c| {
        if c.width() <= 16 {
            is_bijection(&c.simulate_full(&limits).unwrap())
        } else {
            let inverse = c.reversed();
            (0..256).all(|_| {
                let start: Vec<u64> = (0..c.width()).map(|_| rng.gen()).collect();
                let mut lanes = start.clone();
                c.simulate_lanes(&mut lanes);
                inverse.simulate_lanes(&mut lanes);
                lanes == start
            })
        }
    });
    if !bijective {
        failures.push("bijectivity");
    }

    // Every mixed-polarity gate on up to 6 lines is an involution.
    let mut involutions = true;
    for r in 1..=6usize {
        for target in 0..r {
            let others: Vec<usize> = (0..r).filter(|&l| l != target).collect();
            for code in 0..3usize.pow(others.len() as u32) {
                let mut digits = code;
                let mut controls = Vec::new();
                for &l in &others {
                    match digits % 3 {
                        1 => controls.push(Control::pos(l)),
                        2 => controls.push(Control::neg(l)),
                        _ => {}
                    }
                    digits /= 3;
                }
                let gate = MctGate::new(target, controls).unwrap();
                let mut twice = RevCircuit::with_width(r);
                twice.push(gate.clone()).unwrap();
                twice.push(gate).unwrap();
                involutions &= (0..1u64 << r).all(|x| twice.simulate(x) == x);
            }
        }
    }
    if !involutions {
        failures.push("gate self-inverse");
    }

    // Prefix invariant of transformation-based synthesis.
    let mut prefix = true;
    for _ in 0..100 {
        let r = rng.gen_range(1..=8);
        let mut images: Vec<u64> = (0..1u64 << r).collect();
        images.shuffle(&mut rng);
        let perm = Permutation::new(r, images).unwrap();
        let (circ, trace) = tbs_with_trace(&perm).unwrap();
        let fixed = trace.len() == 1 << r
            && trace
                .iter()
                .enumerate()
                .all(|(i, snap)| (0..=i).all(|j| snap[j] == j as u64));
        prefix &= fixed && tbs_invariant_check(&perm, &trace);
        prefix &= (0..1u64 << r).all(|x| circ.simulate(x) == perm.apply(x));
    }
    if !prefix {
        failures.push("prefix invariant");
    }

    let real = circuits
        .iter()
        .all(|c| read_real(&write_real(c)).as_ref() == Ok(c));
    let pla = forms
        .iter()
        .all(|f| read_pla(&write_pla(f)).as_ref() == Ok(f));
    if !real {
        failures.push("REAL roundtrip");
    }
    if !pla {
        failures.push("PLA roundtrip");
    }

    let mut narrower = true;
    for _ in 0..50 {
        let net = random_xmg(&mut rng);
        let tt = xmg_table(&net);
        let bennett = hier_synth(&net, Cleanup::Bennett);
        let eager = hier_synth(&net, Cleanup::Eager);
        narrower &= eager.width() <= bennett.width();
        narrower &= verify_circuit(&eager, &tt, &eager.embedding());
        narrower &= verify_circuit(&bennett, &tt, &bennett.embedding());
    }
    if !narrower {
        failures.push("eager <= bennett qubits");
    }

    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} circuits, {} ESOP forms, 100 permutations, 50 random XMGs",
                circuits.len(),
                forms.len()
            )
        } else {
            format!("failing: {}", failures.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let mut circuits = Vec::new();
    let mut forms = Vec::new();
    let mut all_ok = true;
    let mut run = |id: u32, title: &str, budget: Duration, check: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let ok = result.ok && elapsed <= budget;
        all_ok &= ok;
        println!(
            "criterion {id} {}: {title} [{:.3} s of {:.3} s] {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs_f64(),
            result.detail
        );
    };
    run(
        1,
        "oracle spot check",
        Duration::from_millis(1),
        &mut oracle_spot_check,
    );
    run(
        2,
        "optimum embedding qubits",
        Duration::from_secs(10),
        &mut optimum_qubits,
    );
    run(3, "ESOP qubits", Duration::from_secs(5), &mut esop_qubits);
    run(4, "functional flow", Duration::from_secs(60), &mut || {
        functional_flow(&mut circuits)
    });
    run(5, "ESOP flow", Duration::from_secs(30), &mut || {
        esop_flow(&mut circuits, &mut forms)
    });
    run(
        6,
        "hierarchical flow and cleanup",
        Duration::from_secs(60),
        &mut || hier_flow(&mut circuits),
    );
    run(
        7,
        "NEWTON accuracy",
        Duration::from_secs(30),
        &mut newton_accuracy,
    );
    run(8, "property suites", Duration::from_secs(120), &mut || {
        property_suites(&circuits, &forms)
    });
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
