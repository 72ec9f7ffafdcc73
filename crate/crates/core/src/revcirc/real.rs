//! RevLib-style REAL text for Toffoli circuits.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::revcirc::{Control, Line, MctGate, RevCircuit};

pub fn write_real(circ: &RevCircuit) -> String {
    let lines = circ.lines();
    let mut out = format!(".version 2.0\n.numvars {}\n.variables", lines.len());
    for l in lines {
        out.push(' ');
        out.push_str(&l.name);
    }
    out.push_str("\n.constants ");
    out.extend(lines.iter().map(|l| match l.constant {
        None => '-',
        Some(false) => '0',
        Some(true) => '1',
    }));
    out.push_str("\n.garbage ");
    out.extend(lines.iter().map(|l| if l.garbage { '1' } else { '-' }));
    out.push_str("\n.begin\n");
    for g in circ.gates() {
        out.push_str(&format!("t{}", g.num_controls() + 1));
        for c in g.controls() {
            out.push(' ');
            if !c.positive {
                out.push('-');
            }
            out.push_str(&lines[c.line].name);
        }
        out.push(' ');
        out.push_str(&lines[g.target()].name);
        out.push('\n');
    }
    out.push_str(".end\n");
    out
}

fn flags(value: Option<&str>, width: usize, lineno: usize, what: &str) -> Result<Vec<char>> {
    let chars: Vec<char> = value.unwrap_or_default().chars().collect();
    if chars.len() != width {
        return Err(Error::parse(
            "real",
            lineno,
            format!("{what} has {} entries, expected {width}", chars.len()),
        ));
    }
    Ok(chars)
}

pub fn read_real(text: &str) -> Result<RevCircuit> {
    let mut numvars: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut constants: Option<Vec<char>> = None;
    let mut garbage: Option<Vec<char>> = None;
    let mut circ: Option<RevCircuit> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ended = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        if ended {
            return Err(Error::parse("real", lineno, "content after .end"));
        }
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        if let Some(c) = circ.as_mut() {
            if head == ".end" {
                ended = true;
                continue;
            }
            let arity: usize = head
                .strip_prefix('t')
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| {
                    Error::parse("real", lineno, format!("unsupported gate {head:?}"))
                })?;
            let operands: Vec<&str> = toks.collect();
            if arity == 0 || operands.len() != arity {
                return Err(Error::parse(
                    "real",
                    lineno,
                    format!("{head} expects {arity} operands, got {}", operands.len()),
                ));
            }
            let lookup = |name: &str| {
                index.get(name).copied().ok_or_else(|| {
                    Error::parse("real", lineno, format!("undeclared variable {name:?}"))
                })
            };
            let (target_name, control_names) = operands.split_last().expect("arity >= 1");
            if target_name.starts_with('-') {
                return Err(Error::parse("real", lineno, "target cannot be negated"));
            }
            let target = lookup(target_name)?;
            let controls = control_names
                .iter()
                .map(|tok| match tok.strip_prefix('-') {
                    Some(name) => lookup(name).map(Control::neg),
                    None => lookup(tok).map(Control::pos),
                })
                .collect::<Result<Vec<_>>>()?;
            let gate = MctGate::new(target, controls)
                .map_err(|e| Error::parse("real", lineno, e.to_string()))?;
            c.emit(gate);
            continue;
        }
        match head {
            ".version" | ".model" | ".inputs" | ".outputs" => {}
            ".numvars" => {
                numvars = Some(
                    toks.next()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| Error::parse("real", lineno, "bad .numvars"))?,
                )
            }
            ".variables" => {
                let list: Vec<String> = toks.map(str::to_string).collect();
                for (i, name) in list.iter().enumerate() {
                    if name.starts_with('-') || index.insert(name.clone(), i).is_some() {
                        return Err(Error::parse(
                            "real",
                            lineno,
                            format!("bad variable {name:?}"),
                        ));
                    }
                }
                names = Some(list);
            }
            ".constants" | ".garbage" => {
                let width = names
                    .as_ref()
                    .map(Vec::len)
                    .ok_or_else(|| Error::parse("real", lineno, "directive before .variables"))?;
                let parsed = flags(toks.next(), width, lineno, head)?;
                if head == ".constants" {
                    constants = Some(parsed);
                } else {
                    garbage = Some(parsed);
                }
            }
            ".begin" => {
                let names = names
                    .take()
                    .ok_or_else(|| Error::parse("real", lineno, ".begin before .variables"))?;
                if let Some(nv) = numvars {
                    if nv != names.len() {
                        return Err(Error::parse(
                            "real",
                            lineno,
                            format!(".numvars {nv} but {} variables", names.len()),
                        ));
                    }
                }
                let width = names.len();
                let constants = constants.take().unwrap_or_else(|| vec!['-'; width]);
                let garbage = garbage.take().unwrap_or_else(|| vec!['-'; width]);
                let mut lines = Vec::with_capacity(width);
                for (i, name) in names.into_iter().enumerate() {
                    let constant = match constants[i] {
                        '-' => None,
                        '0' => Some(false),
                        '1' => Some(true),
                        other => {
                            return Err(Error::parse(
                                "real",
                                lineno,
                                format!("bad constant flag {other:?}"),
                            ))
                        }
                    };
                    let garbage = match garbage[i] {
                        '-' => false,
                        '1' => true,
                        other => {
                            return Err(Error::parse(
                                "real",
                                lineno,
                                format!("bad garbage flag {other:?}"),
                            ))
                        }
                    };
                    lines.push(Line {
                        name,
                        constant,
                        garbage,
                    });
                }
                circ = Some(RevCircuit::new(lines));
            }
            other => {
                return Err(Error::parse(
                    "real",
                    lineno,
                    format!("unknown directive {other}"),
                ))
            }
        }
    }
    match circ {
        Some(c) if ended => Ok(c),
        _ => Err(Error::parse(
            "real",
            text.lines().count(),
            "missing .begin/.end",
        )),
    }
}
