//! Berkeley-style PLA text for ESOP forms.
//!
//! ```text
//! .i 2
//! .o 1
//! .type esop
//! 11 1
//! .e
//! ```
//!
//! Input characters are `1` (positive literal), `0` (negative) or `-`
//! (absent); the output field marks which outputs the cube feeds.

use crate::error::{Error, Result};
use crate::limits::{bit_of, mask_of};
use crate::logic::{Cube, EsopForm};

pub fn write_pla(esop: &EsopForm) -> String {
    let (n, m) = (esop.num_inputs(), esop.num_outputs());
    let mut out = format!(".i {n}\n.o {m}\n.type esop\n");
    for c in esop.cubes() {
        for i in 0..n {
            out.push(if bit_of(c.pos, n, i) {
                '1'
            } else if bit_of(c.neg, n, i) {
                '0'
            } else {
                '-'
            });
        }
        out.push(' ');
        for j in 0..m {
            out.push(if bit_of(c.outputs, m, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out.push_str(".e\n");
    out
}

fn parse_count(value: Option<&str>, lineno: usize) -> Result<usize> {
    value
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse("pla", lineno, "expected a count"))
}

pub fn read_pla(text: &str) -> Result<EsopForm> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut cubes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('.') {
            let mut parts = line.split_whitespace();
            match parts.next().unwrap_or_default() {
                ".i" => n = Some(parse_count(parts.next(), lineno)?),
                ".o" => m = Some(parse_count(parts.next(), lineno)?),
                ".type" => match parts.next() {
                    Some("esop") => {}
                    other => {
                        return Err(Error::parse(
                            "pla",
                            lineno,
                            format!("unsupported type {other:?}, expected esop"),
                        ))
                    }
                },
                ".p" | ".ilb" | ".ob" => {}
                ".e" | ".end" => break,
                other => {
                    return Err(Error::parse(
                        "pla",
                        lineno,
                        format!("unknown directive {other}"),
                    ))
                }
            }
            continue;
        }
        let (Some(n), Some(m)) = (n, m) else {
            return Err(Error::parse("pla", lineno, "cube before .i/.o header"));
        };
        if n >= 64 || m > 64 {
            return Err(Error::parse("pla", lineno, "dimensions exceed 64 bits"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        // A zero-input cube has an empty input field.
        let (ins, outs) = match fields[..] {
            [ins, outs] => (ins, outs),
            [outs] if n == 0 => ("", outs),
            _ => return Err(Error::parse("pla", lineno, "expected `<inputs> <outputs>`")),
        };
        if ins.len() != n {
            return Err(Error::parse(
                "pla",
                lineno,
                format!("input field has {} characters, expected {n}", ins.len()),
            ));
        }
        if outs.len() != m {
            return Err(Error::parse(
                "pla",
                lineno,
                format!("output field has {} characters, expected {m}", outs.len()),
            ));
        }
        let mut cube = Cube {
            pos: 0,
            neg: 0,
            outputs: 0,
        };
        for (i, ch) in ins.chars().enumerate() {
            match ch {
                '1' => cube.pos |= mask_of(n, i),
                '0' => cube.neg |= mask_of(n, i),
                '-' => {}
                other => {
                    return Err(Error::parse(
                        "pla",
                        lineno,
                        format!("bad input character {other:?}"),
                    ))
                }
            }
        }
        for (j, ch) in outs.chars().enumerate() {
            match ch {
                '1' => cube.outputs |= mask_of(m, j),
                '0' => {}
                other => {
                    return Err(Error::parse(
                        "pla",
                        lineno,
                        format!("bad output character {other:?}"),
                    ))
                }
            }
        }
        if cube.outputs != 0 {
            cubes.push(cube);
        }
    }
    let (Some(n), Some(m)) = (n, m) else {
        return Err(Error::parse(
            "pla",
            text.lines().count(),
            "missing .i/.o header",
        ));
    };
    EsopForm::new(n, m, cubes)
}
