//! `revflow`: generate reciprocal designs, synthesize reversible circuits,
//! verify them exhaustively and report their cost.
//!
//! Exit codes: 0 on success, 1 when verification finds a mismatch, 2 on
//! usage, I/O, parse or size-limit errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use revflow::arith::{design_table, gen_design_xmg, Design, DesignSpec};
use revflow::logic::{
    esop_from_tt, esop_minimize, read_pla, tt_from_xmg, write_pla, EsopForm, TruthTable, Xmg,
};
use revflow::revcirc::{cost_report, read_real, write_real, CostModel, CostReport, RevCircuit};
use revflow::synth::{
    esop_share_cubes, esop_synth, functional_synth, hier_synth_with, Cleanup, HierOptions,
};
use revflow::Limits;

#[derive(Parser)]
#[command(
    name = "revflow",
    version,
    about = "Reversible logic synthesis for reciprocal designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a design as an XMG, an ESOP in PLA form, or a truth table.
    Gen(GenArgs),
    /// Synthesize a reversible circuit and print a JSON cost report.
    Synth(SynthArgs),
    /// Check a REAL circuit against a design on every input.
    Verify(VerifyArgs),
    /// Report the cost of a REAL circuit, or sweep a flow over bitwidths.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DesignArg {
    Intdiv,
    Newton,
}

impl From<DesignArg> for Design {
    fn from(d: DesignArg) -> Self {
        match d {
            DesignArg::Intdiv => Design::IntDiv,
            DesignArg::Newton => Design::Newton,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Xmg,
    Pla,
    Tt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Functional,
    Esop,
    Hier,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Functional => "functional",
            Method::Esop => "esop",
            Method::Hier => "hier",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CleanupArg {
    Bennett,
    Eager,
}

impl From<CleanupArg> for Cleanup {
    fn from(c: CleanupArg) -> Self {
        match c {
            CleanupArg::Bennett => Cleanup::Bennett,
            CleanupArg::Eager => Cleanup::Eager,
        }
    }
}

#[derive(Args, Clone)]
struct DesignArgs {
    #[arg(long, value_enum)]
    design: DesignArg,
    /// Bitwidth of x and of the reciprocal.
    #[arg(short = 'n', long = "bits", value_parser = clap::value_parser!(u32).range(2..=32))]
    n: u32,
    /// Fractional bits of the Newton iterates (default 2n).
    #[arg(long)]
    precision: Option<u32>,
    /// Newton iteration count (default from the convergence formula).
    #[arg(long)]
    iterations: Option<u32>,
}

impl DesignArgs {
    fn spec(&self) -> Result<DesignSpec> {
        spec_for(
            self.design.into(),
            self.n as usize,
            self.precision,
            self.iterations,
        )
    }
}

fn spec_for(
    design: Design,
    n: usize,
    precision: Option<u32>,
    iterations: Option<u32>,
) -> Result<DesignSpec> {
    let spec = DesignSpec {
        design,
        bitwidth: n,
        precision,
        iterations,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    design: DesignArgs,
    #[arg(long, value_enum, default_value = "xmg")]
    format: Format,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct FlowArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, value_enum, default_value = "bennett")]
    cleanup: CleanupArg,
    /// Compute XOR nodes onto dead operand lines (hier).
    #[arg(long)]
    inplace_xor: bool,
    /// Compute shared cubes once and copy them with CNOTs (esop).
    #[arg(long)]
    share_cubes: bool,
    /// File of `c: T` lines overriding the default T-count per control count.
    #[arg(long)]
    cost_model: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// XMG, PLA or truth-table file.
    input: PathBuf,
    #[command(flatten)]
    flow: FlowArgs,
    /// REAL output file (defaults to the input path with a .real extension).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// REAL circuit.
    file: PathBuf,
    #[command(flatten)]
    design: DesignArgs,
}

#[derive(Args)]
struct StatsArgs {
    /// REAL circuit (omit with --sweep).
    #[arg(required_unless_present = "sweep", conflicts_with = "sweep")]
    file: Option<PathBuf>,
    #[arg(long)]
    cost_model: Option<PathBuf>,
    /// Inclusive bitwidth range such as `4..8`; one report row per bitwidth.
    #[arg(long, value_parser = parse_range, requires_all = ["design", "method"])]
    sweep: Option<(usize, usize)>,
    #[arg(long, value_enum)]
    design: Option<DesignArg>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long, value_enum, default_value = "bennett")]
    cleanup: CleanupArg,
    #[arg(long)]
    inplace_xor: bool,
    #[arg(long)]
    share_cubes: bool,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in {s:?}"))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in {s:?}"))?;
    if lo < 2 || hi < lo {
        return Err(format!("range {s:?} must satisfy 2 <= LO <= HI"));
    }
    Ok((lo, hi))
}

/// A design handed to a synthesis flow.
enum Source {
    Table(TruthTable),
    Esop(EsopForm),
    Net(Xmg),
}

/// Design tag written by `gen` as the first comment line.
#[derive(Default)]
struct Tag {
    design: Option<String>,
    n: Option<usize>,
}

fn tag_line(spec: &DesignSpec) -> String {
    format!(
        "# revflow design={} n={}\n",
        spec.design.name(),
        spec.bitwidth
    )
}

fn read_tag(text: &str) -> Tag {
    let mut tag = Tag::default();
    let Some(line) = text
        .lines()
        .find(|l| l.trim_start().starts_with("# revflow "))
    else {
        return tag;
    };
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("design", v)) => tag.design = Some(v.to_string()),
            Some(("n", v)) => tag.n = v.parse().ok(),
            _ => {}
        }
    }
    tag
}

fn read_source(path: &Path) -> Result<(Source, Tag)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or_default();
    let source = if first.starts_with(".xmg") || first.starts_with(".inputs") {
        Source::Net(Xmg::from_text(&text)?)
    } else if first.starts_with('.') {
        Source::Esop(read_pla(&text)?)
    } else {
        Source::Table(TruthTable::from_text(&text)?)
    };
    Ok((source, read_tag(&text)))
}

fn load_cost_model(path: Option<&Path>) -> Result<CostModel> {
    match path {
        None => Ok(CostModel::default()),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(CostModel::parse(&text)?)
        }
    }
}

fn as_table(source: &Source, limits: &Limits) -> Result<TruthTable> {
    Ok(match source {
        Source::Table(tt) => tt.clone(),
        Source::Esop(esop) => esop.to_truth_table()?,
        Source::Net(net) => tt_from_xmg(net, limits)?,
    })
}

fn synthesize(source: &Source, flow: &FlowArgs, limits: &Limits) -> Result<RevCircuit> {
    Ok(match flow.method {
        Method::Functional => functional_synth(&as_table(source, limits)?, limits)?,
        Method::Esop => {
            let form = match source {
                Source::Esop(esop) => esop.clone(),
                other => esop_minimize(&esop_from_tt(&as_table(other, limits)?)),
            };
            if flow.share_cubes {
                esop_share_cubes(&form)
            } else {
                esop_synth(&form)
            }
        }
        Method::Hier => {
            let Source::Net(net) = source else {
                bail!("method hier needs an XMG input (generate one with `gen --format xmg`)");
            };
            hier_synth_with(
                net,
                &HierOptions {
                    cleanup: flow.cleanup.into(),
                    inplace_xor: flow.inplace_xor,
                },
            )
        }
    })
}

#[derive(Serialize)]
struct Report {
    design: Option<String>,
    n: Option<usize>,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    cleanup: Option<&'static str>,
    #[serde(flatten)]
    cost: CostReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    runtime_s: f64,
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_gen(args: &GenArgs, limits: &Limits) -> Result<()> {
    let spec = args.design.spec()?;
    let body = match args.format {
        Format::Xmg => gen_design_xmg(&spec)?.to_text(),
        Format::Pla => write_pla(&esop_minimize(&esop_from_tt(&design_table(&spec, limits)?))),
        Format::Tt => design_table(&spec, limits)?.to_text(),
    };
    let text = tag_line(&spec) + &body;
    match &args.output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_synth(args: &SynthArgs, limits: &Limits) -> Result<()> {
    let model = load_cost_model(args.flow.cost_model.as_deref())?;
    let (source, tag) = read_source(&args.input)?;
    let start = Instant::now();
    let circ = synthesize(&source, &args.flow, limits)?;
    let runtime_s = start.elapsed().as_secs_f64();
    let out = args
        .output
        .clone()
        .unwrap_or_else(|| args.input.with_extension("real"));
    fs::write(&out, write_real(&circ)).with_context(|| format!("writing {}", out.display()))?;
    print_json(&Report {
        design: tag.design,
        n: tag.n,
        method: args.flow.method.name(),
        cleanup: (args.flow.method == Method::Hier)
            .then(|| Cleanup::from(args.flow.cleanup).name()),
        cost: cost_report(&circ, &model),
        verified: None,
        runtime_s,
    })
}

fn read_circuit(path: &Path) -> Result<RevCircuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_real(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_verify(args: &VerifyArgs, limits: &Limits) -> Result<ExitCode> {
    let circ = read_circuit(&args.file)?;
    let spec = args.design.spec()?;
    let tt = design_table(&spec, limits)?;
    let emb = circ.embedding();
    if emb.num_inputs != tt.num_inputs() || emb.num_outputs != tt.num_outputs() {
        println!(
            "mismatch: circuit has {} inputs and {} outputs, design has {} and {}",
            emb.num_inputs,
            emb.num_outputs,
            tt.num_inputs(),
            tt.num_outputs()
        );
        return Ok(ExitCode::from(1));
    }
    let n = tt.num_inputs();
    match circ.find_counterexample(&tt, &emb) {
        None => {
            println!(
                "ok: {} agrees with {} n={} on all {} inputs",
                args.file.display(),
                spec.design.name(),
                n,
                1u64 << n
            );
            Ok(ExitCode::SUCCESS)
        }
        Some(cex) => {
            println!(
                "counterexample: x={:0n$b} expected={:0n$b} actual={:0n$b}",
                cex.input, cex.expected, cex.actual
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_stats(args: &StatsArgs, limits: &Limits) -> Result<()> {
    let model = load_cost_model(args.cost_model.as_deref())?;
    if let Some(path) = &args.file {
        let circ = read_circuit(path)?;
        return print_json(&cost_report(&circ, &model));
    }
    let (Some((lo, hi)), Some(design), Some(method)) = (args.sweep, args.design, args.method)
    else {
        bail!("--sweep needs --design and --method");
    };
    let flow = FlowArgs {
        method,
        cleanup: args.cleanup,
        inplace_xor: args.inplace_xor,
        share_cubes: args.share_cubes,
        cost_model: None,
    };
    for n in lo..=hi {
        let spec = spec_for(design.into(), n, None, None)?;
        let start = Instant::now();
        let source = match method {
            Method::Hier => Source::Net(gen_design_xmg(&spec)?),
            _ => Source::Table(design_table(&spec, limits)?),
        };
        let circ = synthesize(&source, &flow, limits)?;
        let runtime_s = start.elapsed().as_secs_f64();
        let tt = design_table(&spec, limits)?;
        let verified = revflow::revcirc::verify_circuit(&circ, &tt, &circ.embedding());
        print_json(&Report {
            design: Some(spec.design.name().to_string()),
            n: Some(n),
            method: method.name(),
            cleanup: (method == Method::Hier).then(|| Cleanup::from(args.cleanup).name()),
            cost: cost_report(&circ, &model),
            verified: Some(verified),
            runtime_s,
        })?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let limits = Limits::from_env()?;
    match &cli.command {
        Command::Gen(args) => cmd_gen(args, &limits)?,
        Command::Synth(args) => cmd_synth(args, &limits)?,
        Command::Verify(args) => return cmd_verify(args, &limits),
        Command::Stats(args) => cmd_stats(args, &limits)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
