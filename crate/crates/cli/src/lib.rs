//! Command-line harness for the wreath-product hidden subgroup solver.
//!
//! [`run`] turns parsed arguments into an [`Output`] (exit code plus text),
//! so the binary is a thin wrapper and tests can drive commands in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use wreath_hsp::qft::{
    gate_count_report, qft_circuit_variant, qft_sign_matrix, GateCountRow, QftVariant,
};
use wreath_hsp::sim::{Circuit, Gate};
use wreath_hsp::solver::{
    collect_stats, solve, success_trial, SolveReport, SolverParams, DEFAULT_SEED,
};
use wreath_hsp::subgroup::{closure, enumerate_subgroups, random_subgroup, MAX_BRUTE_FORCE_ARITY};
use wreath_hsp::suites::{run_suite, Suite, SuiteReport};
use wreath_hsp::{seeded_rng, Error, GroupElement, HiddenFunction, Subgroup};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "wreath-hsp",
    version,
    about = "Hidden subgroups of Z2^n wr Z2 on a statevector simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Plant a subgroup and recover it
    Solve(SolveArgs),
    /// Emit the Fourier transform circuit or its exact sign matrix
    Qft(QftArgs),
    /// Run brute-force property suites
    Verify(VerifyArgs),
    /// Measure how often samples generate both perps
    Sweep(SweepArgs),
    /// List every subgroup (n <= 2)
    Enumerate(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the main output here instead of stdout
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated literals such as `01|10|1`
    #[arg(long, conflicts_with = "random")]
    pub generators: Option<String>,
    /// Plant a random subgroup drawn from the seed
    #[arg(long)]
    pub random: bool,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    /// Skip measuring the label register before the transform
    #[arg(long)]
    pub no_label_measurement: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Matrix,
    Circuit,
}

#[derive(Args, Debug)]
pub struct QftArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Emit::Circuit)]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "all", value_parser = parse_suite)]
    pub suite: Suite,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Largest sample count; checkpoints are 4, 8, 16, ... up to this
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    /// Main output, written to `--out` when given.
    pub stdout: String,
    /// Diagnostics and side tables.
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn error_output(e: Error) -> Output {
    let code = match e {
        Error::Parse { .. } | Error::ArityMismatch { .. } | Error::InvalidArity(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    };
    Output::fail(code, e)
}

#[derive(Serialize)]
pub struct SampleJson {
    pub round: usize,
    pub element: String,
}

#[derive(Serialize)]
pub struct SolveJson {
    pub n: u32,
    pub verified: bool,
    pub generators: Vec<String>,
    pub rounds_used: usize,
    pub transcript: Vec<SampleJson>,
}

impl From<&SolveReport> for SolveJson {
    fn from(r: &SolveReport) -> Self {
        Self {
            n: r.n,
            verified: r.verified,
            generators: literals(&r.generators),
            rounds_used: r.rounds_used,
            transcript: r
                .transcript
                .iter()
                .map(|s| SampleJson {
                    round: s.round,
                    element: s.element.to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SubgroupJson {
    pub n: u32,
    pub generators: Vec<String>,
}

impl From<&Subgroup> for SubgroupJson {
    fn from(u: &Subgroup) -> Self {
        Self {
            n: u.n(),
            generators: literals(u.generators()),
        }
    }
}

#[derive(Serialize)]
pub struct GateJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u64>>,
}

#[derive(Serialize)]
pub struct CircuitJson {
    pub qubits: usize,
    pub gates: Vec<GateJson>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        Self {
            qubits: c.qubit_count(),
            gates: c.gates().iter().map(gate_json).collect(),
        }
    }
}

fn gate_json(g: &Gate) -> GateJson {
    let (controls, targets, table) = match g {
        Gate::H(q) | Gate::X(q) => (vec![], vec![*q], None),
        Gate::Cnot { control, target } => (vec![*control], vec![*target], None),
        Gate::Toffoli { controls, target } => (controls.to_vec(), vec![*target], None),
        Gate::Cswap { control, targets } => (vec![*control], targets.to_vec(), None),
        Gate::QubitPerm(p) => (vec![], p.clone(), None),
        Gate::OracleXor {
            inputs,
            outputs,
            table,
        } => (inputs.clone(), outputs.clone(), Some(table.clone())),
    };
    GateJson {
        kind: g.kind(),
        controls,
        targets,
        table,
    }
}

#[derive(Serialize)]
pub struct MatrixJson {
    pub n: u32,
    /// Every entry is multiplied by `1/sqrt(scale_inverse_square)`.
    pub scale: String,
    pub scale_inverse_square: u64,
    pub rows: Vec<Vec<i8>>,
}

#[derive(Serialize)]
pub struct StatsJson {
    pub i: usize,
    pub trials: usize,
    pub successes: usize,
    pub empirical: f64,
    pub bound: f64,
}

#[derive(Serialize)]
pub struct PropertyJson {
    pub name: &'static str,
    pub checked: usize,
    pub passed: usize,
    pub counterexample: Option<String>,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub suite: String,
    pub n: u32,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyJson>,
}

impl From<&SuiteReport> for VerifyJson {
    fn from(r: &SuiteReport) -> Self {
        Self {
            suite: r.suite.to_string(),
            n: r.n,
            seed: r.seed,
            passed: r.ok(),
            properties: r
                .properties
                .iter()
                .map(|p| PropertyJson {
                    name: p.name,
                    checked: p.checked,
                    passed: p.passed,
                    counterexample: p.counterexample.clone(),
                })
                .collect(),
        }
    }
}

fn literals(gs: &[GroupElement]) -> Vec<String> {
    gs.iter().map(ToString::to_string).collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

fn check_n(n: u32) -> Result<(), Output> {
    if n == 0 {
        return Err(Output::fail(EXIT_USAGE, "--n must be at least 1"));
    }
    Ok(())
}

/// Executes a parsed command.
pub fn run(cli: &Cli) -> Output {
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Qft(a) => cmd_qft(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    result.unwrap_or_else(|o| o)
}

pub fn parse_generators(n: u32, list: &str) -> Result<Vec<GroupElement>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| GroupElement::parse_with_arity(s, n))
        .collect()
}

pub fn cmd_solve(a: &SolveArgs) -> Result<Output, Output> {
    let c = &a.common;
    check_n(c.n)?;
    let planted = match (&a.generators, a.random) {
        (Some(list), _) => {
            let gens = parse_generators(c.n, list).map_err(error_output)?;
            Subgroup::generate(c.n, &gens).map_err(error_output)?
        }
        (None, true) => {
            if c.n > MAX_BRUTE_FORCE_ARITY {
                return Err(error_output(Error::Capacity {
                    what: "random subgroup arity",
                    limit: MAX_BRUTE_FORCE_ARITY as usize,
                }));
            }
            random_subgroup(c.n, &mut seeded_rng(c.seed, u64::MAX))
        }
        (None, false) => {
            return Err(Output::fail(
                EXIT_USAGE,
                "solve needs --generators or --random",
            ));
        }
    };
    let f = HiddenFunction::build(&planted);
    let mut params = SolverParams::new(c.n).with_seed(c.seed);
    if let Some(r) = a.max_rounds {
        params.max_rounds = r;
    }
    params.retain_step4_measurement = !a.no_label_measurement;
    let report = solve(&f, &params).map_err(error_output)?;
    let exact = closure(c.n, &report.generators) == planted.elements();

    let stdout = match c.format {
        Format::Json => to_json(&SolveJson::from(&report)),
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "planted:    {:?}", planted).unwrap();
            writeln!(
                s,
                "recovered:  <{}>",
                literals(&report.generators).join(", ")
            )
            .unwrap();
            writeln!(
                s,
                "U meet N:   <{}>",
                literals(&report.base_generators).join(", ")
            )
            .unwrap();
            writeln!(
                s,
                "U meet U^t: <{}>",
                literals(&report.intersection_generators).join(", ")
            )
            .unwrap();
            writeln!(
                s,
                "rounds:     {} fourier, {} base",
                report.rounds_used, report.base_rounds_used
            )
            .unwrap();
            writeln!(s, "verified:   {}", report.verified).unwrap();
            writeln!(s, "exact:      {exact}").unwrap();
            s
        }
    };
    let mut out = Output::ok(stdout);
    if !(report.verified && exact) {
        out.code = EXIT_FAILURE;
        out.stderr = format!(
            "error: recovery failed (verified {}, exact {exact})\n",
            report.verified
        );
    }
    Ok(out)
}

fn gate_table(rows: &[GateCountRow]) -> String {
    let mut s = String::from("n\thadamards\ttoffolis\ttotal\n");
    for r in rows {
        writeln!(s, "{}\t{}\t{}\t{}", r.n, r.hadamards, r.toffolis, r.total).unwrap();
    }
    s
}

pub fn cmd_qft(a: &QftArgs) -> Result<Output, Output> {
    let c = &a.common;
    check_n(c.n)?;
    let stdout = match a.emit {
        Emit::Circuit => {
            let bundle = qft_circuit_variant(c.n, QftVariant::Symmetric)
                .map_err(|e| Output::fail(EXIT_FAILURE, e))?;
            to_json(&CircuitJson::from(&bundle.circuit))
        }
        Emit::Matrix => {
            let rows = qft_sign_matrix(c.n).map_err(|e| Output::fail(EXIT_FAILURE, e))?;
            let dim = rows.len() as u64;
            match c.format {
                Format::Json => to_json(&MatrixJson {
                    n: c.n,
                    scale: format!("1/sqrt({dim})"),
                    scale_inverse_square: dim,
                    rows,
                }),
                Format::Text => {
                    let mut s = format!("# scale 1/sqrt({dim})\n");
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
                        writeln!(s, "{}", cells.join(" ")).unwrap();
                    }
                    s
                }
            }
        }
    };
    let row = gate_count_report(c.n).map_err(|e| Output::fail(EXIT_FAILURE, e))?;
    Ok(Output {
        code: EXIT_OK,
        stdout,
        stderr: gate_table(&row[row.len() - 1..]),
    })
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Output, Output> {
    let c = &a.common;
    check_n(c.n)?;
    let report = run_suite(a.suite, c.n, c.seed).map_err(|e| Output::fail(EXIT_FAILURE, e))?;
    let stdout = match c.format {
        Format::Json => to_json(&VerifyJson::from(&report)),
        Format::Text => {
            let mut s = String::new();
            for p in &report.properties {
                let status = if p.ok() { "ok  " } else { "FAIL" };
                writeln!(s, "{status} {}: {}/{}", p.name, p.passed, p.checked).unwrap();
                if let Some(ce) = &p.counterexample {
                    writeln!(s, "     counterexample: {ce}").unwrap();
                }
            }
            s
        }
    };
    let mut out = Output::ok(stdout);
    if !report.ok() {
        out.code = EXIT_FAILURE;
        out.stderr = "error: property suite failed\n".into();
    }
    Ok(out)
}

/// Sample checkpoints `4, 8, 16, ...` not exceeding `max`.
pub fn checkpoints(max: usize) -> Vec<usize> {
    std::iter::successors(Some(4usize), |&i| i.checked_mul(2))
        .take_while(|&i| i <= max)
        .collect()
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Output, Output> {
    let c = &a.common;
    check_n(c.n)?;
    let points = checkpoints(a.samples);
    if points.is_empty() {
        return Err(Output::fail(EXIT_USAGE, "--samples must be at least 4"));
    }
    let per_trial: Vec<Vec<bool>> = (0..a.trials as u64)
        .into_par_iter()
        .map(|k| success_trial(c.n, c.seed, k, &points))
        .collect::<Result<_, _>>()
        .map_err(|e| Output::fail(EXIT_FAILURE, e))?;
    let mut successes = vec![0usize; points.len()];
    for trial in &per_trial {
        for (s, &ok) in successes.iter_mut().zip(trial) {
            *s += ok as usize;
        }
    }
    let stats = collect_stats(a.trials, &points, &successes);
    let mut stdout = String::new();
    if c.format == Format::Text {
        stdout.push_str("i\ttrials\tsuccesses\tempirical\tbound\n");
    }
    for s in stats {
        match c.format {
            Format::Json => stdout.push_str(&to_json(&StatsJson {
                i: s.i,
                trials: s.trials,
                successes: s.successes,
                empirical: s.rate(),
                bound: s.bound,
            })),
            Format::Text => writeln!(
                stdout,
                "{}\t{}\t{}\t{:.4}\t{:.4}",
                s.i,
                s.trials,
                s.successes,
                s.rate(),
                s.bound
            )
            .unwrap(),
        }
    }
    Ok(Output::ok(stdout))
}

pub fn cmd_enumerate(c: &Common) -> Result<Output, Output> {
    check_n(c.n)?;
    let all = enumerate_subgroups(c.n).map_err(|e| Output::fail(EXIT_FAILURE, e))?;
    let mut stdout = String::new();
    for u in &all {
        match c.format {
            Format::Json => stdout.push_str(&to_json(&SubgroupJson::from(u))),
            Format::Text => writeln!(stdout, "{u:?}").unwrap(),
        }
    }
    Ok(Output::ok(stdout))
}

/// Where the main output of `cli` goes, if not stdout.
pub fn out_path(cli: &Cli) -> Option<&std::path::Path> {
    let c = match &cli.command {
        Command::Solve(a) => &a.common,
        Command::Qft(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Sweep(a) => &a.common,
        Command::Enumerate(c) => c,
    };
    c.out.as_deref()
}
