//! `inqc` command line: run, verify, estimate and sweep.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::circuit::{parse_circuit, Circuit, GeneratorConfig};
use crate::protocol::{
    run_protocol, sweep, GadgetSchedule, ProtocolError, RunConfig, RunReport, SCHEMA_VERSION,
};
use crate::qsim::QsimError;
use crate::resources::Channel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "inqc",
    version,
    about = "Two-party nonlocal quantum computation simulator"
)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the protocol once on a circuit file.
    Run(RunArgs),
    /// Run a circuit file under several consecutive seeds and check every run.
    Verify(VerifyArgs),
    /// Print the resources a circuit needs, without running it.
    Estimate(EstimateArgs),
    /// Run seeded random circuits and report the worst fidelity.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, env = "INQC_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Emit a single-line JSON report.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tolerance)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Measurement outcomes to force, in order, e.g. `0110`.
    #[arg(long, value_parser = parse_bits)]
    pub force_outcomes: Option<Bits>,
    /// Run Bob's T-gadget measurement before Alice's.
    #[arg(long)]
    pub bob_first: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=12))]
    pub max_wires: u64,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(0..=10_000))]
    pub max_gates: u64,
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("tolerance must lie in (0, 1)".into())
    }
}

/// A forced-outcome bit string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bits(pub Vec<bool>);

fn parse_bits(s: &str) -> Result<Bits, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("expected 0 or 1, got `{other}`")),
        })
        .collect::<Result<_, _>>()
        .map(Bits)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match config.command {
        Command::Run(args) => cmd_run(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Estimate(args) => cmd_estimate(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct CliError {
    code: i32,
    message: String,
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        let code = match e {
            // An impossible forced branch is bad input, not a failed check.
            ProtocolError::Qsim(QsimError::ImpossibleOutcome) => EXIT_USAGE,
            _ => EXIT_VERIFY_FAILED,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_circuit(&text).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn run_config(args: &RunArgs, seed: u64) -> RunConfig {
    RunConfig {
        seed,
        forced: args.force_outcomes.clone().map(|b| b.0).unwrap_or_default(),
        schedule: if args.bob_first {
            GadgetSchedule::BobFirst
        } else {
            GadgetSchedule::AliceFirst
        },
    }
}

fn bit_char(b: bool) -> char {
    if b {
        '1'
    } else {
        '0'
    }
}

fn print_summary(report: &RunReport, tolerance: f64, out: &mut dyn Write) -> std::io::Result<()> {
    let r = &report.resources;
    writeln!(out, "circuit   {}", report.circuit_hash)?;
    writeln!(out, "seed      {}", report.seed)?;
    writeln!(
        out,
        "resources epr={} nlb={} (estimate epr={} nlb={}){}",
        r.epr,
        r.nlb,
        r.estimate.epr,
        r.estimate.nlb,
        if r.exact { "" } else { " MISMATCH" }
    )?;
    let classical = report
        .audit
        .per_channel
        .get(&Channel::Classical)
        .copied()
        .unwrap_or(0);
    writeln!(
        out,
        "ledger    {} events, {} classical, A->B {} bits, B->A {} bits, audit {}",
        report.ledger.events().len(),
        classical,
        report.audit.bits_ab,
        report.audit.bits_ba,
        if report.audit.passed { "PASS" } else { "FAIL" }
    )?;
    for v in &report.audit.violations {
        writeln!(out, "  violation {v:?}")?;
    }
    for g in &report.transcript.gadgets {
        writeln!(
            out,
            "gadget    gate {} wire {}: c={} d={} nlb=({}, {})",
            g.gate,
            g.wire,
            bit_char(g.outcome.c),
            bit_char(g.outcome.d),
            bit_char(g.outcome.nlb_a),
            bit_char(g.outcome.nlb_b)
        )?;
    }
    for o in &report.outputs {
        let bit = o.bit.map(|b| format!(" bit={b}")).unwrap_or_default();
        writeln!(
            out,
            "output    wire {} ({}, {}){} fidelity {:.12}",
            o.wire, o.owner, o.kind, bit, o.fidelity
        )?;
    }
    writeln!(out, "fidelity  min {:.12}", report.oracle_fidelity_min)?;
    writeln!(
        out,
        "result    {}",
        if report.passed(tolerance) {
            "PASS"
        } else {
            "FAIL"
        }
    )
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let report = run_protocol(&circuit, &run_config(args, args.common.seed))?;
    if args.common.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        print_summary(&report, args.common.tolerance, out)?;
    }
    Ok(if report.passed(args.common.tolerance) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

#[derive(Serialize)]
struct VerifyRun {
    seed: u64,
    passed: bool,
    fidelity: f64,
    audit_passed: bool,
    resources_exact: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    circuit_hash: String,
    trials: u64,
    passed: usize,
    min_fidelity: f64,
    runs: Vec<VerifyRun>,
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let circuit = load_circuit(&args.run.circuit)?;
    let tol = args.run.common.tolerance;
    let mut runs = Vec::new();
    for i in 0..args.trials {
        let seed = args.run.common.seed.wrapping_add(i);
        let report = run_protocol(&circuit, &run_config(&args.run, seed))?;
        runs.push(VerifyRun {
            seed,
            passed: report.passed(tol),
            fidelity: report.oracle_fidelity_min,
            audit_passed: report.audit.passed,
            resources_exact: report.resources.exact,
        });
    }
    let report = VerifyReport {
        schema: SCHEMA_VERSION,
        circuit_hash: circuit.hash_hex(),
        trials: args.trials,
        passed: runs.iter().filter(|r| r.passed).count(),
        min_fidelity: runs.iter().map(|r| r.fidelity).fold(1.0, f64::min),
        runs,
    };
    if args.run.common.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&report).expect("report serializes")
        )?;
    } else {
        for r in &report.runs {
            writeln!(
                out,
                "seed {:>6}  fidelity {:.12}  audit {}  resources {}  {}",
                r.seed,
                r.fidelity,
                if r.audit_passed { "ok" } else { "FAIL" },
                if r.resources_exact { "ok" } else { "FAIL" },
                if r.passed { "PASS" } else { "FAIL" }
            )?;
        }
        writeln!(
            out,
            "verify: {}/{} runs passed, min fidelity {:.12}",
            report.passed, report.trials, report.min_fidelity
        )?;
    }
    Ok(if report.passed as u64 == report.trials {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn cmd_estimate(args: &EstimateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let circuit = load_circuit(&args.circuit)?;
    let est = circuit.estimate_resources();
    if args.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&est).expect("estimate serializes")
        )?;
    } else {
        writeln!(
            out,
            "epr={} nlb={} bits_ab={} bits_ba={}",
            est.epr, est.nlb, est.classical_bits_ab, est.classical_bits_ba
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let defaults = GeneratorConfig::default();
    let max_wires = args.max_wires as usize;
    let max_gates = args.max_gates as usize;
    let generator = GeneratorConfig {
        min_wires: defaults.min_wires.min(max_wires),
        max_wires,
        min_gates: defaults.min_gates.min(max_gates),
        max_gates,
        ..defaults
    };
    let report = sweep(
        args.common.seed,
        args.trials as usize,
        &generator,
        args.common.tolerance,
    );
    if args.common.json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        for r in report.runs.iter().filter(|r| !r.passed) {
            writeln!(
                out,
                "FAIL trial {} seed {} fidelity {:.12} audit {} exact {}{}",
                r.trial,
                r.seed,
                r.fidelity,
                r.audit_passed,
                r.resources_exact,
                r.error
                    .as_deref()
                    .map(|e| format!(" error: {e}"))
                    .unwrap_or_default()
            )?;
        }
        writeln!(
            out,
            "sweep: {} trials, {} failed, min_fidelity {:.12}",
            report.trials,
            report.failures.len(),
            report.min_fidelity
        )?;
    }
    Ok(if report.all_passed {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}
