use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use gms_cli::{
    compile_checked, read_circuit, rows_to_csv, rows_to_json, run_bench, summary, verify, BenchOptions, CliError,
};
use gms_core::frontier_lp::{DEFAULT_MAX_EXACT_ROWS, DEFAULT_NODE_BUDGET};
use gms_core::pipeline::{CompileOptions, Method};
use gms_core::qasm::emit_qasmx;

#[derive(Parser)]
#[command(name = "gmsc", version, about = "Compile quantum circuits to GMS-only entangling gates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Qasmx,
    Json,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct Tuning {
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    lp_node_budget: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT_ROWS)]
    lp_max_size: usize,
    #[arg(long)]
    no_sqg_opt: bool,
    /// Lower every H to RZ·RX·RZ.
    #[arg(long)]
    native_h: bool,
    /// Seed for the sampled equivalence check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Tuning {
    fn options(&self, method: Method) -> CompileOptions {
        CompileOptions {
            method,
            lp_max_size: self.lp_max_size,
            lp_node_budget: self.lp_node_budget,
            sqg_opt: !self.no_sqg_opt,
            native_h: self.native_h,
            log_frontiers: false,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile one OpenQASM 2.0 file.
    Compile {
        input: PathBuf,
        #[arg(long, default_value = "lp")]
        strategy: Method,
        #[command(flatten)]
        tuning: Tuning,
        /// Check the output against the input on the simulator (up to 10 qubits).
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Qasmx)]
        format: Format,
        /// Write QASM-X here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a compiled QASM-X file implements the original circuit.
    Verify {
        original: PathBuf,
        compiled: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compile every `.qasm` file of a directory with each strategy.
    Bench {
        dir: PathBuf,
        /// Comma-separated strategies.
        #[arg(long, value_delimiter = ',', default_value = "lp,patel,fanout,naive")]
        strategies: Vec<Method>,
        #[command(flatten)]
        tuning: Tuning,
        #[arg(long, default_value_t = 300)]
        timeout_s: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Leave compile_wall_ms empty so reports are reproducible.
        #[arg(long)]
        no_wall_time: bool,
        #[arg(long)]
        no_verify: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("gmsc: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn run() -> anyhow::Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Compile { input, strategy, tuning, verify, format, output } => {
            let c = match read_circuit(&input) {
                Ok(c) => c,
                Err(e) => return Ok(fail(e)),
            };
            let (out, checked) = match compile_checked(&c, &tuning.options(strategy), verify, tuning.seed) {
                Ok(r) => r,
                Err(e) => return Ok(fail(e)),
            };
            if let Some(v) = checked {
                eprintln!("verified: {}", serde_json::to_string(&v)?.trim_matches('"'));
            }
            if matches!(format, Format::Qasmx | Format::Both) {
                let text = emit_qasmx(&out.circuit);
                match &output {
                    Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                    None => print!("{text}"),
                }
            }
            if matches!(format, Format::Json | Format::Both) {
                println!("{}", serde_json::to_string(&out.stats)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { original, compiled, seed } => {
            let r = read_circuit(&original).and_then(|a| read_circuit(&compiled).map(|b| (a, b)));
            match r.and_then(|(a, b)| verify(&a, &b, seed)) {
                Ok(v) => {
                    println!("{}", serde_json::to_string(&v)?.trim_matches('"'));
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Ok(fail(e)),
            }
        }
        Cmd::Bench { dir, strategies, tuning, timeout_s, jobs, no_wall_time, no_verify, format, output } => {
            let opts = BenchOptions {
                methods: strategies,
                base: tuning.options(Method::Naive),
                timeout: Duration::from_secs(timeout_s),
                jobs,
                wall_time: !no_wall_time,
                verify: !no_verify,
                seed: tuning.seed,
            };
            let rows = run_bench(&dir, &opts).with_context(|| format!("reading {}", dir.display()))?;
            let report = match format {
                ReportFormat::Csv => rows_to_csv(&rows),
                ReportFormat::Json => rows_to_json(&rows),
            };
            match &output {
                Some(p) => {
                    std::fs::write(p, report).with_context(|| format!("writing {}", p.display()))?;
                    eprint!("{}", summary(&rows));
                }
                None => print!("{report}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gmsc: {e:#}");
            ExitCode::FAILURE
        }
    }
}
