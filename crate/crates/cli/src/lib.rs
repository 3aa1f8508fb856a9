//! Library side of `gmsc`: single-file compilation with optional
//! verification, and the benchmark runner.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use gms_core::circuit::Circuit;
use gms_core::extract::ExtractError;
use gms_core::frontier_lp::LpError;
use gms_core::pipeline::{compile, CompileError, CompileOptions, Compiled, Method};
use gms_core::qasm::{parse_qasm, QasmError};
use gms_core::sim::{compare_circuits, SimError, DEFAULT_TOLERANCE, MAX_UNITARY_QUBITS};
use serde::Serialize;
use thiserror::Error;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] QasmError),
    #[error("verification failed (deviation {0:.3e})")]
    Verify(f64),
    #[error("simulation: {0}")]
    Sim(#[from] SimError),
    #[error("compilation: {0}")]
    Compile(#[from] CompileError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Verify(_) => EXIT_VERIFY,
            CliError::Compile(CompileError::Extract(
                ExtractError::Runaway(_) | ExtractError::Layer(LpError::BudgetExceeded(_)),
            )) => EXIT_BUDGET,
            _ => 1,
        }
    }
}

/// Outcome of a verification request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verified {
    Yes,
    Skipped,
}

pub fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(parse_qasm(&text)?.named(name))
}

/// Simulator check of `compiled` against `original`; skipped above the
/// dense-unitary limit.
pub fn verify(original: &Circuit, compiled: &Circuit, seed: u64) -> Result<Verified, CliError> {
    if original.qubit_count() > MAX_UNITARY_QUBITS {
        return Ok(Verified::Skipped);
    }
    let cmp = compare_circuits(original, compiled, DEFAULT_TOLERANCE, seed)?;
    if cmp.equivalent {
        Ok(Verified::Yes)
    } else {
        Err(CliError::Verify(cmp.deviation))
    }
}

pub fn compile_checked(
    c: &Circuit,
    opts: &CompileOptions,
    check: bool,
    seed: u64,
) -> Result<(Compiled, Option<Verified>), CliError> {
    let out = compile(c, opts)?;
    let v = if check { Some(verify(c, &out.circuit, seed)?) } else { None };
    Ok((out, v))
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub methods: Vec<Method>,
    pub base: CompileOptions,
    pub timeout: Duration,
    pub jobs: usize,
    pub wall_time: bool,
    pub verify: bool,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            methods: Method::ALL.to_vec(),
            base: CompileOptions::default(),
            timeout: Duration::from_secs(300),
            jobs: 1,
            wall_time: true,
            verify: true,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub circuit: String,
    pub qubits: Option<usize>,
    pub strategy: String,
    #[serde(rename = "SQG")]
    pub sqg: Option<usize>,
    pub entangling: Option<usize>,
    pub time_ms: Option<f64>,
    pub compile_wall_ms: Option<f64>,
    pub verified: String,
    pub error: String,
}

impl BenchRow {
    fn failed(circuit: &str, qubits: Option<usize>, strategy: &str, error: String) -> Self {
        BenchRow {
            circuit: circuit.to_string(),
            qubits,
            strategy: strategy.to_string(),
            sqg: None,
            entangling: None,
            time_ms: None,
            compile_wall_ms: None,
            verified: String::new(),
            error,
        }
    }
}

/// QASM files of `dir`, sorted by name.
pub fn qasm_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "qasm"))
        .collect();
    files.sort();
    Ok(files)
}

fn bench_one(c: Circuit, method: Method, opts: &BenchOptions) -> BenchRow {
    let name = c.name.clone();
    let compile_opts = CompileOptions { method, ..opts.base.clone() };
    let (verify_it, seed, timeout) = (opts.verify, opts.seed, opts.timeout);
    let (tx, rx) = mpsc::channel();
    let start = Instant::now();
    thread::spawn(move || {
        let r = compile(&c, &compile_opts).map_err(CliError::from);
        let wall = start.elapsed();
        let r = r.map(|out| {
            let v = if verify_it { Some(verify(&c, &out.circuit, seed)) } else { None };
            (out, v)
        });
        let _ = tx.send((r, wall, c.qubit_count()));
    });
    match rx.recv_timeout(timeout) {
        Ok((Ok((out, v)), wall, _)) => {
            let (verified, error) = match v {
                None => (String::new(), String::new()),
                Some(Ok(Verified::Yes)) => ("yes".to_string(), String::new()),
                Some(Ok(Verified::Skipped)) => ("skipped".to_string(), String::new()),
                Some(Err(e)) => ("no".to_string(), e.to_string()),
            };
            BenchRow {
                circuit: name,
                qubits: Some(out.stats.qubits),
                strategy: method.name().to_string(),
                sqg: Some(out.stats.sqg),
                entangling: Some(out.stats.entangling),
                time_ms: Some(out.stats.time_ms),
                compile_wall_ms: opts.wall_time.then_some(wall.as_secs_f64() * 1e3),
                verified,
                error,
            }
        }
        Ok((Err(e), _, q)) => BenchRow::failed(&name, Some(q), method.name(), e.to_string()),
        Err(_) => BenchRow::failed(&name, None, method.name(), format!("timeout after {}s", timeout.as_secs())),
    }
}

/// Compile every QASM file in `dir` with every requested method. Rows are
/// ordered by file name, then by method order.
pub fn run_bench(dir: &Path, opts: &BenchOptions) -> std::io::Result<Vec<BenchRow>> {
    let files = qasm_files(dir)?;
    let mut rows: Vec<Option<BenchRow>> = vec![None; files.len() * opts.methods.len()];
    let mut jobs = Vec::new();
    for (fi, path) in files.iter().enumerate() {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        match read_circuit(path) {
            Ok(c) => {
                for (mi, &m) in opts.methods.iter().enumerate() {
                    jobs.push((fi * opts.methods.len() + mi, c.clone(), m));
                }
            }
            Err(e) => {
                for (mi, m) in opts.methods.iter().enumerate() {
                    rows[fi * opts.methods.len() + mi] = Some(BenchRow::failed(&stem, None, m.name(), e.to_string()));
                }
            }
        }
    }
    let next = AtomicUsize::new(0);
    let done = Mutex::new(&mut rows);
    thread::scope(|s| {
        for _ in 0..opts.jobs.max(1) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some((slot, c, m)) = jobs.get(k) else { break };
                let row = bench_one(c.clone(), *m, opts);
                done.lock().expect("no poisoned workers")[*slot] = Some(row);
            });
        }
    });
    Ok(rows.into_iter().map(|r| r.expect("every slot filled")).collect())
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn ms(v: Option<f64>) -> Option<String> {
    v.map(|x| format!("{x:.3}"))
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["circuit", "qubits", "strategy", "SQG", "entangling", "time_ms", "compile_wall_ms", "verified", "error"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.circuit.clone(),
            cell(&r.qubits),
            r.strategy.clone(),
            cell(&r.sqg),
            cell(&r.entangling),
            cell(&ms(r.time_ms)),
            cell(&ms(r.compile_wall_ms)),
            r.verified.clone(),
            r.error.clone(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn rows_to_json(rows: &[BenchRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialise");
    s.push('\n');
    s
}

/// One-line summary per strategy: total entangling and SQG over the rows
/// that compiled.
pub fn summary(rows: &[BenchRow]) -> String {
    let mut strategies: Vec<&str> = Vec::new();
    for r in rows {
        if !strategies.contains(&r.strategy.as_str()) {
            strategies.push(&r.strategy);
        }
    }
    let mut s = String::new();
    for st in strategies {
        let ok: Vec<&BenchRow> = rows.iter().filter(|r| r.strategy == st && r.error.is_empty()).collect();
        let ent: usize = ok.iter().filter_map(|r| r.entangling).sum();
        let sqg: usize = ok.iter().filter_map(|r| r.sqg).sum();
        let _ = writeln!(s, "{st:>7}: {} circuits, {ent} entangling, {sqg} SQG", ok.len());
    }
    s
}
