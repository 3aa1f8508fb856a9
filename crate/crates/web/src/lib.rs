//! Browser bindings. Every export returns a JSON string; the plain Rust
//! functions behind them are what the native tests exercise.

use gms_core::circuit::circuit_stats;
use gms_core::frontier_lp::{
    choose_layer, dump_lp, encode, reduction_to_cnots, DEFAULT_MAX_EXACT_ROWS, DEFAULT_NODE_BUDGET,
};
use gms_core::gf2::Gf2Matrix;
use gms_core::pipeline::{compile, CompileOptions, Method};
use gms_core::qasm::{emit_qasmx, parse_qasm};
use serde_json::json;
use wasm_bindgen::prelude::*;

pub fn compile_to_json(src: &str, strategy: &str, native_h: bool) -> Result<String, String> {
    let method: Method = strategy.parse()?;
    let c = parse_qasm(src).map_err(|e| e.to_string())?.named("input");
    let opts = CompileOptions { native_h, ..CompileOptions::with_method(method) };
    let out = compile(&c, &opts).map_err(|e| e.to_string())?;
    let v = json!({
        "qasmx": emit_qasmx(&out.circuit),
        "stats": out.stats,
        "input": circuit_stats(&c),
    });
    Ok(v.to_string())
}

pub fn stats_to_json(src: &str) -> Result<String, String> {
    let c = parse_qasm(src).map_err(|e| e.to_string())?.named("input");
    serde_json::to_string(&circuit_stats(&c)).map_err(|e| e.to_string())
}

/// `text` holds one row per line, entries `0`/`1` optionally separated by
/// spaces or commas.
pub fn parse_matrix(text: &str) -> Result<Gf2Matrix, String> {
    let rows: Vec<Vec<u8>> = text
        .lines()
        .map(|l| l.chars().filter(|c| !c.is_whitespace() && *c != ',').collect::<String>())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(format!("unexpected `{other}` in matrix")),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err("empty matrix".into());
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err("rows differ in length".into());
    }
    Ok(Gf2Matrix::from_rows(&rows))
}

fn bits(m: &Gf2Matrix) -> Vec<String> {
    m.to_rows().iter().map(|r| r.iter().map(|b| char::from(b'0' + b)).collect()).collect()
}

pub fn solve_to_json(text: &str) -> Result<String, String> {
    let m = parse_matrix(text)?;
    let r = choose_layer(&m, DEFAULT_MAX_EXACT_ROWS, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let cnots = reduction_to_cnots(&r).map_err(|e| e.to_string())?;
    let v = json!({
        "g": bits(&r.g),
        "reduced": bits(&r.apply(&m)),
        "cnots": cnots,
        "extractable_rows": r.extractable_rows,
        "cnot_count": r.cnot_count,
        "objective": r.objective,
        "lp": dump_lp(&encode(&m)),
    });
    Ok(v.to_string())
}

#[wasm_bindgen]
pub fn compile_qasm(src: &str, strategy: &str, native_h: bool) -> Result<String, JsError> {
    compile_to_json(src, strategy, native_h).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn solve_frontier(matrix: &str) -> Result<String, JsError> {
    solve_to_json(matrix).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn stats(src: &str) -> Result<String, JsError> {
    stats_to_json(src).map_err(|e| JsError::new(&e))
}
