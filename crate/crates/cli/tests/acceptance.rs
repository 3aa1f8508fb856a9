//! One PASS/FAIL line per acceptance criterion.

#[path = "../../core/tests/support/identities.rs"]
mod identities;

use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use gms_cli::{rows_to_csv, rows_to_json, run_bench, BenchOptions};
use gms_core::circuit::{Circuit, Gate};
use gms_core::extract::Strategy;
use gms_core::frontier_lp::{
    assignment_from_g, check_assignment, encode, fanout_fallback, is_commuting_layer, solve_exact, LpError,
    DEFAULT_NODE_BUDGET,
};
use gms_core::generators::{bernstein_vazirani, cnot_ladder, commuting_cnot_layer, cz_complete, ghz_ladder, random_circuit};
use gms_core::gf2::Gf2Matrix;
use gms_core::phase::Phase;
use gms_core::pipeline::{compile, CompileOptions, Method};
use gms_core::sim::{circuit_unitary, equivalent_up_to_phase};
use gms_core::sqg_opt::sqg_count;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EQUIV_TOL: f64 = 1e-9;
const IDENTITY_TOL: f64 = 1e-10;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, k: usize, ok: bool, what: &str, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {k}: {} {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
}

fn opts(method: Method, sqg_opt: bool) -> CompileOptions {
    CompileOptions { sqg_opt, log_frontiers: true, ..CompileOptions::with_method(method) }
}

fn gms_count(method: Method, c: &Circuit) -> usize {
    compile(c, &CompileOptions::with_method(method)).map(|o| o.stats.entangling).unwrap_or(usize::MAX)
}

fn pure(c: &Circuit) -> bool {
    let n = c.qubit_count();
    c.gates().iter().filter(|g| g.qubits().len() > 1).all(|g| match g {
        Gate::Gms(l) => {
            let a = l.matrix(n);
            *l.angle() == Phase::frac_pi(1, 2)
                && (0..n).all(|i| a[i][i] == 0 && (0..n).all(|j| a[i][j] == a[j][i]))
        }
        _ => false,
    })
}

fn entangling_seq(c: &Circuit) -> Vec<Gate> {
    c.gates().iter().filter(|g| g.qubits().len() > 1).cloned().collect()
}

fn brute_force(m: &Gf2Matrix) -> Option<i64> {
    let n = m.rows();
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut best = None;
    for bits in 0u32..(1 << off.len()) {
        let mut g = Gf2Matrix::identity(n);
        for (k, &(i, j)) in off.iter().enumerate() {
            if bits >> k & 1 == 1 {
                g.set(i, j, true);
            }
        }
        // a target row may not itself be modified
        if off.iter().any(|&(i, j)| g.get(i, j) && (0..n).any(|p| p != j && g.get(j, p))) {
            continue;
        }
        let x = g.mul(m).unwrap();
        let z = (0..n).filter(|&i| x.row_weight(i) == 1).count() as i64;
        if z > 0 {
            let obj = n as i64 * z - bits.count_ones() as i64;
            best = Some(best.map_or(obj, |b: i64| b.max(obj)));
        }
    }
    best
}

fn main() -> ExitCode {
    let t0 = Instant::now();
    let mut report = Report { failures: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let circuits: Vec<Circuit> =
        (0..200).map(|_| random_circuit(rng.gen_range(2..=6), rng.gen_range(1..=30), &mut rng)).collect();
    let (mut equiv_bad, mut impure, mut sqg_bad, mut compiled) = (0, 0, 0, 0);
    let mut frontiers = Vec::new();
    for c in &circuits {
        let u = circuit_unitary(c).unwrap();
        for m in Method::ALL {
            let (Ok(raw), Ok(opt)) = (compile(c, &opts(m, false)), compile(c, &opts(m, true))) else {
                equiv_bad += 1;
                continue;
            };
            compiled += 1;
            frontiers.extend(opt.frontiers);
            let eq = |x: &Circuit| equivalent_up_to_phase(&u, &circuit_unitary(x).unwrap(), EQUIV_TOL);
            equiv_bad += usize::from(!eq(&raw.circuit) || !eq(&opt.circuit));
            impure += usize::from(!pure(&raw.circuit) || !pure(&opt.circuit));
            let keeps = sqg_count(&opt.circuit) <= sqg_count(&raw.circuit)
                && entangling_seq(&opt.circuit) == entangling_seq(&raw.circuit)
                && eq(&opt.circuit);
            sqg_bad += usize::from(!keeps);
        }
    }
    report.line(1, equiv_bad == 0, "equivalence", format!("{compiled} compilations, {equiv_bad} failures, tol {EQUIV_TOL:e}"));
    report.line(2, impure == 0, "GMS-only gate set", format!("{impure} impure outputs"));

    let mut one_gms = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=8);
        let c = commuting_cnot_layer(n, 12, &mut rng);
        one_gms += usize::from(Strategy::ALL.iter().all(|&s| gms_count(Method::Zx(s), &c) == 1));
    }
    let mut two_plus = 0;
    for _ in 0..100 {
        let n = rng.gen_range(3..=8);
        let len = rng.gen_range(2..n);
        let c = cnot_ladder(n, len, &mut rng);
        two_plus += usize::from(Strategy::ALL.iter().all(|&s| (2..usize::MAX).contains(&gms_count(Method::Zx(s), &c))));
    }
    report.line(
        3,
        one_gms == 100 && two_plus == 100,
        "commuting layers vs ladders",
        format!("{one_gms}/100 layers in one GMS, {two_plus}/100 ladders in >= 2"),
    );

    let (mut agree, mut structural) = (0, 0);
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let cols = rng.gen_range(n..=5);
        let m = loop {
            let rows: Vec<Vec<u8>> = (0..n).map(|_| (0..cols).map(|_| rng.gen_range(0..2)).collect()).collect();
            let m = Gf2Matrix::from_rows(&rows);
            if m.rank() == n {
                break m;
            }
        };
        let inst = encode(&m);
        match (solve_exact(&inst, DEFAULT_NODE_BUDGET), brute_force(&m)) {
            (Ok(r), Some(best)) => {
                agree += usize::from(r.objective == best);
                let ok = r.validate(&m).is_ok()
                    && is_commuting_layer(&r.g)
                    && check_assignment(&inst, &assignment_from_g(&inst, &r.g)).is_ok();
                structural += usize::from(ok);
            }
            (Err(LpError::Infeasible), None) => {
                agree += 1;
                structural += 1;
            }
            _ => {}
        }
    }
    report.line(
        4,
        agree == 500 && structural == 500,
        "exact solver vs brute force",
        format!("{agree}/500 optimal, {structural}/500 structurally valid"),
    );

    let solved = frontiers.iter().filter(|m| fanout_fallback(m).is_ok_and(|r| !r.extractable_rows.is_empty())).count();
    report.line(
        5,
        !frontiers.is_empty() && solved == frontiers.len(),
        "fanout fallback on logged frontiers",
        format!("{solved}/{} frontiers", frontiers.len()),
    );

    let failed = identities::run_all(5, 20, &mut rng, IDENTITY_TOL);
    report.line(6, failed.is_empty(), "gate identities", format!("n = 2..5, tol {IDENTITY_TOL:e}, failed: {failed:?}"));

    let bv = bernstein_vazirani(16, &[true; 15]);
    let (bv_lp, bv_patel) = (gms_count(Method::Zx(Strategy::Lp), &bv), gms_count(Method::Zx(Strategy::Patel), &bv));
    let ghz = gms_count(Method::Zx(Strategy::Lp), &ghz_ladder(20));
    let cz = gms_count(Method::Zx(Strategy::Lp), &cz_complete(8));
    report.line(
        7,
        bv_lp <= 3 && bv_patel <= 3 && ghz <= 19 && cz == 1,
        "scaled targets",
        format!("bv16 lp {bv_lp} patel {bv_patel} (<= 3), ghz20 {ghz} (<= 19), cz-complete8 {cz} (= 1)"),
    );

    report.line(8, sqg_bad == 0, "single-qubit clean-up", format!("{sqg_bad}/{compiled} violations"));

    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let bench = BenchOptions { wall_time: false, jobs: 4, ..BenchOptions::default() };
    let runs: Vec<(String, String)> = (0..2)
        .map(|_| {
            let rows = run_bench(&fixtures, &bench).expect("fixture corpus readable");
            (rows_to_csv(&rows), rows_to_json(&rows))
        })
        .collect();
    let lines = runs[0].0.lines().count() - 1;
    report.line(9, runs[0] == runs[1] && lines > 0, "deterministic bench", format!("{lines} rows, csv and json compared"));

    println!("{} failing, {:.1}s", report.failures, t0.elapsed().as_secs_f64());
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
