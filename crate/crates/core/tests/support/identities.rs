//! Numerical checks of the gate identities used by the compiler. Each
//! check builds both sides in time order and compares unitaries.

use gms_core::circuit::{Circuit, Gate, GmsLayer};
use gms_core::phase::Phase;
use gms_core::sim::{circuit_unitary, equivalent_up_to_phase};
use rand::Rng;

fn same(n: usize, a: Vec<Gate>, b: Vec<Gate>, tol: f64) -> bool {
    let ua = circuit_unitary(&Circuit::with_gates(n, a).unwrap()).unwrap();
    let ub = circuit_unitary(&Circuit::with_gates(n, b).unwrap()).unwrap();
    equivalent_up_to_phase(&ua, &ub, tol)
}

fn zz(a: usize, b: usize, angle: Phase) -> Vec<Gate> {
    vec![Gate::H(a), Gate::H(b), Gate::Xx(a, b, angle), Gate::H(a), Gate::H(b)]
}

fn random_pairs(n: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    loop {
        let p: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.5)).collect();
        if !p.is_empty() {
            return p;
        }
    }
}

fn degree(pairs: &[(usize, usize)], q: usize) -> i64 {
    pairs.iter().filter(|&&(a, b)| a == q || b == q).count() as i64
}

fn quarter() -> Phase {
    Phase::frac_pi(1, 2)
}

/// CZ layer as `RZ(−c_i π/2) GZZ` and as `H RX(−c_i π/2) GMS H`.
pub fn cz_layer(n: usize, rng: &mut impl Rng, tol: f64) -> bool {
    let pairs = random_pairs(n, rng);
    let lhs: Vec<Gate> = pairs.iter().map(|&(a, b)| Gate::cz(a, b)).collect();
    let gms = Gate::Gms(GmsLayer::new(quarter(), pairs.iter().copied()).unwrap());
    let mut gzz_form: Vec<Gate> = (0..n).map(Gate::H).collect();
    gzz_form.push(gms.clone());
    gzz_form.extend((0..n).map(Gate::H));
    gzz_form.extend((0..n).map(|q| Gate::Rz(q, Phase::frac_pi(-degree(&pairs, q), 2))));
    let mut gms_form: Vec<Gate> = (0..n).map(Gate::H).collect();
    gms_form.push(gms);
    gms_form.extend((0..n).map(|q| Gate::Rx(q, Phase::frac_pi(-degree(&pairs, q), 2))));
    gms_form.extend((0..n).map(Gate::H));
    same(n, lhs.clone(), gzz_form, tol) && same(n, lhs, gms_form, tol)
}

/// `CZ = RZ(−π/2) RZ(−π/2) ZZ(π/2)`.
pub fn cz_single(n: usize, rng: &mut impl Rng, tol: f64) -> bool {
    let a = rng.gen_range(0..n);
    let b = (a + rng.gen_range(1..n)) % n;
    let mut rhs = zz(a, b, quarter());
    rhs.extend([Gate::Rz(a, Phase::frac_pi(-1, 2)), Gate::Rz(b, Phase::frac_pi(-1, 2))]);
    same(n, vec![Gate::cz(a, b)], rhs, tol)
}

/// Fanout from one control onto a random target set as one GMS.
pub fn fanout(n: usize, rng: &mut impl Rng, tol: f64) -> bool {
    let c = rng.gen_range(0..n);
    let targets: Vec<usize> = loop {
        let t: Vec<usize> = (0..n).filter(|&t| t != c && rng.gen_bool(0.6)).collect();
        if !t.is_empty() {
            break t;
        }
    };
    let lhs: Vec<Gate> = targets.iter().map(|&t| Gate::cnot(c, t)).collect();
    let mut rhs = vec![Gate::H(c), Gate::Gms(GmsLayer::new(quarter(), targets.iter().map(|&t| (c, t))).unwrap())];
    rhs.extend(targets.iter().map(|&t| Gate::Rx(t, Phase::frac_pi(-1, 2))));
    rhs.push(Gate::Rx(c, Phase::frac_pi(-(targets.len() as i64), 2)));
    rhs.push(Gate::H(c));
    same(n, lhs, rhs, tol)
}

/// Both rotation forms of a CNOT.
pub fn cnot_forms(n: usize, rng: &mut impl Rng, tol: f64) -> bool {
    let c = rng.gen_range(0..n);
    let t = (c + rng.gen_range(1..n)) % n;
    let m = Phase::frac_pi(-1, 2);
    let mut z_form = vec![Gate::H(t)];
    z_form.extend(zz(c, t, quarter()));
    z_form.extend([Gate::Rz(c, m.clone()), Gate::Rz(t, m.clone()), Gate::H(t)]);
    let x_form = vec![Gate::H(c), Gate::Xx(c, t, quarter()), Gate::Rx(c, m.clone()), Gate::Rx(t, m), Gate::H(c)];
    let lhs = vec![Gate::cnot(c, t)];
    same(n, lhs.clone(), z_form, tol) && same(n, lhs, x_form, tol)
}

/// `GZZ_A(α) = H⊗ⁿ GMS_A(α) H⊗ⁿ = ∏ ZZ(α)` for a random angle.
pub fn gzz(n: usize, rng: &mut impl Rng, tol: f64) -> bool {
    let pairs = random_pairs(n, rng);
    let alpha = Phase::radians(rng.gen_range(-3.0..3.0));
    let mut conj: Vec<Gate> = (0..n).map(Gate::H).collect();
    conj.push(Gate::Gms(GmsLayer::new(alpha.clone(), pairs.iter().copied()).unwrap()));
    conj.extend((0..n).map(Gate::H));
    let prod: Vec<Gate> = pairs.iter().flat_map(|&(a, b)| zz(a, b, alpha.clone())).collect();
    same(n, conj, prod, tol)
}

/// Run every identity on `trials` random instances for each `n` in
/// `2..=max_n`; returns the failing identity names.
pub fn run_all(max_n: usize, trials: usize, rng: &mut impl Rng, tol: f64) -> Vec<String> {
    let mut failed = Vec::new();
    for n in 2..=max_n {
        for _ in 0..trials {
            let checks: [(&str, bool); 5] = [
                ("cz-layer", cz_layer(n, rng, tol)),
                ("cz", cz_single(n, rng, tol)),
                ("fanout", fanout(n, rng, tol)),
                ("cnot", cnot_forms(n, rng, tol)),
                ("gzz", gzz(n, rng, tol)),
            ];
            failed.extend(checks.iter().filter(|c| !c.1).map(|c| format!("{} (n={n})", c.0)));
        }
    }
    failed
}
