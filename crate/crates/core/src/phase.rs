//! Rotation angles.
//!
//! An angle is either an exact rational multiple of π, kept in lowest terms
//! and reduced into `[0, 2)` (in units of π), or a plain radian value that
//! could not be recognised as such a multiple.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Tolerance used when snapping a radian value onto a rational multiple of π.
pub const SNAP_TOLERANCE: f64 = 1e-12;
/// Largest denominator accepted by the snapping procedure.
pub const SNAP_MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    /// Multiple of π in `[0, 2)`.
    Exact(BigRational),
    /// Radians in `[0, 2π)`.
    Numeric(f64),
}

/// A rotation angle, taken modulo 2π.
#[derive(Clone, Debug, PartialEq)]
pub struct Phase(Repr);

impl Phase {
    pub fn zero() -> Self {
        Phase(Repr::Exact(BigRational::zero()))
    }

    /// `numer/denom · π`. Panics if `denom == 0`.
    pub fn frac_pi(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_ratio(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn pi() -> Self {
        Self::frac_pi(1, 1)
    }

    /// Multiple of π given as an arbitrary rational.
    pub fn from_ratio(r: BigRational) -> Self {
        let two = BigInt::from(2);
        let denom = r.denom().clone();
        let modulus = &two * &denom;
        let numer = r.numer().mod_floor(&modulus);
        Phase(Repr::Exact(BigRational::new(numer, denom)))
    }

    /// Angle in radians. Values within [`SNAP_TOLERANCE`] of `p/q · π` with
    /// `q ≤` [`SNAP_MAX_DENOMINATOR`] become exact.
    pub fn radians(x: f64) -> Self {
        if !x.is_finite() {
            return Phase(Repr::Numeric(f64::NAN));
        }
        match snap_to_pi_fraction(x) {
            Some((p, q)) => Self::frac_pi(p, q),
            None => Phase(Repr::Numeric(x.rem_euclid(2.0 * PI))),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.0, Repr::Exact(_))
    }

    /// The exact multiple of π, if this phase is exact.
    pub fn as_ratio(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Exact(r) => Some(r),
            Repr::Numeric(_) => None,
        }
    }

    pub fn to_radians(&self) -> f64 {
        match &self.0 {
            Repr::Exact(r) => ratio_to_f64(r) * PI,
            Repr::Numeric(x) => *x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Exact(r) => r.is_zero(),
            Repr::Numeric(_) => false,
        }
    }

    /// Exact multiple of π (0 or π).
    pub fn is_pauli(&self) -> bool {
        match &self.0 {
            Repr::Exact(r) => r.is_integer(),
            Repr::Numeric(_) => false,
        }
    }

    /// Exact multiple of π/2.
    pub fn is_clifford(&self) -> bool {
        match &self.0 {
            Repr::Exact(r) => (r * BigInt::from(2)).is_integer(),
            Repr::Numeric(_) => false,
        }
    }

    /// Exactly π/2 or 3π/2.
    pub fn is_proper_clifford(&self) -> bool {
        self.is_clifford() && !self.is_pauli()
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> Phase {
        match &self.0 {
            Repr::Exact(r) => Phase::from_ratio(r * BigRational::from_integer(BigInt::from(k))),
            Repr::Numeric(x) => Phase::radians(x * k as f64),
        }
    }

    /// Render as a QASM angle expression. Exact phases use `pi`, numeric ones
    /// use the shortest decimal that round-trips.
    pub fn to_qasm(&self) -> String {
        match &self.0 {
            Repr::Exact(r) => {
                let n = r.numer();
                let d = r.denom();
                if n.is_zero() {
                    "0".to_string()
                } else if d.is_one() {
                    if n.is_one() {
                        "pi".to_string()
                    } else {
                        format!("{n}*pi")
                    }
                } else if n.is_one() {
                    format!("pi/{d}")
                } else {
                    format!("{n}*pi/{d}")
                }
            }
            Repr::Numeric(x) => format!("{x:?}"),
        }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Best rational approximation `p/q` of `x/π` with `q ≤ SNAP_MAX_DENOMINATOR`,
/// accepted only if `|x - pπ/q| ≤ SNAP_TOLERANCE`.
pub fn snap_to_pi_fraction(x: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let target = x / PI;
    if target.abs() > 1e9 {
        return None;
    }
    let sign = if target < 0.0 { -1 } else { 1 };
    let t = target.abs();
    // Convergents h/k of the continued fraction expansion.
    let (mut h_prev, mut h) = (1i128, t.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut frac = t - t.floor();
    loop {
        let approx = h as f64 / k as f64;
        if ((approx - t) * PI).abs() <= SNAP_TOLERANCE {
            return Some((sign * h as i64, k as i64));
        }
        if frac < 1e-18 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > SNAP_MAX_DENOMINATOR as i128 {
            return None;
        }
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
}

impl Add for &Phase {
    type Output = Phase;
    fn add(self, rhs: &Phase) -> Phase {
        match (&self.0, &rhs.0) {
            (Repr::Exact(a), Repr::Exact(b)) => Phase::from_ratio(a + b),
            _ => Phase::radians(self.to_radians() + rhs.to_radians()),
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        &self + &rhs
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        match &self.0 {
            Repr::Exact(a) => Phase::from_ratio(-a),
            Repr::Numeric(x) => Phase::radians(-x),
        }
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        -&self
    }
}

impl Sub for &Phase {
    type Output = Phase;
    fn sub(self, rhs: &Phase) -> Phase {
        self + &(-rhs)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        &self - &rhs
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_qasm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values_are_reduced_mod_two_pi() {
        assert_eq!(Phase::frac_pi(5, 2), Phase::frac_pi(1, 2));
        assert_eq!(Phase::frac_pi(-1, 2), Phase::frac_pi(3, 2));
        assert_eq!(Phase::frac_pi(4, 8), Phase::frac_pi(1, 2));
        assert!(Phase::frac_pi(2, 1).is_zero());
    }

    #[test]
    fn clifford_queries() {
        assert!(Phase::frac_pi(1, 2).is_clifford());
        assert!(Phase::frac_pi(1, 2).is_proper_clifford());
        assert!(Phase::pi().is_pauli());
        assert!(!Phase::frac_pi(1, 4).is_clifford());
        // numeric values never count, even when close
        let almost = Phase(Repr::Numeric(PI / 2.0));
        assert!(!almost.is_clifford());
    }

    #[test]
    fn snapping_recovers_quarter_pi() {
        assert_eq!(Phase::radians(std::f64::consts::FRAC_PI_4), Phase::frac_pi(1, 4));
        assert_eq!(Phase::radians(-PI / 2.0), Phase::frac_pi(3, 2));
        assert!(!Phase::radians(0.5).is_exact());
        assert!(Phase::radians(0.0).is_zero());
    }

    #[test]
    fn arithmetic() {
        let a = Phase::frac_pi(1, 4);
        assert_eq!(&a + &a, Phase::frac_pi(1, 2));
        assert_eq!(&a - &Phase::frac_pi(1, 2), Phase::frac_pi(7, 4));
        assert_eq!(a.scale(-3), Phase::frac_pi(5, 4));
        let n = Phase::radians(0.5);
        assert!((( &n + &a).to_radians() - (0.5 + PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn qasm_rendering() {
        assert_eq!(Phase::frac_pi(1, 2).to_qasm(), "pi/2");
        assert_eq!(Phase::frac_pi(3, 2).to_qasm(), "3*pi/2");
        assert_eq!(Phase::pi().to_qasm(), "pi");
        assert_eq!(Phase::zero().to_qasm(), "0");
        assert_eq!(Phase::radians(0.5).to_qasm(), "0.5");
    }

    proptest::proptest! {
        #[test]
        fn snapping_moves_angle_by_at_most_tolerance(x in -20.0f64..20.0) {
            let p = Phase::radians(x);
            let d = (p.to_radians() - x).rem_euclid(2.0 * PI);
            let d = d.min(2.0 * PI - d);
            proptest::prop_assert!(d <= 1e-12 + 1e-14);
        }
    }
}
