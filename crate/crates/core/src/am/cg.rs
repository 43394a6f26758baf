//! Clebsch–Gordan coefficients in the Condon–Shortley convention.
//!
//! The Racah sum is evaluated in the log-factorial domain. Its terms alternate
//! in sign; when they cancel by more than three decades the sum is redone in
//! exact rational arithmetic, using the ratio between consecutive terms so no
//! big factorials are ever formed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::factorial::{ln_biguint, log_factorial};
use super::{check_accuracy, check_pair};
use crate::error::Result;
use crate::halfint::HalfInt;
use crate::scalar::{CompensatedSum, Real};

/// `<j1 m1; j2 m2 | j m>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CgQuery {
    pub j1: HalfInt,
    pub m1: HalfInt,
    pub j2: HalfInt,
    pub m2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CgQuery {
    pub fn new(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Self {
        CgQuery { j1, m1, j2, m2, j, m }
    }
}

/// Cancellation ratio (sum of |terms| over |sum|) above which the exact path runs.
const CANCELLATION_LIMIT: f64 = 1e3;

pub fn clebsch_gordan<T: Real>(q: &CgQuery) -> Result<T> {
    check_pair(q.j1, q.m1)?;
    check_pair(q.j2, q.m2)?;
    check_pair(q.j, q.m)?;
    check_accuracy(q.j1.max(q.j2).max(q.j))?;

    if q.m != q.m1 + q.m2
        || !HalfInt::triangle(q.j1, q.j2, q.j)
        || q.m1.abs() > q.j1
        || q.m2.abs() > q.j2
        || q.m.abs() > q.j
    {
        return Ok(T::zero());
    }

    let t = |h: HalfInt| h.twice();
    // All of these are non-negative integers once the selection rules hold.
    let half = |x: i64| -> i64 {
        debug_assert!(x % 2 == 0);
        x / 2
    };
    let a = half(t(q.j1) + t(q.j2) - t(q.j));
    let b = half(t(q.j1) - t(q.j2) + t(q.j));
    let c = half(-t(q.j1) + t(q.j2) + t(q.j));
    let d = half(t(q.j1) + t(q.j2) + t(q.j)) + 1;
    let e1 = half(t(q.j1) + t(q.m1));
    let f1 = half(t(q.j1) - t(q.m1));
    let e2 = half(t(q.j2) + t(q.m2));
    let f2 = half(t(q.j2) - t(q.m2));
    let e3 = half(t(q.j) + t(q.m));
    let f3 = half(t(q.j) - t(q.m));
    let g1 = half(t(q.j) - t(q.j2) + t(q.m1));
    let g2 = half(t(q.j) - t(q.j1) - t(q.m2));

    let lf = |n: i64| log_factorial(n as u64);
    let ln_prefactor = ((t(q.j) + 1) as f64).ln() + lf(a) + lf(b) + lf(c) - lf(d)
        + lf(e1)
        + lf(f1)
        + lf(e2)
        + lf(f2)
        + lf(e3)
        + lf(f3);

    let k_min = 0.max(-g1).max(-g2);
    let k_max = a.min(f1).min(e2);
    if k_min > k_max {
        return Ok(T::zero());
    }
    let ln_term = |k: i64| -(lf(k) + lf(a - k) + lf(f1 - k) + lf(e2 - k) + lf(g1 + k) + lf(g2 + k));

    let ln_max = (k_min..=k_max).map(ln_term).fold(f64::NEG_INFINITY, f64::max);
    let mut signed = CompensatedSum::<T>::new();
    let mut magnitude = CompensatedSum::<T>::new();
    for k in k_min..=k_max {
        let w = T::from_f64_lossy((ln_term(k) - ln_max).exp());
        magnitude.add(w);
        signed.add(if k % 2 == 0 { w } else { -w });
    }
    let s = signed.value();
    let cancels = s == T::zero() || (magnitude.value() / s.abs()).to_f64_lossy() > CANCELLATION_LIMIT;
    if !cancels {
        let half_pref = T::from_f64_lossy(0.5 * ln_prefactor + ln_max);
        return Ok(s.signum() * (half_pref + s.abs().ln()).exp());
    }

    // Exact path: sum of term ratios relative to the k_min term.
    let mut ratio = BigRational::from_integer(BigInt::from(1));
    let mut total = ratio.clone();
    for k in k_min..k_max {
        let num = BigInt::from((a - k) * (f1 - k)) * BigInt::from(e2 - k);
        let den = BigInt::from((k + 1) * (g1 + k + 1)) * BigInt::from(g2 + k + 1);
        ratio = -ratio * BigRational::new(num, den);
        total += &ratio;
    }
    if total.is_zero() {
        return Ok(T::zero());
    }
    let sign_total = if total.is_negative() { -1.0 } else { 1.0 };
    let sign_kmin = if k_min % 2 == 0 { 1.0 } else { -1.0 };
    let ln_abs_total = ln_bigint(total.numer()) - ln_bigint(total.denom());
    let value = sign_total * sign_kmin * (0.5 * ln_prefactor + ln_term(k_min) + ln_abs_total).exp();
    Ok(T::from_f64_lossy(value))
}

fn ln_bigint(x: &BigInt) -> f64 {
    ln_biguint(x.magnitude())
}

/// `|<S s; G G | G+s, G+s>|^2`: a spin `S` in state `s` against a stretched gyroscope.
/// Tends to one as `G` grows.
pub fn cg_limit_parallel<T: Real>(spin: HalfInt, s: HalfInt, gyro: HalfInt) -> Result<T> {
    if gyro < spin {
        return Err(crate::Error::Domain(format!("gyroscope spin {gyro} smaller than system spin {spin}")));
    }
    let c: T = clebsch_gordan(&CgQuery::new(spin, s, gyro, gyro, gyro + s, gyro + s))?;
    Ok(c * c)
}

/// `|<S s+delta; M M-delta | M+s, M+s>|^2`: one for `delta = 0` and zero otherwise as `M` grows.
pub fn cg_limit_magnet<T: Real>(spin: HalfInt, s: HalfInt, delta: HalfInt, magnet: HalfInt) -> Result<T> {
    let c: T = clebsch_gordan(&CgQuery::new(spin, s + delta, magnet, magnet - delta, magnet + s, magnet + s))?;
    Ok(c * c)
}
