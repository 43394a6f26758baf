//! Log-factorials and log-binomials.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::CompensatedSum;

/// Arguments below this are served from a precomputed table.
pub const LOG_FACTORIAL_CACHE: usize = 16_384;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(LOG_FACTORIAL_CACHE);
        let mut acc = CompensatedSum::<f64>::new();
        out.push(0.0);
        for k in 1..LOG_FACTORIAL_CACHE {
            acc.add((k as f64).ln());
            out.push(acc.value());
        }
        out
    })
}

/// `ln(n!)`.
pub fn log_factorial(n: u64) -> f64 {
    if (n as usize) < LOG_FACTORIAL_CACHE {
        return table()[n as usize];
    }
    // Stirling series; the first omitted term is below 1e-30 here.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `ln C(n, k)`; `-inf` when `k > n`.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    log_factorial(n) - log_factorial(k) - log_factorial(n - k)
}

/// Natural log of a big unsigned integer; `-inf` for zero.
pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}
