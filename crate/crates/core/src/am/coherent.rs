//! Spin coherent states in the `J_z` basis.

use serde::{Deserialize, Serialize};

use super::check_accuracy;
use super::factorial::log_binomial;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Z,
}

/// Amplitudes of `|J, J>` along `axis`, indexed by `k` with `m = J - k`.
///
/// Along `x` this is `2^-J sqrt(C(2J, J+m))`, evaluated as
/// `exp(ln C / 2 - J ln 2)` so nothing overflows or underflows for large `J`.
pub fn coherent_state_amplitudes<T: Real>(spin: HalfInt, axis: Axis) -> Result<Vec<T>> {
    if spin.twice() < 0 {
        return Err(Error::Domain(format!("negative spin {spin}")));
    }
    check_accuracy(spin)?;
    let n = spin.dim();
    match axis {
        Axis::Z => {
            let mut v = vec![T::zero(); n];
            v[0] = T::one();
            Ok(v)
        }
        Axis::X => {
            let two_j = spin.twice() as u64;
            let shift = spin.value() * std::f64::consts::LN_2;
            Ok((0..n as u64).map(|k| T::from_f64_lossy((0.5 * log_binomial(two_j, two_j - k) - shift).exp())).collect())
        }
    }
}
