//! Exact angular-momentum kernel.
//!
//! Everything here is a pure function of its arguments and generic over the
//! [`Real`](crate::scalar::Real) scalar. Spins above [`MAX_SPIN`] are refused
//! with [`Error::Accuracy`].

mod cg;
mod coherent;
mod factorial;
mod wigner;

pub use cg::{cg_limit_magnet, cg_limit_parallel, clebsch_gordan, CgQuery};
pub use coherent::{coherent_state_amplitudes, Axis};
pub use factorial::{log_binomial, log_factorial, LOG_FACTORIAL_CACHE};
pub use wigner::{wigner_d_column, wigner_small_d, WignerDMatrix, WignerDQuery};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Largest spin any kernel will evaluate.
pub const MAX_SPIN: HalfInt = HalfInt::int(1000);

/// `j >= 0` and `j - m` integral. `|m| > j` is legal here; callers decide.
pub(crate) fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::Domain(format!("negative spin {j}")));
    }
    if (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::Domain(format!("projection {m} incompatible with spin {j}")));
    }
    Ok(())
}

pub(crate) fn check_accuracy(j: HalfInt) -> Result<()> {
    if j > MAX_SPIN {
        return Err(Error::Accuracy(format!("spin {j} exceeds the supported maximum {MAX_SPIN}")));
    }
    Ok(())
}
