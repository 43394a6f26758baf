//! Wigner small-d matrices `d^j_{m m'}(beta) = <j m| exp(-i beta J_y) |j m'>`.
//!
//! Columns are built with the three-term recursion in `m` that follows from
//! `D J_z D^† = J_z cos(beta) - J_x sin(beta)`:
//!
//! ```text
//! m' d_m = m cos(b) d_m + sin(b)/2 [ sqrt((j+m)(j-m+1)) d_{m-1} + sqrt((j-m)(j+m+1)) d_{m+1} ]
//! ```
//!
//! The recursion is run inward from both stretched ends. Each sweep stays in its
//! growing (stable) direction; the upward sweep stops at its first peak, where
//! the downward sweep is still oscillatory and accurate, and the two are joined
//! there. The column is then normalized to unit length with the sign of the
//! stretched entry, which is `(-1)^(j-m')` for `0 < beta < pi`.

use serde::Serialize;

use super::{check_accuracy, check_pair};
use crate::error::Result;
use crate::halfint::HalfInt;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WignerDQuery {
    pub j: HalfInt,
    pub m: HalfInt,
    pub mprime: HalfInt,
    /// Rotation angle in radians.
    pub beta: f64,
}

/// `d^j_{m m'}(beta)`.
pub fn wigner_small_d<T: Real>(q: &WignerDQuery) -> Result<T> {
    check_pair(q.j, q.m)?;
    check_pair(q.j, q.mprime)?;
    if q.m.abs() > q.j || q.mprime.abs() > q.j {
        return Err(crate::Error::Domain(format!("|m| exceeds j = {}", q.j)));
    }
    let col = wigner_d_column::<T>(q.j, q.mprime, T::from_f64_lossy(q.beta))?;
    Ok(col[q.j.index_of(q.m).expect("validated")])
}

/// Column `m'` of `d^j(beta)`, indexed by `k` with `m = j - k`.
pub fn wigner_d_column<T: Real>(j: HalfInt, mprime: HalfInt, beta: T) -> Result<Vec<T>> {
    check_pair(j, mprime)?;
    check_accuracy(j)?;
    if mprime.abs() > j {
        return Err(crate::Error::Domain(format!("|m'| = {} exceeds j = {j}", mprime.abs())));
    }
    let n = j.dim();

    // Reduce beta to (-pi, pi]; d(beta + 2 pi) = (-1)^(2j) d(beta).
    let two_pi = T::PI() + T::PI();
    let turns = (beta / two_pi).round();
    let mut b = beta - turns * two_pi;
    let mut wrap_sign =
        if j.is_integer() || turns.to_f64_lossy().rem_euclid(2.0) == 0.0 { T::one() } else { -T::one() };
    if b <= -T::PI() {
        b += two_pi;
        if !j.is_integer() {
            wrap_sign = -wrap_sign;
        }
    }
    // d(-b)_{m m'} = (-1)^(m-m') d(b)_{m m'}.
    let negative = b < T::zero();
    let b = b.abs();

    let mut col = column_nonnegative(j, mprime, b);
    for (k, m) in j.projections().enumerate() {
        let mut v = col[k] * wrap_sign;
        if negative && ((m - mprime).twice() / 2) % 2 != 0 {
            v = -v;
        }
        col[k] = v;
    }
    debug_assert_eq!(col.len(), n);
    Ok(col)
}

/// Column for `0 <= b <= pi`.
fn column_nonnegative<T: Real>(j: HalfInt, mprime: HalfInt, b: T) -> Vec<T> {
    let n = j.dim();
    let jt = j.twice();
    let kp = j.index_of(mprime).expect("validated");
    let sin_b = b.sin();
    let cos_b = b.cos();

    let tiny = T::from_f64_lossy(1e-15);
    if sin_b.abs() < tiny {
        let mut col = vec![T::zero(); n];
        if cos_b > T::zero() {
            col[kp] = T::one();
        } else {
            // d(pi)_{m m'} = (-1)^(j-m') delta_{m,-m'}
            let k = j.index_of(-mprime).expect("mirror projection");
            col[k] = if ((jt - mprime.twice()) / 2) % 2 == 0 { T::one() } else { -T::one() };
        }
        return col;
    }
    if n == 1 {
        return vec![T::one()];
    }

    let half = T::from_f64_lossy(0.5);
    let two = T::one() + T::one();
    let mp = T::from_f64_lossy(mprime.value());
    let jv = T::from_f64_lossy(j.value());
    // Ladder factor sqrt((j - m)(j + m + 1)) = <m+1|J_+|m>.
    let ladder = |m: T| ((jv - m) * (jv + m + T::one())).max(T::zero()).sqrt();
    let big = T::max_value().sqrt().sqrt();

    let m_of = |k: usize| jv - T::from_usize(k).expect("index");

    // Upward sweep from m = -j (index n-1) toward larger m, halted at the first peak.
    let mut up = vec![T::zero(); n];
    up[n - 1] = T::one();
    let mut prev = T::zero();
    let mut k_star = 0usize;
    let mut k = n - 1;
    while k > 0 {
        let m = m_of(k);
        let next = ((mp - m * cos_b) * up[k] - half * sin_b * ladder(-m) * prev) * two / (sin_b * ladder(m));
        if next.abs() < up[k].abs() {
            k_star = k;
            break;
        }
        prev = up[k];
        up[k - 1] = next;
        k -= 1;
        if next.abs() > big {
            let s = T::one() / next.abs();
            for v in &mut up[k..] {
                *v *= s;
            }
            prev *= s;
        }
    }

    // Downward sweep from m = j (index 0) to the junction.
    let mut down = vec![T::zero(); k_star + 1];
    down[0] = T::one();
    let mut prev = T::zero();
    for k in 0..k_star {
        let m = m_of(k);
        let next = ((mp - m * cos_b) * down[k] - half * sin_b * ladder(m) * prev) * two / (sin_b * ladder(-m));
        prev = down[k];
        down[k + 1] = next;
        if next.abs() > big {
            let s = T::one() / next.abs();
            for v in &mut down[..=k + 1] {
                *v *= s;
            }
            prev *= s;
        }
    }

    let mut col = up;
    let scale = down[k_star] / col[k_star];
    for v in &mut col[k_star..] {
        *v *= scale;
    }
    col[..=k_star].copy_from_slice(&down);

    let norm = col.iter().map(|&v| v * v).sum::<T>().sqrt();
    let sign = if ((jt - mprime.twice()) / 2) % 2 == 0 { T::one() } else { -T::one() };
    for v in &mut col {
        *v = *v * sign / norm;
    }
    col
}

/// Dense `d^j(beta)` with rows `m` and columns `m'`, both in descending order.
#[derive(Clone, Debug, Serialize)]
pub struct WignerDMatrix<T> {
    j: HalfInt,
    beta: T,
    data: Vec<T>,
}

impl<T: Real> WignerDMatrix<T> {
    pub fn new(j: HalfInt, beta: T) -> Result<Self> {
        check_accuracy(j)?;
        if j.twice() < 0 {
            return Err(crate::Error::Domain(format!("negative spin {j}")));
        }
        let n = j.dim();
        let mut data = vec![T::zero(); n * n];
        for (kp, mp) in j.projections().enumerate() {
            let col = wigner_d_column(j, mp, beta)?;
            for (k, v) in col.into_iter().enumerate() {
                data[k * n + kp] = v;
            }
        }
        Ok(WignerDMatrix { j, beta, data })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// Entry by row/column index (`m = j - row`).
    pub fn at(&self, row: usize, col: usize) -> T {
        self.data[row * self.dim() + col]
    }

    /// Entry by projections; zero when either lies outside the multiplet.
    pub fn get(&self, m: HalfInt, mprime: HalfInt) -> T {
        match (self.j.index_of(m), self.j.index_of(mprime)) {
            (Some(r), Some(c)) => self.at(r, c),
            _ => T::zero(),
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Largest entry of `|D D^T - 1|`.
    pub fn orthogonality_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for a in 0..n {
            for b in 0..n {
                let dot: T = (0..n).map(|k| self.at(a, k) * self.at(b, k)).sum();
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}
