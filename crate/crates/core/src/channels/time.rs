//! Time averaging: dephasing between distinct energies.

use crate::composite::{hermitian_eigen, settle, DensityOperator};
use crate::error::{Error, Result};
use crate::{CMatrix, Complex};

/// Relative tolerance for treating two eigenvalues as equal.
pub const ENERGY_TOL: f64 = 1e-9;
/// How close `gap * T / 2pi` must be to an integer in strict-period mode.
pub const COMMENSURABILITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeAverage {
    /// Zero every coherence between distinct energies (the long-time limit).
    FullDephasing,
    /// Average over one period `T`; every gap must be a nonzero multiple of `2pi/T`.
    Period(f64),
}

/// Cluster ids for `energies`, equal ids meaning degenerate levels.
pub fn energy_clusters(energies: &[f64]) -> Vec<usize> {
    let scale = energies.iter().fold(1.0f64, |a, e| a.max(e.abs()));
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut ids = vec![0; energies.len()];
    let mut id = 0;
    for w in 0..order.len() {
        if w > 0 && energies[order[w]] - energies[order[w - 1]] > ENERGY_TOL * scale {
            id += 1;
        }
        ids[order[w]] = id;
    }
    ids
}

fn check_period(energies: &[f64], ids: &[usize], period: f64) -> Result<()> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::Domain(format!("period {period} must be positive")));
    }
    let mut reps: Vec<(usize, f64)> = ids.iter().copied().zip(energies.iter().copied()).collect();
    reps.sort_by_key(|r| r.0);
    reps.dedup_by_key(|r| r.0);
    for (i, &(_, ea)) in reps.iter().enumerate() {
        for &(_, eb) in &reps[i + 1..] {
            let x = (eb - ea) * period / std::f64::consts::TAU;
            if (x - x.round()).abs() > COMMENSURABILITY_TOL * x.abs().max(1.0) {
                return Err(Error::Incommensurate { period, detail: format!("gap {} gives {x} periods", eb - ea) });
            }
        }
    }
    Ok(())
}

fn dephase(m: &CMatrix, ids: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |a, b| if ids[a] == ids[b] { m[(a, b)] } else { Complex::new(0.0, 0.0) })
}

/// Time average of `rho` under the Hermitian `h`.
pub fn time_average(rho: &DensityOperator, h: &CMatrix, mode: TimeAverage) -> Result<DensityOperator> {
    let n = rho.dim();
    if h.nrows() != n || h.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.nrows() });
    }
    let scale = h.iter().fold(1.0f64, |a, z| a.max(z.norm()));
    let defect = (h - h.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if defect > 1e-10 * scale {
        return Err(Error::Domain(format!("Hamiltonian not Hermitian (defect {defect:e})")));
    }
    let (energies, v) = hermitian_eigen(h);
    let ids = energy_clusters(&energies);
    if let TimeAverage::Period(t) = mode {
        check_period(&energies, &ids, t)?;
    }
    let inner = v.adjoint() * rho.matrix() * &v;
    settle(rho.basis().clone(), &v * dephase(&inner, &ids) * v.adjoint())
}

/// Time average for a state already expressed in an eigenbasis, with `energies[i]`
/// the energy of basis vector `i`.
pub fn time_average_diagonal(rho: &DensityOperator, energies: &[f64], mode: TimeAverage) -> Result<DensityOperator> {
    if energies.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), got: energies.len() });
    }
    let ids = energy_clusters(energies);
    if let TimeAverage::Period(t) = mode {
        check_period(energies, &ids, t)?;
    }
    settle(rho.basis().clone(), dephase(rho.matrix(), &ids))
}
