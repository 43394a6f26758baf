//! A spin-1/2 coupled to a finite magnet through `H = -2 lambda S · J_M`.

use crate::am::{coherent_state_amplitudes, wigner_d_column, Axis};
use crate::composite::{couple_pair, Basis, DensityOperator, ParticleSystem, StateVector};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::{CVector, Complex};

/// Gap `B = lambda (2M+1)` between the two total-spin levels.
pub fn magnet_gap(magnet: HalfInt, lambda: f64) -> f64 {
    lambda * (2.0 * magnet.value() + 1.0)
}

/// Energy of total spin `j` for `H = -2 lambda J_a · J_b`.
pub(crate) fn heisenberg_energy(lambda: f64, j: HalfInt, a: HalfInt, b: HalfInt) -> f64 {
    -lambda * (j.casimir() - a.casimir() - b.casimir())
}

fn magnet_system(magnet: HalfInt) -> Result<ParticleSystem> {
    if magnet.twice() <= 0 {
        return Err(Error::Domain(format!("magnet spin {magnet} must be positive")));
    }
    ParticleSystem::new([("S", HalfInt::HALF), ("M", magnet)])
}

fn real_vec(v: Vec<f64>) -> CVector {
    CVector::from_iterator(v.len(), v.into_iter().map(|x| Complex::new(x, 0.0)))
}

/// Exact `|Psi(t)>` over `S ⊗ M`, starting from `(alpha, beta) ⊗ |M, M>_x`.
pub fn magnet_dynamics_state(s_amplitudes: [Complex; 2], magnet: HalfInt, lambda: f64, t: f64) -> Result<StateVector> {
    let sys = magnet_system(magnet)?;
    let m0 = real_vec(coherent_state_amplitudes(magnet, Axis::X)?);
    let psi0 = StateVector::product(&sys, &[CVector::from_vec(s_amplitudes.to_vec()), m0])?;
    let map = couple_pair(&sys, "S", "M")?;
    let mut coupled = map.apply(psi0.amplitudes())?;
    let f = &map.target().factors()[0];
    for (i, mult) in f.multiplets().iter().enumerate() {
        let e = heisenberg_energy(lambda, mult.j, HalfInt::HALF, magnet);
        let phase = Complex::from_polar(1.0, -e * t);
        for k in 0..mult.j.dim() {
            coupled[f.offset(i) + k] *= phase;
        }
    }
    StateVector::new(psi0.basis().clone(), map.apply_inverse(&coupled)?)
}

pub fn magnet_dynamics_exact(
    s_amplitudes: [Complex; 2],
    magnet: HalfInt,
    lambda: f64,
    t: f64,
) -> Result<DensityOperator> {
    Ok(magnet_dynamics_state(s_amplitudes, magnet, lambda, t)?.to_density())
}

/// `|M, m'>_x` in the `J_z` basis.
pub fn x_basis_state(spin: HalfInt, mprime: HalfInt) -> Result<CVector> {
    Ok(real_vec(wigner_d_column(spin, mprime, std::f64::consts::FRAC_PI_2)?))
}

/// The correction amplitude `C(t) = <M, M-1|_x <+|_x Psi(t)>`, with the system
/// read along the field axis like the magnet.
pub fn correction_amplitude(psi: &StateVector) -> Result<Complex> {
    let f = psi.basis().factors();
    if f.len() != 2 || f[0].name() != "S" || f[1].name() != "M" {
        return Err(Error::SpaceMismatch("expected a product state over S and M".into()));
    }
    let magnet = f[1].multiplets()[0].j;
    let x = x_basis_state(magnet, magnet - HalfInt::ONE)?;
    let n = magnet.dim();
    let a = psi.amplitudes();
    let s: Complex = (0..n).map(|k| x[k].conj() * (a[k] + a[n + k])).sum();
    Ok(s * std::f64::consts::FRAC_1_SQRT_2)
}

/// The leading-order value `i sqrt(M) 2 (alpha - beta) sin(Bt/2) / (2M+1)`.
pub fn correction_amplitude_closed_form(
    alpha: Complex,
    beta: Complex,
    magnet: HalfInt,
    lambda: f64,
    t: f64,
) -> Complex {
    let m = magnet.value();
    let b = magnet_gap(magnet, lambda);
    Complex::new(0.0, 1.0) * (alpha - beta) * (2.0 * m.sqrt() * (b * t / 2.0).sin() / (2.0 * m + 1.0))
}

/// The state
/// `|M,M>_x ⊗ psi(t) + C(t) [ |M,M>_x ⊗ |->_x / sqrt(2M) + |M,M-1>_x ⊗ |+>_x ]`,
/// normalized, with `psi(t)` the textbook precession at `B = lambda (2M+1)`.
///
/// Here `|M,M-1>_x` is minus the rotated column [`x_basis_state`] returns. With
/// that phase the expression is exact, not just leading order.
pub fn magnet_dynamics_closed_form(
    s_amplitudes: [Complex; 2],
    magnet: HalfInt,
    lambda: f64,
    t: f64,
) -> Result<StateVector> {
    let sys = magnet_system(magnet)?;
    let [alpha, beta] = s_amplitudes;
    let b = magnet_gap(magnet, lambda);
    let (at, bt) = crate::toy::orthodox_amplitudes(alpha, beta, b, t);
    let c = correction_amplitude_closed_form(alpha, beta, magnet, lambda, t);
    let x0 = x_basis_state(magnet, magnet)?;
    let x1 = -x_basis_state(magnet, magnet - HalfInt::ONE)?;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let n = magnet.dim();
    let k = 1.0 / (2.0 * magnet.value()).sqrt();
    let mut v = CVector::zeros(2 * n);
    for i in 0..n {
        // |+>_x = (up + down)/sqrt 2, |->_x = (up - down)/sqrt 2.
        v[i] = x0[i] * at + c * r * (x0[i] * k + x1[i]);
        v[n + i] = x0[i] * bt + c * r * (x1[i] - x0[i] * k);
    }
    let norm = v.norm();
    StateVector::new(Basis::product(&sys), v / Complex::new(norm, 0.0))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::partial_trace;
    use crate::toy::orthodox_amplitudes;

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    #[test]
    fn starts_as_product() {
        let m = HalfInt::int(3);
        let psi = magnet_dynamics_state([c(0.6), c(0.8)], m, 0.7, 0.0).unwrap();
        let x0 = x_basis_state(m, m).unwrap();
        for k in 0..m.dim() {
            assert!((psi.amplitudes()[k] - x0[k] * 0.6).norm() < 1e-13);
            assert!((psi.amplitudes()[m.dim() + k] - x0[k] * 0.8).norm() < 1e-13);
        }
    }

    #[test]
    fn correction_amplitude_matches_leading_order() {
        let (a, b) = (c(1.0), c(0.0));
        for mm in [5, 50] {
            let m = HalfInt::int(mm);
            let t = std::f64::consts::PI / magnet_gap(m, 1.0);
            let psi = magnet_dynamics_state([a, b], m, 1.0, t).unwrap();
            let got = correction_amplitude(&psi).unwrap().norm();
            let want = correction_amplitude_closed_form(a, b, m, 1.0, t).norm();
            assert!((got - want).abs() < 2.0 / mm as f64 * want, "M={mm}: {got} vs {want}");
        }
    }

    #[test]
    fn reduced_system_follows_precession() {
        let m = HalfInt::int(200);
        let lambda = 1.0;
        let t = 0.9 * std::f64::consts::PI / magnet_gap(m, lambda);
        let (a, b) = (c(0.8), Complex::new(0.0, 0.6));
        let rho = magnet_dynamics_exact([a, b], m, lambda, t).unwrap();
        let red = partial_trace(&rho, &["M"]).unwrap();
        let (at, bt) = orthodox_amplitudes(a, b, magnet_gap(m, lambda), t);
        let s = ParticleSystem::new([("S", HalfInt::HALF)]).unwrap();
        let want = crate::composite::pure_state(&s, CVector::from_vec(vec![at, bt])).unwrap();
        assert!(red.trace_distance(&want).unwrap() < 0.05);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 20.0, 200.0].iter().map(|&x: &f64| (x, 3.0 * x.powf(-0.5))).collect();
        assert!((log_log_slope(&pts) + 0.5).abs() < 1e-12);
    }
}
