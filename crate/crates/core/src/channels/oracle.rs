//! Direct quadrature of the Haar average over Euler angles. Independent of the
//! Schur route and of the Wigner-d code; used only as a cross-check.

use crate::composite::operators::total_spin;
use crate::composite::{hermitian_eigen, settle, DensityOperator};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;
use crate::{CMatrix, Complex};

/// Average of `R rho R^dagger` over `R = e^{-i phi Jz} e^{-i theta Jy} e^{-i psi Jz}`
/// with `resolution` nodes per angle: trapezoid in `phi`, `psi`, Gauss–Legendre in `cos theta`.
pub fn rotation_twirl_oracle(rho: &DensityOperator, resolution: usize) -> Result<DensityOperator> {
    if resolution < 8 {
        return Err(Error::Domain(format!("quadrature resolution {resolution} below 8")));
    }
    let basis = rho.basis();
    let names: Vec<&str> = basis.factors().iter().map(|f| f.name()).collect();
    let [_, jy, jz] = total_spin(basis, &names)?;
    let m: Vec<f64> = jz.diagonal().iter().map(|z| z.re).collect();
    let (jy_values, v) = hermitian_eigen(&jy);
    let vd = v.adjoint();

    let azimuthal = |x: &CMatrix| -> CMatrix {
        let n = resolution as f64;
        CMatrix::from_fn(x.nrows(), x.ncols(), |a, b| {
            let delta = m[a] - m[b];
            let f: Complex =
                (0..resolution).map(|k| Complex::from_polar(1.0, -delta * std::f64::consts::TAU * k as f64 / n)).sum();
            x[(a, b)] * f / n
        })
    };

    let inner = azimuthal(rho.matrix());
    // Conjugate once into the Jy eigenbasis; each node is then a diagonal phase.
    let rotated = &vd * &inner * &v;
    let rule = gauss_legendre(resolution);
    let mut acc = CMatrix::zeros(rotated.nrows(), rotated.ncols());
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let theta = x.clamp(-1.0, 1.0).acos();
        let ph: Vec<Complex> = jy_values.iter().map(|&d| Complex::from_polar(1.0, -theta * d)).collect();
        let half_w = Complex::new(0.5 * w, 0.0);
        for a in 0..acc.nrows() {
            for b in 0..acc.ncols() {
                acc[(a, b)] += rotated[(a, b)] * ph[a] * ph[b].conj() * half_w;
            }
        }
    }
    let back = &v * acc * &vd;
    settle(basis.clone(), azimuthal(&back))
}
