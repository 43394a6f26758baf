//! The textbook description: a spin precessing in a field along `x`, and a
//! projective measurement recorded by an apparatus spin.

use crate::channels::{decompose_su2, rotation_twirl_state};
use crate::composite::{Basis, DensityOperator, ParticleSystem, StateVector};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::toy::GyroscopeMode;
use crate::{CMatrix, CVector, Complex};

fn check_norm(alpha: Complex, beta: Complex) -> Result<()> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(n));
    }
    Ok(())
}

/// `(alpha(t), beta(t))` for a spin precessing at rate `b`.
pub fn orthodox_amplitudes(alpha: Complex, beta: Complex, b: f64, t: f64) -> (Complex, Complex) {
    let (s, c) = (b * t / 2.0).sin_cos();
    let i = Complex::new(0.0, 1.0);
    (alpha * c + i * beta * s, i * alpha * s + beta * c)
}

/// `(|beta(t)|^2 + |beta(-t)|^2) / 2`. A clock read through a rotation invariant
/// cannot tell `t` from `-t`, so this is what relational readings approach for a
/// general initial state. It equals `|beta(t)|^2` when `alpha beta*` is real.
pub fn orthodox_down_symmetric(alpha: Complex, beta: Complex, b: f64, t: f64) -> f64 {
    let fwd = orthodox_amplitudes(alpha, beta, b, t).1.norm_sqr();
    let back = orthodox_amplitudes(alpha, beta, b, -t).1.norm_sqr();
    0.5 * (fwd + back)
}

/// Post-measurement state of system and apparatus: both up with weight `|alpha|^2`,
/// both down with weight `|beta|^2`.
pub fn orthodox_measurement_joint(alpha: Complex, beta: Complex) -> Result<DensityOperator> {
    check_norm(alpha, beta)?;
    let sys = ParticleSystem::new([("S", HalfInt::HALF), ("A", HalfInt::HALF)])?;
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex::new(alpha.norm_sqr(), 0.0);
    m[(3, 3)] = Complex::new(beta.norm_sqr(), 0.0);
    DensityOperator::new(Basis::product(&sys), m)
}

/// `(alpha|up> + beta|down>) ⊗ |G, G>` over particles `S`, `G`.
pub fn system_gyroscope_state(alpha: Complex, beta: Complex, gyro: HalfInt) -> Result<StateVector> {
    check_norm(alpha, beta)?;
    let sys = ParticleSystem::new([("S", HalfInt::HALF), ("G", gyro)])?;
    let mut g = CVector::zeros(gyro.dim());
    g[0] = Complex::new(1.0, 0.0);
    StateVector::product(&sys, &[CVector::from_vec(vec![alpha, beta]), g])
}

/// Probability that system and gyroscope come out parallel.
/// The finite case runs the exact twirl; the closed form is
/// `|alpha|^2 + |beta|^2 / (2G+1)`.
pub fn parallel_probability(alpha: Complex, beta: Complex, mode: GyroscopeMode) -> Result<f64> {
    check_norm(alpha, beta)?;
    match mode {
        GyroscopeMode::Asymptotic => Ok(alpha.norm_sqr()),
        GyroscopeMode::Finite(g) => {
            if g.twice() <= 0 {
                return Err(Error::Domain(format!("gyroscope spin {g} must be positive")));
            }
            let psi = system_gyroscope_state(alpha, beta, g)?;
            let sys = ParticleSystem::new([("S", HalfInt::HALF), ("G", g)])?;
            let ps = rotation_twirl_state(&psi, &decompose_su2(&sys)?)?;
            Ok(ps.probability(g + HalfInt::HALF))
        }
    }
}

/// Closed form of the parallel probability for a finite gyroscope.
pub fn parallel_probability_closed_form(alpha: Complex, beta: Complex, gyro: HalfInt) -> f64 {
    let g = gyro.value();
    alpha.norm_sqr() + beta.norm_sqr() / (2.0 * g + 1.0)
}
