#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use relspin::composite::{Basis, DensityOperator, ParticleSystem};
use relspin::{CMatrix, CVector, Complex, HalfInt};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn system(twice_spins: &[i64]) -> ParticleSystem {
    let labels = ["A", "B", "C", "D", "E"];
    ParticleSystem::new(twice_spins.iter().zip(labels).map(|(&t, l)| (l, HalfInt::from_twice(t)))).unwrap()
}

pub fn random_vector(rng: &mut StdRng, n: usize) -> CVector {
    let v = CVector::from_fn(n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = v.norm();
    v / Complex::new(norm, 0.0)
}

/// A full-rank random state `G G^† / Tr`.
pub fn random_density(rng: &mut StdRng, basis: &Basis) -> DensityOperator {
    let n = basis.dim();
    let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    let m = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    DensityOperator::new(basis.clone(), m).unwrap()
}

pub fn random_hermitian(rng: &mut StdRng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    (&g + g.adjoint()) * Complex::new(0.5, 0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// `exp(K) / Tr` for Hermitian `K`.
pub fn gibbs(basis: &Basis, k: &CMatrix) -> DensityOperator {
    let eig = nalgebra::SymmetricEigen::new(k.clone());
    let top = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex::new((x - top).exp(), 0.0)));
    let mut m = &eig.eigenvectors * d * eig.eigenvectors.adjoint();
    let tr = m.trace();
    m /= tr;
    let m = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
    DensityOperator::new(basis.clone(), m).unwrap()
}
