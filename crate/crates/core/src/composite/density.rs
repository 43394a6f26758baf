//! Density operators and pure states over labeled bases.

use nalgebra::SymmetricEigen;

use super::basis::Basis;
use super::system::ParticleSystem;
use crate::error::{Error, Result};
use crate::{CMatrix, CVector, Complex};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;
/// Drift tolerated before re-symmetrization is considered a failure.
pub const DRIFT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct DensityOperator {
    basis: Basis,
    matrix: CMatrix,
}

fn hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_square(basis: &Basis, m: &CMatrix) -> Result<()> {
    if m.nrows() != basis.dim() || m.ncols() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: m.nrows().max(m.ncols()) });
    }
    Ok(())
}

/// Eigenvalues and eigenvectors (as columns) of a Hermitian matrix.
///
/// nalgebra's QR iteration returns NaN on some block-structured inputs. When that
/// happens the matrix is conjugated by a fixed dense Householder reflection,
/// which leaves the spectrum alone but removes the exact zeros, and retried.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    if eig.eigenvalues.iter().all(|x| x.is_finite())
        && eig.eigenvectors.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    {
        return (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors);
    }
    let n = m.nrows();
    let v = CVector::from_fn(n, |k, _| Complex::new(1.0 / (k as f64 + 1.0).sqrt(), 0.1 * k as f64));
    let h = CMatrix::identity(n, n) - (&v * v.adjoint()) * Complex::new(2.0 / v.norm_squared(), 0.0);
    let mut r = &h * m * &h;
    r = (&r + r.adjoint()) * Complex::new(0.5, 0.0);
    let eig = SymmetricEigen::new(r);
    (eig.eigenvalues.iter().copied().collect(), h * eig.eigenvectors)
}

pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Re-symmetrize and renormalize after a map; drift above [`DRIFT_TOL`] is an error.
pub(crate) fn settle(basis: Basis, matrix: CMatrix) -> Result<DensityOperator> {
    check_square(&basis, &matrix)?;
    let drift = hermitian_defect(&matrix).max((matrix.trace() - Complex::new(1.0, 0.0)).norm());
    if drift.is_nan() || drift > DRIFT_TOL {
        return Err(Error::Drift(drift));
    }
    let mut m = (&matrix + matrix.adjoint()) * Complex::new(0.5, 0.0);
    let tr = m.trace().re;
    m /= Complex::new(tr, 0.0);
    Ok(DensityOperator { basis, matrix: m })
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(basis: Basis, matrix: CMatrix) -> Result<Self> {
        check_square(&basis, &matrix)?;
        let h = hermitian_defect(&matrix);
        if h > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (defect {h:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from one")));
        }
        let rho = DensityOperator { basis, matrix };
        let low = rho.min_eigenvalue();
        if low < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {low:e}")));
        }
        Ok(rho)
    }

    /// Normalized projector onto `psi`.
    pub fn pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        DensityOperator { basis: psi.basis().clone(), matrix: a * a.adjoint() }
    }

    /// `1/d` on the whole space.
    pub fn maximally_mixed(basis: Basis) -> Self {
        let n = basis.dim();
        DensityOperator { basis, matrix: CMatrix::identity(n, n) / Complex::new(n as f64, 0.0) }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Diagonal entries, real by Hermiticity.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = hermitian_eigenvalues(&self.matrix);
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        self.same_space(other)?;
        Ok((&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `½ ||rho - sigma||_1`.
    pub fn trace_distance(&self, other: &DensityOperator) -> Result<f64> {
        self.same_space(other)?;
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>())
    }

    fn same_space(&self, other: &DensityOperator) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::SpaceMismatch("density operators over different bases".into()));
        }
        Ok(())
    }

    /// Same matrix over a different basis descriptor of equal dimension.
    pub fn relabel(self, basis: Basis) -> Result<Self> {
        check_square(&basis, &self.matrix)?;
        Ok(DensityOperator { basis, matrix: self.matrix })
    }
}

#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Basis,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(basis: Basis, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch { expected: basis.dim(), got: amplitudes.len() });
        }
        let n2 = amplitudes.norm_squared();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(StateVector { basis, amplitudes })
    }

    /// Tensor product of one amplitude vector per particle, in system order.
    pub fn product(sys: &ParticleSystem, parts: &[CVector]) -> Result<Self> {
        if parts.len() != sys.particles().len() {
            return Err(Error::DimensionMismatch { expected: sys.particles().len(), got: parts.len() });
        }
        let mut v = CVector::from_element(1, Complex::new(1.0, 0.0));
        for (p, part) in sys.particles().iter().zip(parts) {
            if part.len() != p.spin.dim() {
                return Err(Error::DimensionMismatch { expected: p.spin.dim(), got: part.len() });
            }
            v = v.kronecker(part);
        }
        StateVector::new(Basis::product(sys), v)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::pure(self)
    }

    /// Reduced density operator after tracing out `labels`, without forming the full projector.
    pub fn reduced(&self, labels: &[&str]) -> Result<DensityOperator> {
        let (kept, m) = partial_trace_vector(&self.basis, &self.amplitudes, labels)?;
        settle(kept, m)
    }
}

/// `Tr_labels |v><v|` for an arbitrary (possibly unnormalized) vector.
pub fn partial_trace_vector(basis: &Basis, v: &CVector, labels: &[&str]) -> Result<(Basis, CMatrix)> {
    if v.len() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), got: v.len() });
    }
    let plan = TracePlan::new(basis, labels)?;
    let mut m = CMatrix::zeros(plan.kept.dim(), plan.kept.dim());
    for group in &plan.groups {
        for &(a, i) in group {
            let x = v[a];
            if x == Complex::new(0.0, 0.0) {
                continue;
            }
            for &(b, j) in group {
                m[(i, j)] += x * v[b].conj();
            }
        }
    }
    Ok((plan.kept, m))
}

/// `|psi><psi|` over the product basis of `sys`.
pub fn pure_state(sys: &ParticleSystem, amplitudes: CVector) -> Result<DensityOperator> {
    Ok(StateVector::new(Basis::product(sys), amplitudes)?.to_density())
}

/// Index bookkeeping for a partial trace: full indices grouped by the removed configuration.
struct TracePlan {
    kept: Basis,
    groups: Vec<Vec<(usize, usize)>>,
}

impl TracePlan {
    fn new(basis: &Basis, labels: &[&str]) -> Result<Self> {
        let mut removed = vec![false; basis.factors().len()];
        for &l in labels {
            match basis.factor_position(l) {
                Some(p) => removed[p] = true,
                None => {
                    return Err(match basis.factor_containing(l) {
                        Some(_) => Error::CoupledLabel(l.to_string()),
                        None => Error::UnknownLabel(l.to_string()),
                    })
                }
            }
        }
        if removed.iter().all(|&r| r) {
            return Err(Error::Domain("partial trace would remove every factor".into()));
        }
        let kept_factors = basis.factors().iter().zip(&removed).filter(|(_, &r)| !r).map(|(f, _)| f.clone()).collect();
        let kept = Basis::from_factors(kept_factors);
        let gone = Basis::from_factors(
            basis.factors().iter().zip(&removed).filter(|(_, &r)| r).map(|(f, _)| f.clone()).collect(),
        );
        let mut groups = vec![Vec::with_capacity(kept.dim()); gone.dim()];
        let mut kl = Vec::new();
        let mut gl = Vec::new();
        for idx in 0..basis.dim() {
            kl.clear();
            gl.clear();
            for (l, &r) in basis.split(idx).into_iter().zip(&removed) {
                if r {
                    gl.push(l)
                } else {
                    kl.push(l)
                }
            }
            groups[gone.join(&gl)].push((idx, kept.join(&kl)));
        }
        Ok(TracePlan { kept, groups })
    }
}

/// Trace out the factors named in `labels`. A particle buried inside a coupled factor
/// cannot be traced on its own.
pub fn partial_trace(rho: &DensityOperator, labels: &[&str]) -> Result<DensityOperator> {
    let plan = TracePlan::new(rho.basis(), labels)?;
    let mut m = CMatrix::zeros(plan.kept.dim(), plan.kept.dim());
    for group in &plan.groups {
        for &(a, i) in group {
            for &(b, j) in group {
                m[(i, j)] += rho.matrix[(a, b)];
            }
        }
    }
    settle(plan.kept, m)
}

/// `U rho U^dagger`.
pub fn apply_unitary(rho: &DensityOperator, u: &CMatrix) -> Result<DensityOperator> {
    check_square(rho.basis(), u)?;
    settle(rho.basis.clone(), u * &rho.matrix * u.adjoint())
}

/// `Re Tr(rho O)`.
pub fn expectation(rho: &DensityOperator, observable: &CMatrix) -> Result<f64> {
    check_square(rho.basis(), observable)?;
    let n = rho.dim();
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += rho.matrix[(i, k)] * observable[(k, i)];
        }
    }
    Ok(acc.re)
}
