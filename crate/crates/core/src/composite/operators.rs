//! Angular-momentum operators on labeled bases. Local index `k` carries `m = j - k`.

use super::basis::{Basis, Factor};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::{CMatrix, Complex};

/// `(J_x, J_y, J_z)` for a single multiplet, Condon–Shortley phases.
pub fn spin_matrices(j: HalfInt) -> [CMatrix; 3] {
    let n = j.dim();
    let mut jp = CMatrix::zeros(n, n);
    let mut jz = CMatrix::zeros(n, n);
    let jv = j.value();
    for (k, m) in j.projections().enumerate() {
        let mv = m.value();
        jz[(k, k)] = Complex::new(mv, 0.0);
        if k > 0 {
            // J+ |m> = sqrt((j-m)(j+m+1)) |m+1>, and m+1 sits at index k-1.
            jp[(k - 1, k)] = Complex::new(((jv - mv) * (jv + mv + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex::new(0.0, -0.5);
    [jx, jy, jz]
}

/// Spin operators on one factor: block-diagonal over its multiplets.
pub fn factor_spin(f: &Factor) -> [CMatrix; 3] {
    let n = f.dim();
    let mut out = [CMatrix::zeros(n, n), CMatrix::zeros(n, n), CMatrix::zeros(n, n)];
    for (i, mult) in f.multiplets().iter().enumerate() {
        let o = f.offset(i);
        let d = mult.j.dim();
        for (a, block) in out.iter_mut().zip(spin_matrices(mult.j)) {
            a.view_mut((o, o), (d, d)).copy_from(&block);
        }
    }
    out
}

/// `1 ⊗ op ⊗ 1` with `op` acting on factor `factor`.
pub fn embed(basis: &Basis, factor: usize, op: &CMatrix) -> Result<CMatrix> {
    let f = basis.factors().get(factor).ok_or_else(|| Error::UnknownLabel(format!("factor #{factor}")))?;
    if op.nrows() != f.dim() || op.ncols() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: op.nrows() });
    }
    let left: usize = basis.factors()[..factor].iter().map(Factor::dim).product();
    let right = basis.stride(factor);
    let out = CMatrix::identity(left, left).kronecker(op).kronecker(&CMatrix::identity(right, right));
    Ok(out)
}

fn locate(basis: &Basis, label: &str) -> Result<usize> {
    basis.factor_position(label).ok_or_else(|| match basis.factor_containing(label) {
        Some(_) => Error::CoupledLabel(label.to_string()),
        None => Error::UnknownLabel(label.to_string()),
    })
}

/// Spin vector of a single named factor, embedded in the full space.
pub fn factor_spin_embedded(basis: &Basis, label: &str) -> Result<[CMatrix; 3]> {
    let p = locate(basis, label)?;
    let [x, y, z] = factor_spin(&basis.factors()[p]);
    Ok([embed(basis, p, &x)?, embed(basis, p, &y)?, embed(basis, p, &z)?])
}

/// Sum of the spin vectors of the named factors.
pub fn total_spin(basis: &Basis, labels: &[&str]) -> Result<[CMatrix; 3]> {
    let n = basis.dim();
    let mut out = [CMatrix::zeros(n, n), CMatrix::zeros(n, n), CMatrix::zeros(n, n)];
    for l in labels {
        for (a, b) in out.iter_mut().zip(factor_spin_embedded(basis, l)?) {
            *a += b;
        }
    }
    Ok(out)
}

/// `J · J`.
pub fn casimir(j: &[CMatrix; 3]) -> CMatrix {
    dot(j, j)
}

/// `A · B = sum_i A_i B_i`.
pub fn dot(a: &[CMatrix; 3], b: &[CMatrix; 3]) -> CMatrix {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_relations() {
        for t in [1, 2, 3, 6] {
            let [x, y, z] = spin_matrices(HalfInt::from_twice(t));
            let comm = &x * &y - &y * &x;
            assert!((comm - &z * Complex::new(0.0, 1.0)).norm() < 1e-12);
            let j = HalfInt::from_twice(t);
            let c = casimir(&[x, y, z]);
            let n = j.dim();
            assert!((c - CMatrix::identity(n, n) * Complex::new(j.casimir(), 0.0)).norm() < 1e-12);
        }
    }
}
