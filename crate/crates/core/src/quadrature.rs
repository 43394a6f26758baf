//! Gauss rules via the Golub–Welsch eigenvalue method.

use nalgebra::{DMatrix, SymmetricEigen};

/// A set of nodes and weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn golub_welsch(offdiag: impl Fn(usize) -> f64, n: usize, mass: f64) -> Rule {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = offdiag(k);
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], mass * eig.eigenvectors[(0, i)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule { nodes: pairs.iter().map(|p| p.0).collect(), weights: pairs.iter().map(|p| p.1).collect() }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`; exact for polynomials of degree `2n-1`.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n > 0, "rule needs at least one node");
    golub_welsch(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt(), n, 2.0)
}

/// `n`-point Gauss–Hermite rule for the weight `exp(-x^2)` on the real line.
pub fn gauss_hermite(n: usize) -> Rule {
    assert!(n > 0, "rule needs at least one node");
    golub_welsch(|k| (k as f64 / 2.0).sqrt(), n, std::f64::consts::PI.sqrt())
}
