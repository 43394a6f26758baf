//! Basis descriptors: an ordered list of factors, each either a bare particle
//! or a coupled block of particles organised into total-spin multiplets.

use serde::Serialize;

use super::system::{Particle, ParticleSystem};
use crate::halfint::HalfInt;

/// A total-spin multiplet of a factor, with the spins of every coupling node below it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Multiplet {
    pub j: HalfInt,
    pub intermediates: Vec<(String, HalfInt)>,
}

impl Multiplet {
    pub fn intermediate(&self, node: &str) -> Option<HalfInt> {
        self.intermediates.iter().find(|(n, _)| n == node).map(|(_, j)| *j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    name: String,
    leaves: Vec<Particle>,
    multiplets: Vec<Multiplet>,
    offsets: Vec<usize>,
    dim: usize,
}

impl Factor {
    pub fn leaf(p: &Particle) -> Factor {
        Factor::from_parts(p.label.clone(), vec![p.clone()], vec![Multiplet { j: p.spin, intermediates: vec![] }])
    }

    pub(crate) fn from_parts(name: String, leaves: Vec<Particle>, multiplets: Vec<Multiplet>) -> Factor {
        let mut offsets = Vec::with_capacity(multiplets.len());
        let mut dim = 0;
        for m in &multiplets {
            offsets.push(dim);
            dim += m.j.dim();
        }
        Factor { name, leaves, multiplets, offsets, dim }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn leaves(&self) -> &[Particle] {
        &self.leaves
    }

    pub fn is_leaf(&self) -> bool {
        self.leaves.len() == 1 && self.leaves[0].label == self.name
    }

    pub fn multiplets(&self) -> &[Multiplet] {
        &self.multiplets
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self, multiplet: usize) -> usize {
        self.offsets[multiplet]
    }

    /// Local index of projection `m` within `multiplet`.
    pub fn index(&self, multiplet: usize, m: HalfInt) -> Option<usize> {
        self.multiplets[multiplet].j.index_of(m).map(|k| self.offsets[multiplet] + k)
    }

    /// `(multiplet, m)` of a local index.
    pub fn locate(&self, local: usize) -> (usize, HalfInt) {
        let mi = match self.offsets.binary_search(&local) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let k = local - self.offsets[mi];
        (mi, self.multiplets[mi].j - HalfInt::int(k as i64))
    }
}

/// Quantum numbers of one factor at one basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorLabel {
    pub factor: String,
    pub j: HalfInt,
    pub m: HalfInt,
    pub intermediates: Vec<(String, HalfInt)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    factors: Vec<Factor>,
    strides: Vec<usize>,
    dim: usize,
}

impl Basis {
    pub fn product(sys: &ParticleSystem) -> Basis {
        Basis::from_factors(sys.particles().iter().map(Factor::leaf).collect())
    }

    pub fn from_factors(factors: Vec<Factor>) -> Basis {
        let mut strides = vec![1; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1].dim();
        }
        let dim = factors.iter().map(Factor::dim).product();
        Basis { factors, strides, dim }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_product(&self) -> bool {
        self.factors.iter().all(Factor::is_leaf)
    }

    pub fn factor_position(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Factor that contains the particle `label`, possibly inside a coupled block.
    pub fn factor_containing(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.leaves.iter().any(|p| p.label == label))
    }

    pub fn split(&self, index: usize) -> Vec<usize> {
        self.factors.iter().zip(&self.strides).map(|(f, s)| (index / s) % f.dim()).collect()
    }

    pub fn join(&self, locals: &[usize]) -> usize {
        locals.iter().zip(&self.strides).map(|(l, s)| l * s).sum()
    }

    pub fn stride(&self, factor: usize) -> usize {
        self.strides[factor]
    }

    pub fn label(&self, index: usize) -> Vec<FactorLabel> {
        self.factors
            .iter()
            .zip(self.split(index))
            .map(|(f, local)| {
                let (mi, m) = f.locate(local);
                let mult = &f.multiplets[mi];
                FactorLabel { factor: f.name.clone(), j: mult.j, m, intermediates: mult.intermediates.clone() }
            })
            .collect()
    }

    /// All particles, in factor order.
    pub fn particles(&self) -> Vec<Particle> {
        self.factors.iter().flat_map(|f| f.leaves.iter().cloned()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_join_roundtrip() {
        let sys =
            ParticleSystem::new([("A", HalfInt::HALF), ("B", HalfInt::ONE), ("C", HalfInt::from_twice(3))]).unwrap();
        let b = Basis::product(&sys);
        assert_eq!(b.dim(), 24);
        for i in 0..b.dim() {
            assert_eq!(b.join(&b.split(i)), i);
        }
        let lab = b.label(5);
        assert_eq!(lab[0].m, HalfInt::HALF);
        assert_eq!(lab[1].m, HalfInt::ZERO);
        assert_eq!(lab[2].m, HalfInt::HALF);
    }
}
