use nalgebra::DMatrix;
use serde::Serialize;

use crate::composite::{couple_tree, Basis, CouplingTree, Factor, Multiplet, ParticleSystem, RecouplingMap};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// One isotypic sector `H_J ⊗ K_J`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sector {
    pub j: HalfInt,
    /// `m_J = 2J+1`.
    pub dim: usize,
    /// `n_J`, the number of copies of spin `J`.
    pub multiplicity: usize,
    /// Positions of the copies among the coupled factor's multiplets.
    #[serde(skip)]
    pub multiplets: Vec<usize>,
}

/// `H = ⊕_J H_J ⊗ K_J` under the collective rotation action, built by coupling along a tree.
#[derive(Clone, Debug)]
pub struct IrrepDecomposition {
    map: RecouplingMap,
    sectors: Vec<Sector>,
}

/// Left comb `((((p1,p2),p3),p4)...)` over the system's particles.
pub fn sequential_tree(sys: &ParticleSystem) -> CouplingTree {
    let mut it = sys.particles().iter().map(|p| CouplingTree::leaf(&p.label));
    let first = it.next().expect("systems are never empty");
    it.fold(first, CouplingTree::pair)
}

pub fn decompose_su2(sys: &ParticleSystem) -> Result<IrrepDecomposition> {
    decompose_tree(sys, &sequential_tree(sys))
}

/// Decomposition whose multiplicity labels are the intermediate spins of `tree`.
pub fn decompose_tree(sys: &ParticleSystem, tree: &CouplingTree) -> Result<IrrepDecomposition> {
    let leaves = tree.leaves();
    if leaves.len() != sys.particles().len() {
        return Err(Error::Tree(format!("tree {tree} must cover all {} particles", sys.particles().len())));
    }
    let map = couple_tree(sys, tree)?;
    IrrepDecomposition::from_map(map)
}

impl IrrepDecomposition {
    /// Wrap a map whose target basis is a single coupled factor.
    pub fn from_map(map: RecouplingMap) -> Result<Self> {
        let factors = map.target().factors();
        if factors.len() != 1 {
            return Err(Error::Tree("the coupled basis must consist of a single factor".into()));
        }
        let mut sectors: Vec<Sector> = Vec::new();
        for (i, m) in factors[0].multiplets().iter().enumerate() {
            match sectors.iter_mut().find(|s| s.j == m.j) {
                Some(s) => {
                    s.multiplicity += 1;
                    s.multiplets.push(i);
                }
                None => sectors.push(Sector { j: m.j, dim: m.j.dim(), multiplicity: 1, multiplets: vec![i] }),
            }
        }
        sectors.sort_by_key(|s| std::cmp::Reverse(s.j));
        Ok(IrrepDecomposition { map, sectors })
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn sector(&self, j: HalfInt) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.j == j)
    }

    pub fn map(&self) -> &RecouplingMap {
        &self.map
    }

    /// The basis the decomposition acts on.
    pub fn space(&self) -> &Basis {
        self.map.source()
    }

    pub(crate) fn coupled_factor(&self) -> &Factor {
        &self.map.target().factors()[0]
    }

    pub fn total_dim(&self) -> usize {
        self.sectors.iter().map(|s| s.dim * s.multiplicity).sum()
    }

    /// Labels of the copies of spin `sector.j`: the coupling-tree intermediates.
    pub fn multiplicity_labels(&self, sector: &Sector) -> Vec<&Multiplet> {
        sector.multiplets.iter().map(|&i| &self.coupled_factor().multiplets()[i]).collect()
    }

    /// Basis of `K_J`: one dimension-one entry per copy, carrying its intermediates.
    pub fn multiplicity_basis(&self, sector: &Sector) -> Basis {
        let f = self.coupled_factor();
        let mults = self
            .multiplicity_labels(sector)
            .into_iter()
            .map(|m| Multiplet { j: HalfInt::ZERO, intermediates: m.intermediates.clone() })
            .collect();
        Basis::from_factors(vec![Factor::from_parts(format!("K[{}]", sector.j), f.leaves().to_vec(), mults)])
    }

    /// Columns are an orthonormal basis of `H_J ⊗ K_J` in the original coordinates,
    /// ordered with the `H_J` index slow and the copy index fast.
    pub fn isometry(&self, sector: &Sector) -> DMatrix<f64> {
        let n = self.space().dim();
        let f = self.coupled_factor();
        let mut w = DMatrix::zeros(n, sector.dim * sector.multiplicity);
        for (a, &mi) in sector.multiplets.iter().enumerate() {
            for k in 0..sector.dim {
                let t = f.offset(mi) + k;
                for &(s, x) in self.map.row(t) {
                    w[(s, k * sector.multiplicity + a)] = x;
                }
            }
        }
        w
    }
}
