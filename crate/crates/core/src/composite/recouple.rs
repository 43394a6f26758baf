//! Orthogonal changes of basis assembled from Clebsch–Gordan products.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use super::basis::{Basis, Factor, Multiplet};
use super::density::{settle, DensityOperator, StateVector};
use super::system::ParticleSystem;
use crate::am::{clebsch_gordan, CgQuery};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::{CMatrix, CVector, Complex};

/// Sparse real orthogonal map. Row `t` lists the source components of target vector `t`:
/// `|t> = sum_s U[t,s] |s>`.
#[derive(Clone, Debug)]
pub struct RecouplingMap {
    source: Basis,
    target: Basis,
    rows: Vec<Vec<(usize, f64)>>,
}

const DROP: f64 = 1e-15;

impl RecouplingMap {
    pub fn identity(basis: &Basis) -> RecouplingMap {
        RecouplingMap {
            source: basis.clone(),
            target: basis.clone(),
            rows: (0..basis.dim()).map(|i| vec![(i, 1.0)]).collect(),
        }
    }

    pub fn source(&self) -> &Basis {
        &self.source
    }

    pub fn target(&self) -> &Basis {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, t: usize) -> &[(usize, f64)] {
        &self.rows[t]
    }

    pub fn coefficient(&self, target: usize, source: usize) -> f64 {
        self.rows[target].iter().find(|(s, _)| *s == source).map_or(0.0, |(_, w)| *w)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut u = DMatrix::zeros(n, n);
        for (t, row) in self.rows.iter().enumerate() {
            for &(s, w) in row {
                u[(t, s)] = w;
            }
        }
        u
    }

    /// `max |U U^T - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let u = self.to_dense();
        let g = &u * u.transpose();
        (g - DMatrix::identity(self.dim(), self.dim())).abs().max()
    }

    /// The reverse map, from target back to source.
    pub fn inverse(&self) -> RecouplingMap {
        let mut rows = vec![Vec::new(); self.dim()];
        for (t, row) in self.rows.iter().enumerate() {
            for &(s, w) in row {
                rows[s].push((t, w));
            }
        }
        RecouplingMap { source: self.target.clone(), target: self.source.clone(), rows }
    }

    /// `next` after `self`.
    pub fn then(&self, next: &RecouplingMap) -> Result<RecouplingMap> {
        if next.source != self.target {
            return Err(Error::SpaceMismatch("composed maps do not share a basis".into()));
        }
        let n = self.dim();
        let mut scratch = vec![0.0; n];
        let mut touched = Vec::new();
        let rows = next
            .rows
            .iter()
            .map(|row| {
                for &(u, w) in row {
                    for &(s, x) in &self.rows[u] {
                        if scratch[s] == 0.0 {
                            touched.push(s);
                        }
                        scratch[s] += w * x;
                    }
                }
                touched.sort_unstable();
                let out = touched
                    .drain(..)
                    .filter_map(|s| {
                        let v = std::mem::take(&mut scratch[s]);
                        (v.abs() > DROP).then_some((s, v))
                    })
                    .collect();
                out
            })
            .collect();
        Ok(RecouplingMap { source: self.source.clone(), target: next.target.clone(), rows })
    }

    /// Source-basis coordinates to target-basis coordinates.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        self.check(v.len())?;
        Ok(CVector::from_iterator(
            self.dim(),
            self.rows.iter().map(|row| row.iter().map(|&(s, w)| v[s] * w).sum::<Complex>()),
        ))
    }

    pub fn apply_inverse(&self, v: &CVector) -> Result<CVector> {
        self.check(v.len())?;
        let mut out = CVector::zeros(self.dim());
        for (t, row) in self.rows.iter().enumerate() {
            for &(s, w) in row {
                out[s] += v[t] * w;
            }
        }
        Ok(out)
    }

    pub fn state(&self, psi: &StateVector) -> Result<StateVector> {
        self.require(psi.basis(), &self.source)?;
        StateVector::new(self.target.clone(), self.apply(psi.amplitudes())?)
    }

    pub fn state_inverse(&self, psi: &StateVector) -> Result<StateVector> {
        self.require(psi.basis(), &self.target)?;
        StateVector::new(self.source.clone(), self.apply_inverse(psi.amplitudes())?)
    }

    /// `U rho U^T`, moving a density operator from the source to the target basis.
    pub fn forward(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.require(rho.basis(), &self.source)?;
        let m = self.sandwich(rho.matrix(), false);
        settle(self.target.clone(), m)
    }

    pub fn backward(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        self.require(rho.basis(), &self.target)?;
        let m = self.sandwich(rho.matrix(), true);
        settle(self.source.clone(), m)
    }

    fn sandwich(&self, rho: &CMatrix, inverse: bool) -> CMatrix {
        let n = self.dim();
        // Columns of the sparse map as a dense matrix is fine at exact-engine sizes.
        let mut u = CMatrix::zeros(n, n);
        for (t, row) in self.rows.iter().enumerate() {
            for &(s, w) in row {
                if inverse {
                    u[(s, t)] = Complex::new(w, 0.0);
                } else {
                    u[(t, s)] = Complex::new(w, 0.0);
                }
            }
        }
        &u * rho * u.transpose()
    }

    fn check(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: len });
        }
        Ok(())
    }

    fn require(&self, got: &Basis, want: &Basis) -> Result<()> {
        if got != want {
            return Err(Error::SpaceMismatch("state basis differs from the map's".into()));
        }
        Ok(())
    }
}

/// Couple particles `a` and `b` of the product basis of `sys`.
pub fn couple_pair(sys: &ParticleSystem, a: &str, b: &str) -> Result<RecouplingMap> {
    sys.position(a)?;
    sys.position(b)?;
    couple_factors(&Basis::product(sys), a, b)
}

/// Couple two factors of `basis`. The merged factor is named `(a,b)` and sits where
/// the earlier of the two was.
pub fn couple_factors(basis: &Basis, a: &str, b: &str) -> Result<RecouplingMap> {
    let find = |name: &str| {
        basis.factor_position(name).ok_or_else(|| match basis.factor_containing(name) {
            Some(_) => Error::CoupledLabel(name.to_string()),
            None => Error::UnknownLabel(name.to_string()),
        })
    };
    let ia = find(a)?;
    let ib = find(b)?;
    if ia == ib {
        return Err(Error::DuplicateLabel(a.to_string()));
    }
    let fx = &basis.factors()[ia];
    let fy = &basis.factors()[ib];

    let mut multiplets = Vec::new();
    let mut provenance = Vec::new();
    for (xi, xm) in fx.multiplets().iter().enumerate() {
        for (yi, ym) in fy.multiplets().iter().enumerate() {
            for j in HalfInt::couplings(xm.j, ym.j).rev() {
                let mut intermediates = xm.intermediates.clone();
                if !fx.is_leaf() {
                    intermediates.push((fx.name().to_string(), xm.j));
                }
                intermediates.extend(ym.intermediates.iter().cloned());
                if !fy.is_leaf() {
                    intermediates.push((fy.name().to_string(), ym.j));
                }
                multiplets.push(Multiplet { j, intermediates });
                provenance.push((xi, yi));
            }
        }
    }
    let leaves = fx.leaves().iter().chain(fy.leaves()).cloned().collect();
    let merged = Factor::from_parts(format!("({},{})", fx.name(), fy.name()), leaves, multiplets);

    let keep = ia.min(ib);
    let drop = ia.max(ib);
    let mut factors = Vec::with_capacity(basis.factors().len() - 1);
    for (i, f) in basis.factors().iter().enumerate() {
        if i == keep {
            factors.push(merged.clone());
        } else if i != drop {
            factors.push(f.clone());
        }
    }
    let target = Basis::from_factors(factors);
    let source_pos = |p: usize| if p < drop { p } else { p + 1 };

    let mut rows = Vec::with_capacity(target.dim());
    let mut src = vec![0usize; basis.factors().len()];
    for t in 0..target.dim() {
        let locals = target.split(t);
        for (p, &l) in locals.iter().enumerate() {
            if p != keep {
                src[source_pos(p)] = l;
            }
        }
        let (mi, big_m) = merged.locate(locals[keep]);
        let (xi, yi) = provenance[mi];
        let j = merged.multiplets()[mi].j;
        let jx = fx.multiplets()[xi].j;
        let jy = fy.multiplets()[yi].j;
        let mut row = Vec::new();
        for mx in jx.projections() {
            let my = big_m - mx;
            if !jy.is_valid_projection(my) {
                continue;
            }
            let c: f64 = clebsch_gordan(&CgQuery::new(jx, mx, jy, my, j, big_m))?;
            if c == 0.0 {
                continue;
            }
            src[ia] = fx.index(xi, mx).expect("valid projection");
            src[ib] = fy.index(yi, my).expect("valid projection");
            row.push((basis.join(&src), c));
        }
        row.sort_unstable_by_key(|&(s, _)| s);
        rows.push(row);
    }
    Ok(RecouplingMap { source: basis.clone(), target, rows })
}

/// A binary coupling tree over particle labels, written like `((S,M),((C,N),G))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CouplingTree {
    Leaf(String),
    Pair(Box<CouplingTree>, Box<CouplingTree>),
}

impl CouplingTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        CouplingTree::Leaf(label.into())
    }

    pub fn pair(a: CouplingTree, b: CouplingTree) -> Self {
        CouplingTree::Pair(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> Vec<&str> {
        match self {
            CouplingTree::Leaf(l) => vec![l.as_str()],
            CouplingTree::Pair(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    /// Factor name produced by coupling along this tree.
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Internal nodes in post-order (children before parents).
    pub fn nodes(&self) -> Vec<&CouplingTree> {
        match self {
            CouplingTree::Leaf(_) => vec![],
            CouplingTree::Pair(a, b) => {
                let mut v = a.nodes();
                v.extend(b.nodes());
                v.push(self);
                v
            }
        }
    }
}

impl fmt::Display for CouplingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingTree::Leaf(l) => f.write_str(l),
            CouplingTree::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl FromStr for CouplingTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Tree(format!("trailing input in {s:?}")));
        }
        let leaves = tree.leaves();
        for (i, l) in leaves.iter().enumerate() {
            if leaves[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
        }
        Ok(tree)
    }
}

fn parse_tree(c: &[char], pos: &mut usize) -> Result<CouplingTree> {
    let err = |what: &str, at: usize| Error::Tree(format!("{what} at position {at}"));
    if c.get(*pos) == Some(&'(') {
        *pos += 1;
        let a = parse_tree(c, pos)?;
        if c.get(*pos) != Some(&',') {
            return Err(err("expected ','", *pos));
        }
        *pos += 1;
        let b = parse_tree(c, pos)?;
        if c.get(*pos) != Some(&')') {
            return Err(err("expected ')'", *pos));
        }
        *pos += 1;
        Ok(CouplingTree::pair(a, b))
    } else {
        let start = *pos;
        while *pos < c.len() && !matches!(c[*pos], '(' | ')' | ',') {
            *pos += 1;
        }
        if start == *pos {
            return Err(err("expected a label", start));
        }
        Ok(CouplingTree::Leaf(c[start..*pos].iter().collect()))
    }
}

/// Couple the product basis of `sys` along `tree`. Particles not in the tree stay bare.
pub fn couple_tree(sys: &ParticleSystem, tree: &CouplingTree) -> Result<RecouplingMap> {
    couple_tree_from(&Basis::product(sys), tree)
}

/// Couple an existing basis along `tree`, whose leaves must be factor names of `basis`.
pub fn couple_tree_from(basis: &Basis, tree: &CouplingTree) -> Result<RecouplingMap> {
    for l in tree.leaves() {
        if basis.factor_position(l).is_none() {
            return Err(match basis.factor_containing(l) {
                Some(_) => Error::CoupledLabel(l.to_string()),
                None => Error::UnknownLabel(l.to_string()),
            });
        }
    }
    let mut map = RecouplingMap::identity(basis);
    for node in tree.nodes() {
        if let CouplingTree::Pair(a, b) = node {
            let step = couple_factors(map.target(), &a.name(), &b.name())?;
            map = map.then(&step)?;
        }
    }
    Ok(map)
}
