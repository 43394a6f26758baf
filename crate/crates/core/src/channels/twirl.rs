//! The rotation twirl via Schur's lemma, and what can be done with its output.

use std::collections::BTreeMap;

use serde::Serialize;

use super::decompose::IrrepDecomposition;
use crate::composite::{settle, Basis, DensityOperator, Factor, Multiplet, StateVector};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::{CMatrix, Complex};

/// Sectors with probability below this are dropped.
pub const SECTOR_CUTOFF: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct PhysicalSector {
    pub j: HalfInt,
    pub probability: f64,
    /// State on the multiplicity space `K_J`.
    pub state: DensityOperator,
}

/// `sum_J p_J rho_J`: the content of a rotation-invariant state that survives the twirl.
#[derive(Clone, Debug)]
pub struct PhysicalState {
    sectors: Vec<PhysicalSector>,
}

/// Row of a sector report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorReport {
    pub j: HalfInt,
    pub probability: f64,
    pub multiplicity: usize,
}

impl PhysicalState {
    pub fn new(sectors: Vec<PhysicalSector>) -> Result<Self> {
        let ps = PhysicalState { sectors };
        ps.validate()?;
        Ok(ps)
    }

    pub fn sectors(&self) -> &[PhysicalSector] {
        &self.sectors
    }

    pub fn sector(&self, j: HalfInt) -> Option<&PhysicalSector> {
        self.sectors.iter().find(|s| s.j == j)
    }

    /// `p_J`, zero for absent sectors.
    pub fn probability(&self, j: HalfInt) -> f64 {
        self.sector(j).map_or(0.0, |s| s.probability)
    }

    pub fn report(&self) -> Vec<SectorReport> {
        self.sectors
            .iter()
            .map(|s| SectorReport { j: s.j, probability: s.probability, multiplicity: s.state.dim() })
            .collect()
    }

    /// Probabilities sum to one and every block is a valid density operator.
    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.sectors.iter().map(|s| s.probability).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("sector probabilities sum to {total}")));
        }
        for s in &self.sectors {
            if s.probability < 0.0 {
                return Err(Error::InvalidState(format!("negative probability in sector {}", s.j)));
            }
            DensityOperator::new(s.state.basis().clone(), s.state.matrix().clone())?;
        }
        Ok(())
    }

    /// Joint distribution of the total spin and the value of intermediate node `node`.
    pub fn joint_distribution(&self, node: &str) -> Result<BTreeMap<(HalfInt, HalfInt), f64>> {
        let mut out = BTreeMap::new();
        for s in &self.sectors {
            let f = &s.state.basis().factors()[0];
            for (i, m) in f.multiplets().iter().enumerate() {
                let v = m.intermediate(node).ok_or_else(|| Error::UnknownLabel(node.to_string()))?;
                *out.entry((s.j, v)).or_insert(0.0) += s.probability * s.state.matrix()[(i, i)].re;
            }
        }
        Ok(out)
    }
}

fn coupled_matrix(rho: &DensityOperator, dec: &IrrepDecomposition) -> Result<CMatrix> {
    if rho.basis() == dec.space() {
        Ok(dec.map().forward(rho)?.into_matrix())
    } else if rho.basis() == dec.map().target() {
        Ok(rho.matrix().clone())
    } else {
        Err(Error::SpaceMismatch("state and decomposition act on different spaces".into()))
    }
}

fn collect(dec: &IrrepDecomposition, block: impl Fn(usize, usize, usize) -> Complex) -> Result<PhysicalState> {
    let f = dec.coupled_factor();
    let mut sectors = Vec::new();
    for s in dec.sectors() {
        let n = s.multiplicity;
        let mut m = CMatrix::zeros(n, n);
        for (a, &ma) in s.multiplets.iter().enumerate() {
            for (b, &mb) in s.multiplets.iter().enumerate() {
                m[(a, b)] = block(f.offset(ma), f.offset(mb), s.dim);
            }
        }
        let p = m.trace().re;
        if p < SECTOR_CUTOFF {
            continue;
        }
        m /= Complex::new(p, 0.0);
        sectors.push(PhysicalSector { j: s.j, probability: p, state: settle(dec.multiplicity_basis(s), m)? });
    }
    normalize(sectors)
}

fn normalize(mut sectors: Vec<PhysicalSector>) -> Result<PhysicalState> {
    let total: f64 = sectors.iter().map(|s| s.probability).sum();
    if (total - 1.0).abs() > crate::composite::DRIFT_TOL {
        return Err(Error::Drift((total - 1.0).abs()));
    }
    for s in &mut sectors {
        s.probability /= total;
    }
    Ok(PhysicalState { sectors })
}

/// `p_J = Tr(P_J rho)` and `rho_J = Tr_{H_J}(P_J rho P_J) / p_J`.
pub fn rotation_twirl(rho: &DensityOperator, dec: &IrrepDecomposition) -> Result<PhysicalState> {
    let c = coupled_matrix(rho, dec)?;
    collect(dec, |oa, ob, d| (0..d).map(|k| c[(oa + k, ob + k)]).sum())
}

/// Same as [`rotation_twirl`] for a pure state, without forming the projector.
pub fn rotation_twirl_state(psi: &StateVector, dec: &IrrepDecomposition) -> Result<PhysicalState> {
    let v = if psi.basis() == dec.space() {
        dec.map().apply(psi.amplitudes())?
    } else if psi.basis() == dec.map().target() {
        psi.amplitudes().clone()
    } else {
        return Err(Error::SpaceMismatch("state and decomposition act on different spaces".into()));
    };
    collect(dec, |oa, ob, d| (0..d).map(|k| v[oa + k] * v[ob + k].conj()).sum())
}

/// `sum_J p_J (1/m_J) ⊗ rho_J`, back in the decomposition's original basis.
pub fn embed(ps: &PhysicalState, dec: &IrrepDecomposition) -> Result<DensityOperator> {
    let f = dec.coupled_factor();
    let n = f.dim();
    let mut m = CMatrix::zeros(n, n);
    for s in ps.sectors() {
        let sec = dec.sector(s.j).ok_or_else(|| Error::SpaceMismatch(format!("no sector {} in decomposition", s.j)))?;
        if sec.multiplicity != s.state.dim() {
            return Err(Error::DimensionMismatch { expected: sec.multiplicity, got: s.state.dim() });
        }
        let w = Complex::new(s.probability / sec.dim as f64, 0.0);
        for (a, &ma) in sec.multiplets.iter().enumerate() {
            for (b, &mb) in sec.multiplets.iter().enumerate() {
                let x = s.state.matrix()[(a, b)] * w;
                for k in 0..sec.dim {
                    m[(f.offset(ma) + k, f.offset(mb) + k)] = x;
                }
            }
        }
    }
    let coupled = settle(dec.map().target().clone(), m)?;
    dec.map().backward(&coupled)
}

/// The twirled state as an operator on the original space.
pub fn twirl(rho: &DensityOperator, dec: &IrrepDecomposition) -> Result<DensityOperator> {
    embed(&rotation_twirl(rho, dec)?, dec)
}

/// Drops the maximally mixed `H_J` factors. The data model already holds only the
/// `K_J` content, so this validates and returns the state unchanged.
pub fn extract_noiseless(ps: &PhysicalState) -> Result<PhysicalState> {
    ps.validate()?;
    Ok(ps.clone())
}

/// Condition on the total spin lying in the selected sectors.
pub fn conditional_update(ps: &PhysicalState, selector: impl Fn(HalfInt) -> bool) -> Result<(f64, PhysicalState)> {
    let kept: Vec<PhysicalSector> = ps.sectors.iter().filter(|s| selector(s.j)).cloned().collect();
    let p: f64 = kept.iter().map(|s| s.probability).sum();
    if p < SECTOR_CUTOFF {
        return Err(Error::NullEvent(p));
    }
    let sectors = kept.into_iter().map(|s| PhysicalSector { probability: s.probability / p, ..s }).collect();
    Ok((p, PhysicalState { sectors }))
}

/// Condition on a predicate over the multiplicity labels (intermediate spins) of each
/// sector. Since the state is block-diagonal this is the projective update on `K_J`.
pub fn condition_on_labels(
    ps: &PhysicalState,
    selector: impl Fn(HalfInt, &Multiplet) -> bool,
) -> Result<(f64, PhysicalState)> {
    let mut sectors = Vec::new();
    for s in &ps.sectors {
        let f = &s.state.basis().factors()[0];
        let idx: Vec<usize> = (0..f.multiplets().len()).filter(|&i| selector(s.j, &f.multiplets()[i])).collect();
        if idx.is_empty() {
            continue;
        }
        let sub = CMatrix::from_fn(idx.len(), idx.len(), |a, b| s.state.matrix()[(idx[a], idx[b])]);
        let w = sub.trace().re;
        let weight = s.probability * w;
        if weight < SECTOR_CUTOFF {
            continue;
        }
        let mults = idx.iter().map(|&i| f.multiplets()[i].clone()).collect();
        let basis = Basis::from_factors(vec![Factor::from_parts(f.name().to_string(), f.leaves().to_vec(), mults)]);
        let state = settle(basis, sub / Complex::new(w, 0.0))?;
        sectors.push(PhysicalSector { j: s.j, probability: weight, state });
    }
    let p: f64 = sectors.iter().map(|s| s.probability).sum();
    if p < SECTOR_CUTOFF {
        return Err(Error::NullEvent(p));
    }
    for s in &mut sectors {
        s.probability /= p;
    }
    Ok((p, PhysicalState { sectors }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::decompose_su2;
    use crate::composite::{ParticleSystem, StateVector};
    use crate::CVector;

    fn eq3_state(alpha: Complex, beta: Complex, g: HalfInt) -> (ParticleSystem, StateVector) {
        let sys = ParticleSystem::new([("S", HalfInt::HALF), ("G", g)]).unwrap();
        let mut gv = CVector::zeros(g.dim());
        gv[0] = Complex::new(1.0, 0.0);
        let sv = CVector::from_vec(vec![alpha, beta]);
        let psi = StateVector::product(&sys, &[sv, gv]).unwrap();
        (sys, psi)
    }

    #[test]
    fn parallel_probability_rule() {
        for g2 in [1, 3, 10, 25] {
            let g = HalfInt::from_twice(g2);
            let (a, b) = (Complex::new(0.6, 0.0), Complex::new(0.0, 0.8));
            let (sys, psi) = eq3_state(a, b, g);
            let dec = decompose_su2(&sys).unwrap();
            let ps = rotation_twirl(&psi.to_density(), &dec).unwrap();
            let gv = g.value();
            let expect = 0.36 + 0.64 / (2.0 * gv + 1.0);
            assert!((ps.probability(g + HalfInt::HALF) - expect).abs() < 1e-12);
            assert!((ps.probability(g - HalfInt::HALF) - 0.64 * 2.0 * gv / (2.0 * gv + 1.0)).abs() < 1e-12);
            let ps2 = rotation_twirl_state(&psi, &dec).unwrap();
            assert!((ps2.probability(g + HalfInt::HALF) - expect).abs() < 1e-12);

            let (p, _) = conditional_update(&ps, |j| j == g + HalfInt::HALF).unwrap();
            assert!((p - expect).abs() < 1e-12);
            let (p, same) = conditional_update(&ps, |_| true).unwrap();
            assert!((p - 1.0).abs() < 1e-12);
            assert_eq!(same.sectors().len(), ps.sectors().len());
        }
    }

    #[test]
    fn down_up_splits_evenly() {
        let (sys, psi) = eq3_state(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), HalfInt::HALF);
        let dec = decompose_su2(&sys).unwrap();
        let ps = rotation_twirl(&psi.to_density(), &dec).unwrap();
        assert!((ps.probability(HalfInt::ONE) - 0.5).abs() < 1e-15);
        assert!((ps.probability(HalfInt::ZERO) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn null_sector_is_absent() {
        let (sys, psi) = eq3_state(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), HalfInt::int(2));
        let dec = decompose_su2(&sys).unwrap();
        let ps = rotation_twirl(&psi.to_density(), &dec).unwrap();
        assert_eq!(ps.sectors().len(), 1);
        let err = conditional_update(&ps, |j| j == HalfInt::from_twice(3)).unwrap_err();
        assert!(matches!(err, Error::NullEvent(_)));
    }

    #[test]
    fn embed_extract_roundtrip() {
        let (sys, psi) = eq3_state(Complex::new(0.8, 0.0), Complex::new(0.0, 0.6), HalfInt::ONE);
        let dec = decompose_su2(&sys).unwrap();
        let ps = rotation_twirl(&psi.to_density(), &dec).unwrap();
        let rho = embed(&ps, &dec).unwrap();
        let again = extract_noiseless(&rotation_twirl(&rho, &dec).unwrap()).unwrap();
        for (x, y) in ps.sectors().iter().zip(again.sectors()) {
            assert_eq!(x.j, y.j);
            assert!((x.probability - y.probability).abs() < 1e-12);
            assert!((x.state.matrix() - y.state.matrix()).norm() < 1e-12);
        }
        // A twirled state is a fixed point.
        let twice = twirl(&rho, &dec).unwrap();
        assert!(twice.max_abs_diff(&rho).unwrap() < 1e-12);
    }
}
