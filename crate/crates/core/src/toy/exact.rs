//! The full finite pipeline on the exact engine, compared with the closed form.
//!
//! Particles `S, M, C, N, G` start in `(alpha, beta) ⊗ |M,M>_x ⊗ |C,C>_z ⊗ |N,N>_x ⊗ |G,G>_z`.
//! `S` couples to `M` and `C` to `N` through Heisenberg terms whose strengths are
//! chosen so the two precession rates are exactly in ratio `Lambda = M / N`.
//! The magnets are traced out after the time average, then the rotation twirl is
//! taken in the `(S,(C,G))` coupling.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::am::{coherent_state_amplitudes, Axis};
use crate::channels::{decompose_tree, energy_clusters, rotation_twirl, PhysicalState};
use crate::composite::{
    couple_factors, couple_pair, partial_trace_vector, settle, CouplingTree, DensityOperator, ParticleSystem,
    StateVector,
};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::toy::magnet::heisenberg_energy;
use crate::toy::{relational_state_scg, ToyModelConfig};
use crate::{CMatrix, CVector, Complex};

#[derive(Clone, Debug, PartialEq)]
pub struct ExactDemoConfig {
    pub alpha: Complex,
    pub beta: Complex,
    pub magnet: HalfInt,
    pub clock_magnet: HalfInt,
    pub clock: HalfInt,
    pub gyroscope: HalfInt,
}

impl ExactDemoConfig {
    /// `M = 2, N = 1, C = 2, G = 4` with the system initially up.
    pub fn small() -> Self {
        ExactDemoConfig {
            alpha: Complex::new(1.0, 0.0),
            beta: Complex::new(0.0, 0.0),
            magnet: HalfInt::int(2),
            clock_magnet: HalfInt::int(1),
            clock: HalfInt::int(2),
            gyroscope: HalfInt::int(4),
        }
    }

    /// The magnet ratio `M / N`; must be a positive even integer.
    pub fn lambda(&self) -> Result<u32> {
        let (m, n) = (self.magnet.twice(), self.clock_magnet.twice());
        if n <= 0 || m <= 0 || m % n != 0 || (m / n) % 2 != 0 {
            return Err(Error::Domain(format!(
                "magnet ratio {}/{} must be a positive even integer",
                self.magnet, self.clock_magnet
            )));
        }
        Ok((m / n) as u32)
    }

    fn system(&self) -> Result<ParticleSystem> {
        ParticleSystem::new([
            ("S", HalfInt::HALF),
            ("M", self.magnet),
            ("C", self.clock),
            ("N", self.clock_magnet),
            ("G", self.gyroscope),
        ])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactComparison {
    pub dimension: usize,
    /// `P(J^{SCG}, J^{CG})` from the exact pipeline.
    pub exact: BTreeMap<(HalfInt, HalfInt), f64>,
    /// The same distribution from the closed form, shifted by `G`.
    pub closed_form: BTreeMap<(HalfInt, HalfInt), f64>,
    pub total_variation: f64,
}

fn real_vec(v: Vec<f64>) -> CVector {
    CVector::from_iterator(v.len(), v.into_iter().map(|x| Complex::new(x, 0.0)))
}

/// Time-averaged reduced state of `S, C, G` with both magnets traced out.
pub fn exact_reduced_state(cfg: &ExactDemoConfig) -> Result<DensityOperator> {
    let lambda = cfg.lambda()? as f64;
    let sys = cfg.system()?;
    let psi = StateVector::product(
        &sys,
        &[
            CVector::from_vec(vec![cfg.alpha, cfg.beta]),
            real_vec(coherent_state_amplitudes(cfg.magnet, Axis::X)?),
            real_vec(coherent_state_amplitudes(cfg.clock, Axis::Z)?),
            real_vec(coherent_state_amplitudes(cfg.clock_magnet, Axis::X)?),
            real_vec(coherent_state_amplitudes(cfg.gyroscope, Axis::Z)?),
        ],
    )?;
    let first = couple_pair(&sys, "S", "M")?;
    let map = first.then(&couple_factors(first.target(), "C", "N")?)?;
    let coupled = map.apply(psi.amplitudes())?;

    // Rates B = lambda_s (2M+1) and B' = 2N+1 with B / B' = Lambda.
    let lambda_s = lambda * (2.0 * cfg.clock_magnet.value() + 1.0) / (2.0 * cfg.magnet.value() + 1.0);
    let target = map.target();
    let energies: Vec<f64> = (0..target.dim())
        .map(|t| {
            let lab = target.label(t);
            heisenberg_energy(lambda_s, lab[0].j, HalfInt::HALF, cfg.magnet)
                + heisenberg_energy(1.0, lab[1].j, cfg.clock, cfg.clock_magnet)
        })
        .collect();
    let ids = energy_clusters(&energies);
    let groups = ids.iter().copied().max().map_or(0, |m| m + 1);

    let mut acc: Option<(crate::composite::Basis, CMatrix)> = None;
    for g in 0..groups {
        let mut part = coupled.clone();
        for (t, &id) in ids.iter().enumerate() {
            if id != g {
                part[t] = Complex::new(0.0, 0.0);
            }
        }
        if part.norm_squared() == 0.0 {
            continue;
        }
        let back = map.apply_inverse(&part)?;
        let (basis, m) = partial_trace_vector(psi.basis(), &back, &["M", "N"])?;
        match &mut acc {
            Some((_, total)) => *total += m,
            None => acc = Some((basis, m)),
        }
    }
    let (basis, m) = acc.ok_or_else(|| Error::InvalidState("empty state".into()))?;
    settle(basis, m)
}

/// Twirled exact state in the `(S,(C,G))` coupling.
pub fn exact_physical_state(cfg: &ExactDemoConfig) -> Result<PhysicalState> {
    let rho = exact_reduced_state(cfg)?;
    let sys = ParticleSystem::new([("S", HalfInt::HALF), ("C", cfg.clock), ("G", cfg.gyroscope)])?;
    let tree: CouplingTree = "(S,(C,G))".parse()?;
    rotation_twirl(&rho, &decompose_tree(&sys, &tree)?)
}

/// Runs both paths and reports their total-variation distance.
pub fn exact_demo(cfg: &ExactDemoConfig) -> Result<ExactComparison> {
    let exact = exact_physical_state(cfg)?.joint_distribution("(C,G)")?;
    let toy = ToyModelConfig::new(cfg.alpha, cfg.beta, cfg.clock, cfg.lambda()?)?;
    let closed = relational_state_scg(&toy)?;
    let g = cfg.gyroscope;
    let closed_form: BTreeMap<_, _> = closed.joint().into_iter().map(|(v, u, p)| ((g + v, g + u), p)).collect();
    let keys: std::collections::BTreeSet<_> = exact.keys().chain(closed_form.keys()).collect();
    let total_variation = 0.5
        * keys
            .into_iter()
            .map(|k| (exact.get(k).copied().unwrap_or(0.0) - closed_form.get(k).copied().unwrap_or(0.0)).abs())
            .sum::<f64>();
    Ok(ExactComparison { dimension: cfg.system()?.dimension(), exact, closed_form, total_variation })
}
