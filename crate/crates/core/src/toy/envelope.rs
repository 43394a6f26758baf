//! Textbook precession smeared over the clock's time uncertainty.
//!
//! Time is measured in clock units, so the reading `theta` stands for `t = theta`
//! and the system precesses at `B = Lambda`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_hermite, gauss_legendre};
use crate::toy::{orthodox_amplitudes, ToyModelConfig};

/// A distribution `P(t | theta)` given as quadrature nodes around the reading.
pub trait TimeDistribution {
    /// `(t, weight)` pairs with weights summing to one.
    fn nodes(&self, center: f64) -> Vec<(f64, f64)>;
}

const HERMITE_POINTS: usize = 64;
const LEGENDRE_POINTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Smearing {
    Delta,
    Gaussian { sigma: f64 },
    Uniform { half_width: f64 },
}

impl Smearing {
    pub fn validate(&self) -> Result<()> {
        let w = match *self {
            Smearing::Delta => 0.0,
            Smearing::Gaussian { sigma } => sigma,
            Smearing::Uniform { half_width } => half_width,
        };
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::Domain(format!("smearing width {w} must be finite and non-negative")));
        }
        Ok(())
    }
}

impl TimeDistribution for Smearing {
    fn nodes(&self, center: f64) -> Vec<(f64, f64)> {
        match *self {
            Smearing::Delta => vec![(center, 1.0)],
            Smearing::Gaussian { sigma: 0.0 } => vec![(center, 1.0)],
            Smearing::Uniform { half_width: 0.0 } => vec![(center, 1.0)],
            Smearing::Gaussian { sigma } => {
                let rule = gauss_hermite(HERMITE_POINTS);
                let norm = std::f64::consts::PI.sqrt();
                rule.nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| (center + std::f64::consts::SQRT_2 * sigma * x, w / norm))
                    .collect()
            }
            Smearing::Uniform { half_width } => {
                let rule = gauss_legendre(LEGENDRE_POINTS);
                rule.nodes.iter().zip(&rule.weights).map(|(x, w)| (center + half_width * x, w / 2.0)).collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub theta: f64,
    pub p_antiparallel: f64,
}

/// `P(down | theta) = int P(t|theta) |beta(t)|^2 dt` over `cfg.theta_grid`.
pub fn decoherence_envelope<D: TimeDistribution + ?Sized>(cfg: &ToyModelConfig, dist: &D) -> Vec<EnvelopePoint> {
    let b = cfg.lambda as f64;
    cfg.theta_grid
        .iter()
        .map(|&theta| {
            let p = dist
                .nodes(theta)
                .into_iter()
                .map(|(t, w)| w * orthodox_amplitudes(cfg.alpha, cfg.beta, b, t).1.norm_sqr())
                .sum();
            EnvelopePoint { theta, p_antiparallel: p }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::toy::uniform_theta_grid;

    fn cfg() -> ToyModelConfig {
        ToyModelConfig::figure(HalfInt::int(20)).unwrap().with_theta_grid(uniform_theta_grid(37)).unwrap()
    }

    #[test]
    fn delta_is_textbook() {
        for p in decoherence_envelope(&cfg(), &Smearing::Delta) {
            assert!((p.p_antiparallel - (5.0 * p.theta).sin().powi(2)).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_matches_analytic_contrast() {
        for sigma in [0.05, 0.2, 0.5] {
            let damp = (-100.0 * sigma * sigma / 2.0f64).exp();
            for p in decoherence_envelope(&cfg(), &Smearing::Gaussian { sigma }) {
                let want = 0.5 * (1.0 - (10.0 * p.theta).cos() * damp);
                assert!((p.p_antiparallel - want).abs() < 1e-12, "sigma={sigma}");
            }
        }
    }

    #[test]
    fn uniform_matches_sinc() {
        let h = 0.13;
        for p in decoherence_envelope(&cfg(), &Smearing::Uniform { half_width: h }) {
            let want = 0.5 * (1.0 - (10.0 * p.theta).cos() * (10.0 * h).sin() / (10.0 * h));
            assert!((p.p_antiparallel - want).abs() < 1e-12);
        }
    }

    #[test]
    fn wider_smearing_flattens() {
        let theta = 0.31;
        let c = cfg().with_theta_grid(vec![theta]).unwrap();
        let amp = |s: f64| (decoherence_envelope(&c, &Smearing::Gaussian { sigma: s })[0].p_antiparallel - 0.5).abs();
        assert!(amp(0.1) > amp(0.2) && amp(0.2) > amp(0.4));
        assert!(Smearing::Gaussian { sigma: -1.0 }.validate().is_err());
    }
}
