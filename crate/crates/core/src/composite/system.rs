use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Default cap on the product-space dimension handled by the exact engine.
pub const DEFAULT_DIMENSION_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Particle {
    pub label: String,
    pub spin: HalfInt,
}

impl Particle {
    pub fn new(label: impl Into<String>, spin: HalfInt) -> Self {
        Particle { label: label.into(), spin }
    }
}

/// Ordered list of labeled spins; the product basis follows this order with
/// the first particle varying slowest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticleSystem {
    particles: Vec<Particle>,
    dim: usize,
}

impl ParticleSystem {
    pub fn new<L: Into<String>>(particles: impl IntoIterator<Item = (L, HalfInt)>) -> Result<Self> {
        Self::with_limit(particles, DEFAULT_DIMENSION_LIMIT)
    }

    pub fn with_limit<L: Into<String>>(
        particles: impl IntoIterator<Item = (L, HalfInt)>,
        limit: usize,
    ) -> Result<Self> {
        let particles: Vec<Particle> = particles.into_iter().map(|(l, s)| Particle::new(l, s)).collect();
        if particles.is_empty() {
            return Err(Error::Domain("empty particle system".into()));
        }
        let mut dim = 1usize;
        for (i, p) in particles.iter().enumerate() {
            if p.label.is_empty() || p.label.contains(['(', ')', ',']) {
                return Err(Error::Domain(format!("bad particle label {:?}", p.label)));
            }
            if p.spin.twice() < 0 {
                return Err(Error::Domain(format!("negative spin for {}", p.label)));
            }
            if particles[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::DuplicateLabel(p.label.clone()));
            }
            dim = dim
                .checked_mul(p.spin.dim())
                .filter(|&d| d <= limit)
                .ok_or(Error::DimensionLimit { dim: dim.saturating_mul(p.spin.dim()), limit })?;
        }
        Ok(ParticleSystem { particles, dim })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.particles.iter().position(|p| p.label == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn spin(&self, label: &str) -> Result<HalfInt> {
        Ok(self.particles[self.position(label)?].spin)
    }
}
