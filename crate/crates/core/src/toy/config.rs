use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::Complex;

/// How the gyroscope enters: infinitely large, or a finite spin handled exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GyroscopeMode {
    Asymptotic,
    Finite(HalfInt),
}

/// Which relational label plays the role of the clock reading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClockReadout {
    /// `(J^{CG})^2 = (G+u)(G+u+1)`, read as `cos theta = u / C`.
    ClockGyroscope,
    /// The block label `G+u` of the closed-form state, i.e. `(J^{SCG})^2`, read as
    /// `cos theta = (u - 1/2) / C` so that the stretched label sits at `theta = 0`.
    #[default]
    TotalSpin,
}

impl ClockReadout {
    pub fn name(self) -> &'static str {
        match self {
            ClockReadout::ClockGyroscope => "clock-gyroscope",
            ClockReadout::TotalSpin => "total-spin",
        }
    }
}

impl std::str::FromStr for ClockReadout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clock-gyroscope" | "cg" => Ok(ClockReadout::ClockGyroscope),
            "total-spin" | "scg" => Ok(ClockReadout::TotalSpin),
            _ => Err(Error::Parse(format!("unknown clock readout {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ToyModelConfig {
    pub alpha: Complex,
    pub beta: Complex,
    /// Clock spin `C`.
    pub clock: HalfInt,
    /// Magnet ratio `M / N`, a positive even integer.
    pub lambda: u32,
    pub gyroscope: GyroscopeMode,
    pub theta_grid: Vec<f64>,
    pub readout: ClockReadout,
}

impl ToyModelConfig {
    pub fn new(alpha: Complex, beta: Complex, clock: HalfInt, lambda: u32) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        if lambda == 0 || !lambda.is_multiple_of(2) {
            return Err(Error::Domain(format!("magnet ratio {lambda} must be a positive even integer")));
        }
        if clock.twice() <= 0 {
            return Err(Error::Domain(format!("clock spin {clock} must be positive")));
        }
        Ok(ToyModelConfig {
            alpha,
            beta,
            clock,
            lambda,
            gyroscope: GyroscopeMode::Asymptotic,
            theta_grid: uniform_theta_grid(181),
            readout: ClockReadout::default(),
        })
    }

    /// The figure settings: `alpha = 1`, `beta = 0`, ratio 10.
    pub fn figure(clock: HalfInt) -> Result<Self> {
        Self::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), clock, 10)
    }

    pub fn with_theta_grid(mut self, grid: Vec<f64>) -> Result<Self> {
        if let Some(bad) = grid.iter().find(|t| !(0.0..=PI).contains(*t)) {
            return Err(Error::Domain(format!("clock angle {bad} outside [0, pi]")));
        }
        self.theta_grid = grid;
        Ok(self)
    }

    pub fn with_gyroscope(mut self, mode: GyroscopeMode) -> Self {
        self.gyroscope = mode;
        self
    }

    pub fn with_readout(mut self, readout: ClockReadout) -> Self {
        self.readout = readout;
        self
    }
}

/// `n` equally spaced angles from 0 to pi inclusive.
pub fn uniform_theta_grid(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect(),
    }
}
