//! Closed form of the relational `S`-clock-gyroscope state after both averages,
//! in the limit of an infinite magnet pair and gyroscope.
//!
//! The state is block diagonal in `v = J^{SCG} - G`. Inside a block the two
//! rows `r = +1/2, -1/2` (index 0 and 1) carry `J^{CG} = G + v - r`. With
//! `a_± = (alpha ± beta)/sqrt 2`, `W_c` the clock's coherent amplitudes and
//! `c_s = k - Lambda s`,
//!
//! ```text
//! X_r(k, m)   = sum_s a_s sigma_r(s) W_{c_s} d^C_{m, c_s}(pi/2)
//! rho_v[r,r'] = 1/2 sum_k X_r(k, v-r) conj(X_r'(k, v-r'))
//! ```
//!
//! where `sigma_r(s) = -1` only for `r = s = -1/2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::Serialize;

use crate::am::{coherent_state_amplitudes, Axis};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::toy::{orthodox_down_symmetric, ClockReadout, GyroscopeMode, ToyModelConfig};
use crate::{Complex, WignerD};

/// Largest clock the closed form is evaluated for.
pub const MAX_CLOCK: HalfInt = HalfInt::int(400);

/// Readings with less weight than this have no conditional state.
pub const NULL_READING: f64 = 1e-14;

const BLOCK_TOL: f64 = 1e-10;

/// One `2x2` block, rows ordered `r = +1/2, -1/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationalBlock {
    /// `J^{SCG} - G`.
    pub v: HalfInt,
    #[serde(skip)]
    pub matrix: [[Complex; 2]; 2],
}

impl RelationalBlock {
    pub fn trace(&self) -> f64 {
        self.matrix[0][0].re + self.matrix[1][1].re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        (m[0][1] - m[1][0].conj()).norm().max(m[0][0].im.abs()).max(m[1][1].im.abs())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (a, d) = (self.matrix[0][0].re, self.matrix[1][1].re);
        let b = self.matrix[0][1].norm();
        0.5 * (a + d) - (0.25 * (a - d).powi(2) + b * b).sqrt()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationalState {
    clock: HalfInt,
    lambda: u32,
    /// Ordered by descending `v`.
    blocks: Vec<RelationalBlock>,
}

const R_PLUS: usize = 0;
const R_MINUS: usize = 1;

fn r_value(r: usize) -> HalfInt {
    if r == R_PLUS {
        HalfInt::HALF
    } else {
        -HalfInt::HALF
    }
}

#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: Complex,
    comp: Complex,
}

impl Neumaier {
    fn add(&mut self, x: Complex) {
        let t = self.sum + x;
        let fix = |s: f64, x: f64, t: f64| if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        self.comp += Complex::new(fix(self.sum.re, x.re, t.re), fix(self.sum.im, x.im, t.im));
        self.sum = t;
    }

    fn value(self) -> Complex {
        self.sum + self.comp
    }
}

/// Builds the closed-form state for `cfg`. Only the asymptotic gyroscope is covered.
pub fn relational_state_scg(cfg: &ToyModelConfig) -> Result<RelationalState> {
    if let GyroscopeMode::Finite(g) = cfg.gyroscope {
        return Err(Error::Unsupported(format!(
            "the closed form assumes an infinite gyroscope; use the exact engine for G = {g}"
        )));
    }
    let clock = cfg.clock;
    if clock > MAX_CLOCK {
        return Err(Error::Accuracy(format!("clock spin {clock} exceeds {MAX_CLOCK}")));
    }
    if clock.twice() <= 0 {
        return Err(Error::Domain(format!("clock spin {clock} must be positive")));
    }
    let n = clock.dim();
    let half_lambda = cfg.lambda as i64 / 2;
    let w: Vec<f64> = coherent_state_amplitudes(clock, Axis::X)?;
    let d = WignerD::new(clock, FRAC_PI_2)?;
    let a = [(cfg.alpha + cfg.beta) * FRAC_1_SQRT_2, (cfg.alpha - cfg.beta) * FRAC_1_SQRT_2];

    // Work with local indices: c = C - ic, m = C - im, k = C - ik + Lambda/2.
    // Then c_s = k - Lambda s gives ic = ik - Lambda/2 + Lambda s.
    let nk = n + 2 * half_lambda as usize;
    let shifts = [0usize, 2 * half_lambda as usize]; // s = +1/2, -1/2
    let mut x = [vec![Complex::new(0.0, 0.0); nk * n], vec![Complex::new(0.0, 0.0); nk * n]];
    for ik in 0..nk {
        for (si, &shift) in shifts.iter().enumerate() {
            // ic = ik - shift, with s = +1/2 for si = 0.
            let Some(ic) = ik.checked_sub(shift) else { continue };
            if ic >= n {
                continue;
            }
            for (r, xr) in x.iter_mut().enumerate() {
                let sign = if r == R_MINUS && si == 1 { -1.0 } else { 1.0 };
                let coef = a[si] * (sign * w[ic]);
                for im in 0..n {
                    xr[ik * n + im] += coef * d.at(im, ic);
                }
            }
        }
    }

    // v runs from C + 1/2 down to -C - 1/2; m = v - r.
    let mut blocks = Vec::with_capacity(n + 1);
    for iv in 0..=n {
        let v = clock + HalfInt::HALF - HalfInt::int(iv as i64);
        let m_index = |r: usize| -> Option<usize> { clock.index_of(v - r_value(r)) };
        let mut matrix = [[Complex::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for rp in 0..2 {
                let (Some(im), Some(imp)) = (m_index(r), m_index(rp)) else { continue };
                let mut acc = Neumaier::default();
                for ik in 0..nk {
                    acc.add(x[r][ik * n + im] * x[rp][ik * n + imp].conj());
                }
                matrix[r][rp] = acc.value() * 0.5;
            }
        }
        blocks.push(RelationalBlock { v, matrix });
    }
    let state = RelationalState { clock, lambda: cfg.lambda, blocks };
    state.validate()?;
    Ok(state)
}

impl RelationalState {
    pub fn clock(&self) -> HalfInt {
        self.clock
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn blocks(&self) -> &[RelationalBlock] {
        &self.blocks
    }

    pub fn block(&self, v: HalfInt) -> Option<&RelationalBlock> {
        self.blocks.iter().find(|b| b.v == v)
    }

    pub fn trace(&self) -> f64 {
        self.blocks.iter().map(RelationalBlock::trace).sum()
    }

    /// Checks unit trace, block Hermiticity and positivity.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-8 {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        for b in &self.blocks {
            if b.hermiticity_defect() > BLOCK_TOL {
                return Err(Error::InvalidState(format!("block {} is not Hermitian", b.v)));
            }
            if b.min_eigenvalue() < -BLOCK_TOL {
                return Err(Error::InvalidState(format!("block {} is not positive", b.v)));
            }
        }
        Ok(())
    }

    /// `P(J^{SCG} - G = v, J^{CG} - G = u)` over all nonzero-width entries.
    pub fn joint(&self) -> Vec<(HalfInt, HalfInt, f64)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for r in 0..2 {
                let u = b.v - r_value(r);
                if self.clock.index_of(u).is_some() {
                    out.push((b.v, u, b.matrix[r][r].re));
                }
            }
        }
        out
    }

    /// All readings `u` of `readout` with their probabilities, descending in `u`.
    pub fn clock_distribution(&self, readout: ClockReadout) -> Vec<(HalfInt, f64)> {
        match readout {
            ClockReadout::TotalSpin => self.blocks.iter().map(|b| (b.v, b.trace())).collect(),
            ClockReadout::ClockGyroscope => self
                .clock
                .projections()
                .map(|u| {
                    let p = self.cell(u + HalfInt::HALF, R_PLUS) + self.cell(u - HalfInt::HALF, R_MINUS);
                    (u, p)
                })
                .collect(),
        }
    }

    fn cell(&self, v: HalfInt, r: usize) -> f64 {
        self.block(v).map_or(0.0, |b| b.matrix[r][r].re)
    }

    /// `(P(u), P(antiparallel and u))` for reading `u`.
    fn reading(&self, readout: ClockReadout, u: HalfInt) -> (f64, f64) {
        match readout {
            ClockReadout::TotalSpin => self.block(u).map_or((0.0, 0.0), |b| (b.trace(), b.matrix[R_MINUS][R_MINUS].re)),
            ClockReadout::ClockGyroscope => {
                let anti = self.cell(u - HalfInt::HALF, R_MINUS);
                (self.cell(u + HalfInt::HALF, R_PLUS) + anti, anti)
            }
        }
    }

    /// Probability that the system is antiparallel to the clock-gyroscope
    /// composite, given reading `u`.
    pub fn conditional_antiparallel(&self, readout: ClockReadout, u: HalfInt) -> Result<f64> {
        let (p, anti) = self.reading(readout, u);
        if p < NULL_READING {
            return Err(Error::NullEvent(p));
        }
        Ok((anti / p).clamp(0.0, 1.0))
    }
}

/// Clock angle assigned to reading `u`; `None` outside the clock's range.
pub fn reading_angle(readout: ClockReadout, clock: HalfInt, u: HalfInt) -> Option<f64> {
    let w = match readout {
        ClockReadout::ClockGyroscope => u,
        ClockReadout::TotalSpin => u - HalfInt::HALF,
    };
    clock.index_of(w).map(|_| (w.value() / clock.value()).clamp(-1.0, 1.0).acos())
}

/// Nearest realized reading for clock angle `theta`.
pub fn snap_reading(readout: ClockReadout, clock: HalfInt, theta: f64) -> HalfInt {
    let c = clock.value();
    let steps = (c * (1.0 - theta.cos())).round().clamp(0.0, 2.0 * c) as i64;
    let w = clock - HalfInt::int(steps);
    match readout {
        ClockReadout::ClockGyroscope => w,
        ClockReadout::TotalSpin => w + HalfInt::HALF,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub u: HalfInt,
    pub theta: f64,
    pub p_u: f64,
    /// Absent where the reading has no weight.
    pub p_antiparallel: Option<f64>,
    pub reference: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationalSpectrumTable {
    pub readout: ClockReadout,
    pub clock: HalfInt,
    pub lambda: u32,
    pub rows: Vec<SpectrumRow>,
}

impl RelationalSpectrumTable {
    pub fn total_probability(&self) -> f64 {
        self.rows.iter().map(|r| r.p_u).sum()
    }

    /// Largest `|p_antiparallel - reference|` over rows with `theta <= max_theta`.
    pub fn max_deviation(&self, max_theta: f64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.theta <= max_theta)
            .filter_map(|r| Some((r.p_antiparallel? - r.reference?).abs()))
            .fold(0.0, f64::max)
    }
}

/// Distribution of the clock-gyroscope label with the arcsine reference
/// `1 / (pi sqrt(C^2 - u^2))`.
pub fn fig1a_distribution(cfg: &ToyModelConfig) -> Result<RelationalSpectrumTable> {
    let state = relational_state_scg(cfg)?;
    let readout = ClockReadout::ClockGyroscope;
    let c = cfg.clock.value();
    let rows = state
        .clock_distribution(readout)
        .into_iter()
        .map(|(u, p_u)| {
            let gap = c * c - u.value() * u.value();
            SpectrumRow {
                u,
                theta: reading_angle(readout, cfg.clock, u).unwrap_or(f64::NAN),
                p_u,
                p_antiparallel: state.conditional_antiparallel(readout, u).ok(),
                reference: (gap > 0.0).then(|| 1.0 / (PI * gap.sqrt())),
            }
        })
        .collect();
    Ok(RelationalSpectrumTable { readout, clock: cfg.clock, lambda: cfg.lambda, rows })
}

/// Antiparallel probability against clock angle, one row per distinct reading
/// hit by `cfg.theta_grid`, next to the textbook curve at `Bt = Lambda theta`.
/// The reference is [`orthodox_down_symmetric`], which is `|beta(t)|^2` whenever
/// `alpha beta*` is real.
pub fn fig1b_curve(cfg: &ToyModelConfig) -> Result<RelationalSpectrumTable> {
    let state = relational_state_scg(cfg)?;
    let readout = cfg.readout;
    let mut seen = std::collections::BTreeSet::new();
    let mut rows = Vec::new();
    for &theta in &cfg.theta_grid {
        let u = snap_reading(readout, cfg.clock, theta);
        if !seen.insert(u) {
            continue;
        }
        let theta_u = reading_angle(readout, cfg.clock, u).expect("snapped readings are in range");
        let (p_u, _) = state.reading(readout, u);
        let p_anti = state.conditional_antiparallel(readout, u)?;
        rows.push(SpectrumRow {
            u,
            theta: theta_u,
            p_u,
            p_antiparallel: Some(p_anti),
            reference: Some(orthodox_down_symmetric(cfg.alpha, cfg.beta, cfg.lambda as f64, theta_u)),
        });
    }
    Ok(RelationalSpectrumTable { readout, clock: cfg.clock, lambda: cfg.lambda, rows })
}
