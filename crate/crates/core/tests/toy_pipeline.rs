mod common;

use std::f64::consts::PI;

use common::*;
use rand::Rng;
use relspin::composite::{partial_trace, pure_state, ParticleSystem};
use relspin::toy::*;
use relspin::{CVector, Complex, HalfInt};

#[test]
fn probability_rule_for_finite_gyroscopes() {
    let mut r = rng(5);
    for g in [HalfInt::HALF, HalfInt::int(5), HalfInt::int(50)] {
        for _ in 0..10 {
            let v = random_vector(&mut r, 2);
            let p = parallel_probability(v[0], v[1], GyroscopeMode::Finite(g)).unwrap();
            let want = v[0].norm_sqr() + v[1].norm_sqr() / (2.0 * g.value() + 1.0);
            assert!((p - want).abs() < 1e-10);
        }
    }
}

#[test]
fn magnet_state_matches_closed_form() {
    let s = [Complex::new(0.8, 0.0), Complex::new(0.0, 0.6)];
    for m in [5, 50, 500] {
        let m = HalfInt::int(m);
        for frac in [0.2, 0.7, 1.3] {
            let t = frac * PI / magnet_gap(m, 1.0);
            let exact = magnet_dynamics_state(s, m, 1.0, t).unwrap();
            let closed = magnet_dynamics_closed_form(s, m, 1.0, t).unwrap();
            let overlap = exact.amplitudes().dotc(closed.amplitudes()).norm_sqr();
            assert!((1.0 - overlap).abs() < 1e-12);
        }
    }
}

#[test]
fn correction_amplitude_scales_as_inverse_root() {
    let s = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
    let pts: Vec<(f64, f64)> = [5, 50, 500]
        .iter()
        .map(|&m| {
            let m = HalfInt::int(m);
            let psi = magnet_dynamics_state(s, m, 1.0, PI / magnet_gap(m, 1.0)).unwrap();
            (m.value(), correction_amplitude(&psi).unwrap().norm())
        })
        .collect();
    let slope = log_log_slope(&pts);
    assert!((slope + 0.5).abs() <= 0.05, "{slope}");
}

#[test]
fn reduced_system_tracks_textbook_precession() {
    let m = HalfInt::int(500);
    let (a, b) = (Complex::new(0.8, 0.0), Complex::new(0.0, 0.6));
    let s = ParticleSystem::new([("S", HalfInt::HALF)]).unwrap();
    let mut dists = Vec::new();
    for mm in [5, 50, 500] {
        let m = HalfInt::int(mm);
        let t = 0.9 * PI / magnet_gap(m, 1.0);
        let red = partial_trace(&magnet_dynamics_exact([a, b], m, 1.0, t).unwrap(), &["M"]).unwrap();
        let (at, bt) = orthodox_amplitudes(a, b, magnet_gap(m, 1.0), t);
        let want = pure_state(&s, CVector::from_vec(vec![at, bt])).unwrap();
        dists.push((mm as f64, red.trace_distance(&want).unwrap()));
    }
    assert!(dists[2].1 <= 0.05);
    // The reduced state errs at second order in the correction amplitude.
    let slope = log_log_slope(&dists);
    assert!((slope + 1.0).abs() < 0.1, "{slope}");
    let _ = m;
}

#[test]
fn figure_curves_converge() {
    let mut maxima = Vec::new();
    for c in [20, 40, 100, 400] {
        let cfg = ToyModelConfig::figure(HalfInt::int(c)).unwrap().with_theta_grid(uniform_theta_grid(721)).unwrap();
        let t = fig1b_curve(&cfg).unwrap();
        assert!(t.rows[0].p_antiparallel.unwrap() <= 0.02);
        maxima.push(t.max_deviation(PI));
        if c == 400 {
            assert!(t.max_deviation(PI / 4.0) <= 0.05);
        }
    }
    assert!(maxima.windows(2).all(|w| w[1] < w[0]), "{maxima:?}");
}

#[test]
fn clock_readout_conditioning_is_softer() {
    // Conditioning on the clock-gyroscope label alone blurs the clock by about
    // Lambda / sqrt(2C), so the curve cannot start at zero.
    let cfg = ToyModelConfig::figure(HalfInt::int(100))
        .unwrap()
        .with_readout(ClockReadout::ClockGyroscope)
        .with_theta_grid(uniform_theta_grid(181))
        .unwrap();
    let t = fig1b_curve(&cfg).unwrap();
    let p0 = t.rows[0].p_antiparallel.unwrap();
    assert!(p0 > 0.1 && p0 < 0.3, "{p0}");
}

#[test]
fn general_amplitudes_give_valid_tables() {
    let mut r = rng(9);
    for _ in 0..5 {
        let v = random_vector(&mut r, 2);
        let c = HalfInt::int(r.gen_range(3..30));
        let cfg = ToyModelConfig::new(v[0], v[1], c, 2 * r.gen_range(1..6)).unwrap();
        let st = relational_state_scg(&cfg).unwrap();
        assert!((st.trace() - 1.0).abs() < 1e-10);
        for b in st.blocks() {
            assert!(b.hermiticity_defect() < 1e-10 && b.min_eigenvalue() > -1e-10);
        }
        let t = fig1b_curve(&cfg).unwrap();
        assert!(t.rows.iter().all(|row| (0.0..=1.0).contains(&row.p_antiparallel.unwrap())));
    }
}

#[test]
fn large_clock_approaches_time_symmetric_textbook_curve() {
    // Readings cannot distinguish t from -t, so compare against the averaged curve.
    let states = [
        (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)),
        (Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)),
        (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)),
    ];
    for (a, b) in states {
        let cfg = ToyModelConfig::new(a, b, HalfInt::int(400), 10)
            .unwrap()
            .with_readout(ClockReadout::ClockGyroscope)
            .with_theta_grid(uniform_theta_grid(181))
            .unwrap();
        let t = fig1b_curve(&cfg).unwrap();
        let worst = t
            .rows
            .iter()
            .filter(|r| r.theta <= PI / 4.0)
            .map(|r| (r.p_antiparallel.unwrap() - orthodox_down_symmetric(a, b, 10.0, r.theta)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.06, "{worst}");
    }
}

#[test]
fn total_spin_top_reading_is_always_parallel() {
    // J^{SCG} = G + C + 1/2 needs every spin stretched, whatever the initial state.
    let cfg = ToyModelConfig::new(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), HalfInt::int(50), 10).unwrap();
    let t = fig1b_curve(&cfg).unwrap();
    assert_eq!(t.rows[0].p_antiparallel, Some(0.0));
    assert!(t.rows[0].p_u > 0.0);
}

#[test]
fn exact_engine_residual_shrinks_with_magnets() {
    let mut residuals = Vec::new();
    for (m, n) in [(2, 1), (4, 2), (8, 4)] {
        let mut cfg = ExactDemoConfig::small();
        cfg.magnet = HalfInt::int(m);
        cfg.clock_magnet = HalfInt::int(n);
        residuals.push(exact_demo(&cfg).unwrap().total_variation);
    }
    assert!(residuals.windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
}

#[test]
fn smearing_damps_monotonically() {
    let cfg = ToyModelConfig::figure(HalfInt::int(20)).unwrap().with_theta_grid(vec![0.4, 1.1, 2.9]).unwrap();
    let delta = decoherence_envelope(&cfg, &Smearing::Delta);
    for (p, th) in delta.iter().zip([0.4f64, 1.1, 2.9]) {
        assert!((p.p_antiparallel - (5.0 * th).sin().powi(2)).abs() < 1e-15);
    }
    let amp = |s: f64| -> Vec<f64> {
        decoherence_envelope(&cfg, &Smearing::Gaussian { sigma: s })
            .iter()
            .map(|p| (p.p_antiparallel - 0.5).abs())
            .collect()
    };
    let (lo, hi) = (amp(0.05), amp(0.15));
    assert!(lo.iter().zip(&hi).all(|(l, h)| h < l));
}
