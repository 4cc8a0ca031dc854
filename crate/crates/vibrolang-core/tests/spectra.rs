use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use vibrolang_core::kernels::KernelParams;
use vibrolang_core::model::*;
use vibrolang_core::spectra::*;
use vibrolang_core::Error;

fn markov(gm: f64) -> KernelParams {
    KernelParams::markovian(gm, 1.0).unwrap()
}

fn mol(lambda: f64, gamma: f64) -> MoleculeParams {
    MoleculeParams::new(0.0, gamma, 1.0, lambda, 0.0).unwrap()
}

fn grid(half: f64, step: f64) -> Vec<f64> {
    let n = (half / step).round() as i64;
    (-n..=n).map(|i| i as f64 * step).collect()
}

fn peak_rel(a: &[f64], b: &[f64]) -> f64 {
    let p = b.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / p
}

#[test]
fn three_d_density_peak() {
    let sd = SpectralDensity::three_d(0.02, 3.0).unwrap();
    let (mut best, mut wb) = (0.0, 0.0);
    for i in 1..300_000 {
        let w = i as f64 * 1e-5;
        let v = spectral_density(w, &sd);
        if v > best {
            best = v;
            wb = w;
        }
    }
    // d/dω[ω³√(ω_m²−ω²)] = 0 at ω = ω_m√3/2.
    assert!((wb - 1.5 * 3.0f64.sqrt()).abs() < 1e-4, "{wb}");
    assert_eq!(spectral_density(3.0, &sd), 0.0);
}

fn riemann_exponent(tau: f64, sd: &SpectralDensity, th: &ThermalState, n: usize) -> Complex64 {
    let h = (sd.omega_max - sd.omega_min) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let w = sd.omega_min + (i as f64 + 0.5) * h;
        let g = sd.eval(w) / (w * w);
        let coth = 1.0 / (0.5 * w / th.temperature).tanh();
        let coth = if th.temperature == 0.0 { 1.0 } else { coth };
        acc += Complex64::new(g * coth * ((w * tau).cos() - 1.0), -g * (w * tau).sin()) * h;
    }
    acc
}

#[test]
fn phonon_correlation_vs_riemann() {
    let sd = SpectralDensity::three_d(0.02, 3.0).unwrap();
    for th in [ThermalState::zero(), ThermalState::from_kelvin(10.0).unwrap(), ThermalState::from_kelvin(40.0).unwrap()] {
        for tau in [0.1, 1.0, 4.0, 20.0] {
            let a = phonon_correlation(tau, &sd, &th).unwrap();
            let b = riemann_exponent(tau, &sd, &th, 400_000).exp();
            assert!((a - b).norm() < 1e-5, "T={} tau={tau}: {a} vs {b}", th.temperature);
        }
    }
}

#[test]
fn phonon_correlation_limits() {
    let sd = SpectralDensity::three_d(0.05, 3.0).unwrap();
    let th = ThermalState::zero();
    assert_eq!(phonon_correlation(0.0, &sd, &th).unwrap(), Complex64::new(1.0, 0.0));
    let late = phonon_correlation(300.0, &sd, &th).unwrap();
    let fdw = debye_waller(&sd, &th).unwrap();
    assert!((late.norm() - fdw).abs() < 1e-4);
}

#[test]
fn closed_form_phonon_integrals() {
    let sd = SpectralDensity::three_d(0.07, 3.0).unwrap();
    // ∫λω√(ω_m²−ω²)/ω_m dω = λω_m²/3, ∫λω²√(ω_m²−ω²)/ω_m dω = λπω_m³/16.
    assert_relative_eq!(debye_waller(&sd, &ThermalState::zero()).unwrap(), (-0.07 * 3.0f64).exp(), max_relative = 1e-9);
    assert_relative_eq!(polaron_shift(&sd).unwrap(), 0.07 * std::f64::consts::PI * 27.0 / 16.0, max_relative = 1e-9);
    let none = SpectralDensity::three_d(0.0, 3.0).unwrap();
    assert_eq!(debye_waller(&none, &ThermalState::new(5.0).unwrap()).unwrap(), 1.0);
}

#[test]
fn debye_waller_monotone() {
    let mut prev = 1.0;
    for k in 0..=10 {
        let sd = SpectralDensity::three_d(0.05, 3.0).unwrap();
        let f = debye_waller(&sd, &ThermalState::from_kelvin(10.0 * k as f64).unwrap()).unwrap();
        assert!(f < prev);
        prev = f;
    }
}

#[test]
fn displacement_correlation_markov_substitution() {
    let kp = markov(0.2);
    let m = mol(1.0, 0.01);
    for tau in [0.0, 0.7, 5.0, 40.0] {
        let got = displacement_correlation_vibron(tau, &m, &kp, &ThermalState::zero()).unwrap();
        let z = Complex64::new(-0.1 * tau, -tau).exp();
        let want = (-1.0f64).exp() * z.exp();
        assert!((got - want).norm() < 1e-14);
    }
    let late = displacement_correlation_vibron(1e3, &m, &kp, &ThermalState::new(0.8).unwrap()).unwrap();
    let n = ThermalState::new(0.8).unwrap().occupation(1.0).unwrap();
    assert!((late.re - franck_condon(1.0, n)).abs() < 1e-12);
}

#[test]
fn bessel_form_detailed_balance_and_zero_temperature() {
    let th = ThermalState::new(0.6).unwrap();
    let s = absorption_bessel(&[], &mol(0.2, 0.05), &markov(0.1), &th).unwrap();
    let w = |p: f64| s.lines.iter().find(|l| (l.position - p).abs() < 1e-12).unwrap().weight;
    for n in 1..=3 {
        assert_relative_eq!(w(n as f64) / w(-(n as f64)), (n as f64 / 0.6).exp(), max_relative = 1e-10);
    }
    let cold = absorption_bessel(&[], &mol(0.7, 0.05), &markov(0.1), &ThermalState::zero()).unwrap();
    assert!(cold.lines.iter().all(|l| l.position >= 0.0));
    let l2 = 0.49f64;
    for l in &cold.lines {
        let n = l.position.round() as i32;
        let poisson = (-l2).exp() * l2.powi(n) / (1..=n).map(|k| k as f64).product::<f64>();
        assert_relative_eq!(l.weight, poisson, max_relative = 1e-12);
    }
}

#[test]
fn sum_rule_is_lambda_independent() {
    let g = grid(400.0, 0.01);
    let integral = |lambda: f64| {
        let s = absorption_discrete(&g, &mol(lambda, 0.05), &markov(0.1), &ThermalState::new(0.5).unwrap(), None).unwrap();
        s.values.iter().sum::<f64>() * 0.01 / (std::f64::consts::PI / 0.05)
    };
    let base = integral(0.0);
    for l in [0.5, 1.0, 1.5] {
        assert!((integral(l) / base - 1.0).abs() < 0.01);
    }
}

#[test]
fn sideband_suppression_with_relaxation() {
    let gamma = 0.025;
    let mut last = f64::INFINITY;
    for gm in [0.05, 0.1, 0.5, 1.0, 2.0] {
        let s = absorption_discrete(&[], &mol(1.0, gamma), &markov(gm), &ThermalState::zero(), None).unwrap();
        let r = s.eval(1.0) / s.eval(0.0);
        assert!(r < last);
        last = r;
    }
}

#[test]
fn full_lineshape_without_phonons_matches_line_sum() {
    let g = grid(3.0, 0.005);
    let kp = markov(0.1);
    let th = ThermalState::new(0.5).unwrap();
    let m = mol(0.8, 0.02);
    let full = absorption_full(&g, &m, &kp, None, &th).unwrap();
    let lines = absorption_discrete(&g, &m, &kp, &th, None).unwrap();
    assert!(peak_rel(&full.values, &lines.values) < 2e-3);
    let bare = absorption_full(&g, &mol(0.0, 0.02), &kp, None, &th).unwrap();
    let lor: Vec<f64> = g.iter().map(|d| 1.0 / (0.0004 + d * d)).collect();
    assert!(peak_rel(&bare.values, &lor) < 2e-3);
}

#[test]
fn coarse_grid_is_rejected() {
    let g = grid(1.0, 0.05);
    let r = absorption_full(&g, &mol(0.0, 0.02), &markov(0.1), None, &ThermalState::zero());
    assert!(matches!(r, Err(Error::Resolution(_))));
}

#[test]
fn wing_is_blue_at_zero_temperature() {
    let g = grid(5.0, 0.005);
    let sd = SpectralDensity::three_d(0.02, 3.0).unwrap();
    let r = absorption_full(&g, &mol(0.0, 0.01), &markov(0.1), Some(&sd), &ThermalState::zero()).unwrap();
    assert!(r.values.iter().all(|&v| v > 0.0));
    let wing = |x: f64| r.values[g.iter().position(|&d| (d - x).abs() < 1e-9).unwrap()] - r.f_dw / (1e-4 + x * x);
    for x in [0.5, 1.0, 2.0] {
        assert!(wing(x) > 50.0 * wing(-x).abs());
    }
    assert!(r.correlation.iter().all(|c| c.norm() <= 1.0 + 1e-12));
}

fn two_mode_correlation(tau: f64, modes: &[DiscreteMode], th: &ThermalState) -> Complex64 {
    let mut e = Complex64::new(0.0, 0.0);
    for m in modes {
        let c = 2.0 * th.occupation(m.omega).unwrap() + 1.0;
        let l2 = m.lambda * m.lambda;
        e += Complex64::new(c * (m.omega * tau).cos(), -(m.omega * tau).sin()) * (l2 * (-m.damping * tau).exp()) - l2 * c;
    }
    e.exp()
}

#[test]
fn two_mode_lines_match_time_domain() {
    let th = ThermalState::new(0.9).unwrap();
    let gamma = 0.02;
    let modes = [
        DiscreteMode { omega: 1.0, lambda: 0.5, damping: 0.03 },
        DiscreteMode { omega: 1.7, lambda: 0.3, damping: 0.05 },
    ];
    let g = grid(6.0, 0.005);
    let lines = absorption_multimode_discrete(&g, gamma, &modes, &th).unwrap();
    let fg = FftGrid::for_lineshape(gamma, Some(1.7), None, 6.0).unwrap();
    let corr: Vec<Complex64> = (0..fg.samples).map(|m| two_mode_correlation(m as f64 * fg.dt, &modes, &th)).collect();
    let (f, v) = damped_transform(&corr, gamma, &fg);
    let fft: Vec<f64> = g.iter().map(|&d| interpolate(&f, &v, d).re / gamma).collect();
    assert!(peak_rel(&fft, &lines.values) < 1e-3, "{}", peak_rel(&fft, &lines.values));
}

#[test]
fn single_mode_oracle_reduces_to_line_sum() {
    let th = ThermalState::new(0.7).unwrap();
    let g = grid(3.0, 0.01);
    let one = absorption_multimode_discrete(&g, 0.03, &[DiscreteMode { omega: 1.0, lambda: 0.6, damping: 0.0 }], &th).unwrap();
    let two = absorption_discrete(&g, &mol(0.6, 0.03), &markov(0.0), &th, None).unwrap();
    assert!(peak_rel(&one.values, &two.values) < 1e-13);
    let flat = absorption_multimode_discrete(&g, 0.03, &[DiscreteMode { omega: 1.0, lambda: 0.0, damping: 0.0 }; 3], &th).unwrap();
    let lor: Vec<f64> = g.iter().map(|d| 1.0 / (0.0009 + d * d)).collect();
    assert!(peak_rel(&flat.values, &lor) < 1e-14);
    let five = [DiscreteMode { omega: 1.0, lambda: 0.1, damping: 0.0 }; 5];
    assert!(matches!(absorption_multimode_discrete(&g, 0.03, &five, &th), Err(Error::Unsupported(_))));
}

#[test]
fn dephasing_limits() {
    let sd = SpectralDensity::three_d(0.02, 3.0).unwrap();
    assert_eq!(dephasing_rate(0.0, &sd, &ThermalState::zero()).unwrap(), 0.0);
    let a = dephasing_rate(1e-3, &sd, &ThermalState::zero()).unwrap();
    let b = dephasing_rate(2e-3, &sd, &ThermalState::zero()).unwrap();
    assert!((b / a - 2.0).abs() < 1e-3);
}

#[test]
fn symmetric_spectrum_is_a_mirror_fixed_point() {
    let x = grid(2.0, 0.1);
    let y: Vec<f64> = x.iter().map(|v| (-v * v).exp()).collect();
    let (x2, y2) = mirror_emission(&x, &y, 0.0);
    for (a, b) in x2.iter().zip(&x) {
        assert!((a - b).abs() < 1e-15);
    }
    assert_eq!(y2, y);
}

proptest! {
    #[test]
    fn completeness(lambda in 0.0f64..2.0, nbar in 0.0f64..5.0) {
        let th = ThermalState::from_occupation(nbar, 1.0).unwrap();
        let s = absorption_discrete(&[], &mol(lambda, 0.05), &markov(0.1), &th, None).unwrap();
        prop_assert!((s.total_weight() - 1.0).abs() < 1e-8);
        prop_assert!(s.lines.iter().all(|l| l.weight >= 0.0 && l.width > 0.0));
        prop_assert!(s.tail < 1e-8);
    }

    #[test]
    fn spectra_nonnegative(lambda in 0.0f64..1.5, t in 0.0f64..3.0, d in -5.0f64..5.0) {
        let th = ThermalState::new(t).unwrap();
        let s = absorption_discrete(&[d], &mol(lambda, 0.05), &KernelParams::new(0.1, 1.3, 1.0).unwrap(), &th, None).unwrap();
        prop_assert!(s.values[0] >= 0.0);
    }

    #[test]
    fn vibron_correlation_bounded(lambda in 0.01f64..1.5, t in 0.0f64..3.0, tau in 0.01f64..100.0) {
        let th = ThermalState::new(t).unwrap();
        let c = displacement_correlation_vibron(tau, &mol(lambda, 0.05), &markov(0.1), &th).unwrap();
        prop_assert!(c.norm() < 1.0);
    }

    #[test]
    fn franck_condon_decreasing(lambda in 0.01f64..2.0, n in 0.0f64..5.0, dn in 0.01f64..2.0) {
        prop_assert!(franck_condon(lambda, n + dn) < franck_condon(lambda, n));
    }

    #[test]
    fn mirror_involution(zpl in -3.0f64..3.0, ys in proptest::collection::vec(0.0f64..10.0, 2..30)) {
        let x: Vec<f64> = (0..ys.len()).map(|i| i as f64 * 0.3 - 2.0).collect();
        let (a, b) = mirror_emission(&x, &ys, zpl);
        let (c, d) = mirror_emission(&a, &b, zpl);
        for (u, v) in c.iter().zip(&x) { prop_assert!((u - v).abs() < 1e-12); }
        prop_assert_eq!(d, ys);
    }
}
