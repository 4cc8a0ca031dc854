use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;
use rustfft::num_complex::Complex64 as C;
use rustfft::FftPlanner;
use vibrolang_core::kernels::*;
use vibrolang_core::model::*;
use vibrolang_core::Error;

fn markov_chain() -> DiscreteChain {
    DiscreteChain::from_continuum(500, 7.0, 0.05, f64::INFINITY).unwrap()
}

#[test]
fn band_edge_mode_near_omega_max() {
    let f = markov_chain().frequencies();
    let top = f.iter().cloned().fold(0.0, f64::max);
    assert!((top / 7.0 - 1.0).abs() < 1e-3);
    assert_eq!(f.len(), 1001);
}

#[test]
fn discrete_kernel_at_origin() {
    let modes = ChainModes::new(&markov_chain(), 1.0).unwrap();
    let sum: f64 = modes.frequencies.iter().zip(&modes.alpha).map(|(w, a)| a * a / w).sum();
    assert!((sum / (0.05 * 7.0 / 2.0) - 1.0).abs() < 0.01);
}

#[test]
fn discrete_spectral_weight_matches_1d_density() {
    let chain = DiscreteChain { n: 500, k0: 4.0, m0: 1.0, dk: 0.0, ktot: 1.3, dx: 0.02, mu: 1.0, qfactor: f64::INFINITY };
    let modes = ChainModes::new(&chain, 1.0).unwrap();
    let discrete: f64 = modes.frequencies.iter().zip(&modes.lambda_k).map(|(w, l)| l * l * w * w).sum();
    // ∫₀^{ω_max} λω√(ω_max²−ω²)/ω_max dω = λω_max²/3.
    let wm = chain.omega_max();
    let continuum = chain.one_d_coupling() * wm * wm / 3.0;
    assert!((discrete / continuum - 1.0).abs() < 0.02, "{discrete} vs {continuum}");
}

#[test]
fn coupling_inversion_for_markov_chain() {
    let c = markov_chain();
    assert_relative_eq!(c.dk / c.k0, (1.0f64 / 35.0).sqrt(), max_relative = 1e-14);
    let (_, gm) = c.markov_params(1.0);
    assert_relative_eq!(gm, 0.05, max_relative = 1e-14);
    assert_relative_eq!(c.gamma_m_alt(), gm, max_relative = 1e-14);
}

#[test]
fn occupation_values() {
    let th = ThermalState::new(2.0).unwrap();
    assert_relative_eq!(th.occupation(2.0).unwrap(), 1.0 / (std::f64::consts::E - 1.0), max_relative = 1e-15);
    assert_relative_eq!(th.occupation(2.0).unwrap(), 0.58198, max_relative = 1e-5);
    let hot = ThermalState::new(50.0).unwrap();
    assert!((hot.occupation(1.0).unwrap() / 50.0 - 1.0).abs() < 0.01);
    assert_eq!(ThermalState::zero().occupation(3.0).unwrap(), 0.0);
    assert!(matches!(th.occupation(0.0), Err(Error::Domain(_))));
}

#[test]
fn continuum_spec_rejected_by_discrete_ops() {
    let spec = PhononBathSpec { mode: BathMode::Continuum { omega_max: 3.0, gamma_m: 0.1 }, temperature: 0.0 };
    assert!(matches!(chain_eigenmodes(&spec), Err(Error::Variant(_))));
}

#[test]
fn first_kernel_zero() {
    let kp = KernelParams::new(0.05, 7.0, 1.0).unwrap();
    // Bisection on a sign change of Γ(t).
    let (mut a, mut b) = (0.1 / 7.0, 5.0 / 7.0);
    assert!(gamma_time(a, &kp) > 0.0 && gamma_time(b, &kp) < 0.0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if gamma_time(m, &kp) > 0.0 { a = m } else { b = m }
    }
    assert!((7.0 * a - 3.831_705_970_207_512).abs() < 1e-9);
}

fn half_line_fft(f: impl Fn(f64) -> f64, dt: f64, n: usize) -> Vec<C> {
    let mut buf: Vec<C> = (0..n).map(|m| C::new(if m == 0 { 0.5 } else { 1.0 } * dt * f(m as f64 * dt), 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

#[test]
fn kernel_fourier_transform_at_nu() {
    let kp = KernelParams::new(0.05, 7.0, 1.0).unwrap();
    let n = 1 << 22;
    // dω = 2π/(n dt) chosen so that ω = ν falls on bin 2^14.
    let dt = 2.0 * PI * 16384.0 / n as f64;
    let v = half_line_fft(|t| gamma_time(t, &kp), dt, n)[16384];
    let g = gamma_freq(1.0, &kp).value();
    assert!((C::new(g.re, g.im) - v).norm() / g.norm() < 1e-3);
}

#[test]
fn collective_kernel_peak_delay() {
    let kp = KernelParams::new(1.0, 2.0, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for j in 1..=4u32 {
        let (mut best, mut tb) = (f64::MIN, 0.0);
        for i in 1..20000 {
            let t = i as f64 * 0.001;
            let v = collective_gamma_time(t, j, &kp).unwrap();
            if v > best {
                best = v;
                tb = t;
            }
        }
        let expect = 4.0 * j as f64 / 2.0;
        let off = (tb / expect - 1.0).abs();
        assert!(off < 0.25 && off < last, "j={j}: {tb} vs {expect}");
        last = off;
    }
}

#[test]
fn non_markovian_susceptibility_peak() {
    let kp = KernelParams::new(0.1, 1.4, 1.0).unwrap();
    let (nu_p, _) = effective_params(&kp).unwrap();
    let ws: Vec<f64> = (1..140_000).map(|i| i as f64 * 1e-5).collect();
    let y: Vec<f64> = ws.iter().map(|&w| susceptibility(w, &kp).norm_sqr()).collect();
    let i = (0..y.len()).max_by(|&a, &b| y[a].total_cmp(&y[b])).unwrap();
    assert!(ws[i] > 1.0);
    assert!((ws[i] / nu_p - 1.0).abs() < 0.01);
    let half = y[i] / 2.0;
    let l = (0..i).rev().find(|&k| y[k] < half).unwrap();
    let r = (i..y.len()).find(|&k| y[k] < half).unwrap();
    assert!(ws[r] - ws[l] < 0.1);
}

#[test]
fn effective_params_near_cutoff() {
    let kp = KernelParams::new(0.1, 1.3, 1.0).unwrap();
    let (nu_p, g_p) = effective_params(&kp).unwrap();
    let want = (1.0f64 + 0.1 / 1.3).sqrt();
    assert_relative_eq!(nu_p, want, max_relative = 1e-14);
    assert_relative_eq!(nu_p, 1.0377, max_relative = 1e-4);
    assert_relative_eq!(g_p, 0.1 * (1.0 - (want / 1.3).powi(2)).sqrt(), max_relative = 1e-14);
    assert!(matches!(effective_params(&KernelParams::new(0.1, 0.9, 1.0).unwrap()), Err(Error::Regime(_))));
    assert_eq!(effective_params(&KernelParams::markovian(0.1, 1.0).unwrap()).unwrap(), (1.0, 0.1));
}

#[test]
fn variance_sum_rule_near_markov() {
    let kp = KernelParams::new(1e-4, 10.0, 1.0).unwrap();
    let v = momentum_correlation_numeric(0.0, &kp, &ThermalState::zero()).unwrap();
    assert!((v.re - 0.5).abs() < 1e-4 && v.im.abs() < 1e-4, "{v}");
}

#[test]
fn closed_form_near_markov() {
    let kp = KernelParams::new(1e-3, 10.0, 1.0).unwrap();
    let th = ThermalState::zero();
    let (mut e, mut s) = (0.0, 0.0);
    for i in 0..=40 {
        let t = i as f64 * 0.25;
        let a = momentum_correlation(t, &kp, &th).unwrap();
        let b = momentum_correlation_numeric(t, &kp, &th).unwrap();
        e += (a - b).norm_sqr();
        s += b.norm_sqr();
    }
    assert!((e / s).sqrt() < 1e-3, "{}", (e / s).sqrt());
}

#[test]
fn numeric_correlation_hermitian() {
    let kp = KernelParams::new(0.1, 1.3, 1.0).unwrap();
    let th = ThermalState::from_occupation(1.0, 1.0).unwrap();
    for t in [0.3, 2.0, 11.0] {
        let a = momentum_correlation_numeric(t, &kp, &th).unwrap();
        let b = momentum_correlation_numeric(-t, &kp, &th).unwrap();
        assert!((a - b.conj()).norm() < 1e-9);
    }
}

#[test]
fn thermal_spectrum_limits() {
    let kp = KernelParams::new(0.05, 200.0, 1.0).unwrap();
    assert!((thermal_spectrum(1.0, &kp, &ThermalState::zero()) / 0.1 - 1.0).abs() < 1e-4);
    assert_eq!(thermal_spectrum(-1.0, &kp, &ThermalState::zero()), 0.0);
    assert_eq!(thermal_spectrum(250.0, &kp, &ThermalState::new(1.0).unwrap()), 0.0);
}

proptest! {
    #[test]
    fn in_band_kernel_has_unit_modulus(x in -0.999f64..0.999, gm in 0.01f64..2.0, wm in 0.5f64..20.0) {
        let kp = KernelParams::new(gm, wm, 1.0).unwrap();
        let g = gamma_freq(x * wm, &kp);
        prop_assert!(g.real >= 0.0);
        prop_assert!((g.value().norm() / gm - 1.0).abs() < 1e-12);
        for j in 1..=3 {
            let c = collective_gamma_freq(x * wm, j, &kp).unwrap();
            prop_assert!((c.norm() / gm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn detailed_balance(w in 0.01f64..2.9, t in 0.05f64..10.0) {
        let kp = KernelParams::new(0.2, 3.0, 1.0).unwrap();
        let th = ThermalState::new(t).unwrap();
        let ratio = thermal_spectrum(-w, &kp, &th) / thermal_spectrum(w, &kp, &th);
        prop_assert!((ratio / (-w / t).exp() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn susceptibility_reality(w in -5.0f64..5.0, gm in 0.01f64..1.0) {
        let kp = KernelParams::new(gm, 3.0, 1.0).unwrap();
        let a = susceptibility(w, &kp);
        let b = susceptibility(-w, &kp);
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn chain_modes_shape(n in 1usize..200, wm in 0.5f64..10.0) {
        let c = DiscreteChain::from_continuum(n, wm, 0.1, f64::INFINITY).unwrap();
        let m = ChainModes::new(&c, 1.0).unwrap();
        prop_assert!(m.frequencies.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(m.frequencies.iter().all(|&w| w > 0.0 && w <= wm * (1.0 + 1e-12)));
        for (k, a) in m.alpha.iter().enumerate() {
            if (k + 1) % 2 == 1 { prop_assert_eq!(*a, 0.0); }
        }
    }

    #[test]
    fn closed_form_bounded_by_variance(t in 0.0f64..50.0, n in 0.0f64..4.0) {
        let kp = KernelParams::new(0.1, 1.3, 1.0).unwrap();
        let th = ThermalState::from_occupation(n, 1.0).unwrap();
        let c = momentum_correlation(t, &kp, &th).unwrap();
        prop_assert!(c.norm() <= n + 0.5 + 1e-12);
    }
}
