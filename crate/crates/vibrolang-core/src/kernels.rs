//! Brownian memory kernels, susceptibility, thermal spectrum and momentum correlations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_nonneg, check_positive, Error, Result};
use crate::model::{ChainModes, ThermalState};
use crate::quad::{integrate, QuadOptions};
use crate::special::{bessel_j_over_x, chebyshev_t, chebyshev_u};

/// Continuum kernel parameters. `omega_max = f64::INFINITY` is the Markovian limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub gamma_m: f64,
    pub omega_max: f64,
    pub nu: f64,
    pub nu_tilde: f64,
}

impl KernelParams {
    pub fn new(gamma_m: f64, omega_max: f64, nu: f64) -> Result<Self> {
        check_nonneg("gamma_m", gamma_m)?;
        check_positive("omega_max", omega_max)?;
        check_positive("nu", nu)?;
        let nu_s = if omega_max.is_finite() { gamma_m * omega_max / (2.0 * nu) } else { 0.0 };
        Ok(KernelParams { gamma_m, omega_max, nu, nu_tilde: nu - nu_s })
    }

    pub fn markovian(gamma_m: f64, nu: f64) -> Result<Self> {
        Self::new(gamma_m, f64::INFINITY, nu)
    }

    pub fn is_markovian(&self) -> bool {
        self.omega_max.is_infinite()
    }

    /// Γ_m > ν: the oscillator is no longer underdamped.
    pub fn bad_oscillator(&self) -> bool {
        self.gamma_m > self.nu
    }
}

/// Γ(ω) = Γ_r(ω) + iΓ_i(ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexKernel {
    pub real: f64,
    pub imag: f64,
}

impl ComplexKernel {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.real, self.imag)
    }
}

/// Γ(t) = Γ_m J₁(ω_max t)/t for t > 0, zero for t < 0.
pub fn gamma_time(t: f64, kp: &KernelParams) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    if kp.is_markovian() {
        return if t == 0.0 { f64::INFINITY } else { 0.0 };
    }
    kp.gamma_m * kp.omega_max * bessel_j_over_x(1, kp.omega_max * t)
}

/// Fourier transform of `gamma_time`, including the out-of-band branch.
pub fn gamma_freq(omega: f64, kp: &KernelParams) -> ComplexKernel {
    if kp.is_markovian() {
        return ComplexKernel { real: kp.gamma_m, imag: 0.0 };
    }
    let wm = kp.omega_max;
    if omega.abs() <= wm {
        ComplexKernel {
            real: kp.gamma_m * libm::sqrt(wm * wm - omega * omega) / wm,
            imag: kp.gamma_m * omega / wm,
        }
    } else {
        let root = libm::sqrt(omega * omega - wm * wm);
        ComplexKernel { real: 0.0, imag: kp.gamma_m * (omega - omega.signum() * root) / wm }
    }
}

fn check_j(j: u32) -> Result<()> {
    if j < 1 {
        Err(Error::Domain(format!("half-separation j must be >= 1, got {j}")))
    } else {
        Ok(())
    }
}

/// Γ₁₂(t) = Γ_m 4j J_{4j}(ω_max t)/t for t > 0.
pub fn collective_gamma_time(t: f64, j: u32, kp: &KernelParams) -> Result<f64> {
    check_j(j)?;
    if t < 0.0 || kp.is_markovian() {
        return Ok(0.0);
    }
    let order = 4 * j;
    Ok(kp.gamma_m * order as f64 * kp.omega_max * bessel_j_over_x(order, kp.omega_max * t))
}

/// In-band Γ₁₂(ω) = Γ_m[T_{4j}(x) − i U_{4j−1}(x)√(1−x²)], x = ω/ω_max.
pub fn collective_gamma_freq(omega: f64, j: u32, kp: &KernelParams) -> Result<Complex64> {
    check_j(j)?;
    if kp.is_markovian() {
        return Ok(Complex64::new(kp.gamma_m, 0.0));
    }
    let x = omega / kp.omega_max;
    if x.abs() > 1.0 {
        return Err(Error::Unsupported(format!(
            "collective kernel is only defined in band, |omega| = {} > omega_max = {}",
            omega.abs(),
            kp.omega_max
        )));
    }
    let order = 4 * j;
    let re = chebyshev_t(order, x);
    let im = -chebyshev_u(order - 1, x) * libm::sqrt(1.0 - x * x);
    Ok(Complex64::new(re, im) * kp.gamma_m)
}

/// Finite-chain kernel Σ α_k² ν/ω_k cos(ω_k t).
pub fn discrete_gamma_time(t: f64, modes: &ChainModes, nu: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    modes
        .frequencies
        .iter()
        .zip(&modes.alpha)
        .map(|(&w, &a)| a * a * nu / w * libm::cos(w * t))
        .sum()
}

/// Finite-chain cross kernel Σ α_{k,1} α_{k,2} ν/ω_k cos(ω_k t).
pub fn discrete_collective_gamma_time(t: f64, freqs: &[f64], a1: &[f64], a2: &[f64], nu: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    freqs
        .iter()
        .zip(a1.iter().zip(a2))
        .map(|(&w, (&x, &y))| x * y * nu / w * libm::cos(w * t))
        .sum()
}

/// χ(ω) = −iω [ν² − ω² − iΓ(ω)ω]⁻¹.
pub fn susceptibility(omega: f64, kp: &KernelParams) -> Complex64 {
    let g = gamma_freq(omega, kp).value();
    let i = Complex64::new(0.0, 1.0);
    let den = Complex64::new(kp.nu * kp.nu - omega * omega, 0.0) - i * g * omega;
    -i * omega / den
}

/// S_th(ω) = Γ_r(ω) ω/ν [coth(βω/2) + 1].
pub fn thermal_spectrum(omega: f64, kp: &KernelParams, thermal: &ThermalState) -> f64 {
    let gr = gamma_freq(omega, kp).real;
    if gr == 0.0 {
        return 0.0;
    }
    if omega == 0.0 {
        return gr * 2.0 * thermal.temperature / kp.nu;
    }
    let w = omega.abs();
    let n = thermal.occupation_unchecked(w);
    let factor = if omega > 0.0 { 2.0 * (n + 1.0) } else { 2.0 * n };
    gr * w / kp.nu * factor
}

/// Pole-approximation frequency ν′ = √(ν² + Γ_i(ν)ν) and width Γ′ = Γ_r(ν′).
pub fn effective_params(kp: &KernelParams) -> Result<(f64, f64)> {
    if kp.omega_max <= kp.nu {
        return Err(Error::Regime(format!(
            "pole approximation needs omega_max > nu (omega_max = {}, nu = {})",
            kp.omega_max, kp.nu
        )));
    }
    let nu = kp.nu;
    let nu_p = libm::sqrt(nu * nu + gamma_freq(nu, kp).imag * nu);
    Ok((nu_p, gamma_freq(nu_p, kp).real))
}

/// Closed-form ⟨P(τ)P(0)⟩ = [(n̄+½)cos ν′τ − (i/2) sin ν′τ] e^{−Γ′|τ|/2}.
pub fn momentum_correlation(tau: f64, kp: &KernelParams, thermal: &ThermalState) -> Result<Complex64> {
    let (nu_p, g_p) = effective_params(kp)?;
    let n = thermal.occupation_unchecked(kp.nu);
    let ph = nu_p * tau;
    Ok(Complex64::new((n + 0.5) * libm::cos(ph), -0.5 * libm::sin(ph)) * libm::exp(-0.5 * g_p * tau.abs()))
}

/// Quadrature of (1/2π) ∫ |χ(ω)|² S_th(ω) e^{−iωτ} dω over the band.
pub fn momentum_correlation_numeric(tau: f64, kp: &KernelParams, thermal: &ThermalState) -> Result<Complex64> {
    momentum_correlation_numeric_with(tau, kp, thermal, QuadOptions { abs_tol: 1e-11, rel_tol: 1e-10, max_segments: 50_000 })
}

pub fn momentum_correlation_numeric_with(
    tau: f64,
    kp: &KernelParams,
    thermal: &ThermalState,
    opts: QuadOptions,
) -> Result<Complex64> {
    if kp.is_markovian() {
        return Err(Error::Unsupported(
            "the momentum variance diverges for a flat kernel; use a finite omega_max".into(),
        ));
    }
    let wm = kp.omega_max;
    let mut pts = vec![-wm, 0.0, wm];
    let nu = kp.nu;
    let mut poles = Vec::new();
    if kp.gamma_m < wm {
        poles.push(nu / libm::sqrt(1.0 - kp.gamma_m / wm));
    }
    poles.push(nu);
    for p in poles {
        if p < wm {
            pts.push(p);
            pts.push(-p);
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    let f = |w: f64| {
        let chi = susceptibility(w, kp);
        Complex64::from_polar(chi.norm_sqr() * thermal_spectrum(w, kp, thermal), -w * tau)
    };
    let r = integrate(f, &pts, opts)?;
    Ok(r.value / (2.0 * PI))
}
