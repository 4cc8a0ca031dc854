//! Absorption lineshapes: vibronic sidebands, phonon wings, Franck-Condon and
//! Debye-Waller factors, dephasing.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_positive, Error, Result};
use crate::fft::{fft_in_place, next_pow2};
use crate::kernels::{effective_params, KernelParams};
use crate::model::{Dimension, MoleculeParams, SpectralDensity, ThermalState};
use crate::quad::{integrate, QuadOptions};
use crate::special::{ln_bessel_i, ln_binomial, ln_factorial, poisson_upper_tail};

/// Tail weight targeted by the adaptive truncation.
pub const TAIL_TARGET: f64 = 1e-8;
/// Largest tail weight accepted for a user-supplied truncation.
pub const TAIL_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub position: f64,
    pub weight: f64,
    pub width: f64,
}

/// Lorentzian line list, sampled on a detuning grid.
///
/// A line contributes weight·(width/γ)/(width² + (Δ − position)²), so the
/// two-level value at resonance is 1/γ² = 𝒫₀/η².
#[derive(Debug, Clone, PartialEq)]
pub struct LineSpectrum {
    pub lines: Vec<Line>,
    pub detunings: Vec<f64>,
    pub values: Vec<f64>,
    pub gamma: f64,
    pub reference: f64,
    pub n_max: usize,
    pub tail: f64,
    /// False when the form used is outside its stated validity.
    pub valid: bool,
}

impl LineSpectrum {
    fn build(lines: Vec<Line>, grid: &[f64], gamma: f64, n_max: usize, tail: f64, valid: bool) -> Self {
        let mut s = LineSpectrum {
            lines,
            detunings: grid.to_vec(),
            values: Vec::new(),
            gamma,
            reference: 1.0 / (gamma * gamma),
            n_max,
            tail,
            valid,
        };
        s.values = grid.iter().map(|&d| s.eval(d)).collect();
        s
    }

    pub fn eval(&self, delta: f64) -> f64 {
        self.lines
            .iter()
            .map(|l| {
                let x = delta - l.position;
                l.weight * (l.width / self.gamma) / (l.width * l.width + x * x)
            })
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }
}

pub fn franck_condon(lambda: f64, nbar: f64) -> f64 {
    libm::exp(-lambda * lambda * (1.0 + 2.0 * nbar))
}

/// Poisson×binomial weight L(n)B(n,l).
pub fn line_weight(n: u64, l: u64, lambda: f64, nbar: f64) -> f64 {
    if l > n {
        return 0.0;
    }
    if lambda == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if nbar == 0.0 {
        return if l == 0 {
            libm::exp(-lambda * lambda + 2.0 * n as f64 * libm::log(lambda) - ln_factorial(n))
        } else {
            0.0
        };
    }
    let x0 = lambda * lambda * (1.0 + 2.0 * nbar);
    libm::exp(
        -x0 + 2.0 * n as f64 * libm::log(lambda) - ln_factorial(n)
            + ln_binomial(n, l)
            + (n - l) as f64 * libm::log1p(nbar)
            + l as f64 * libm::log(nbar),
    )
}

/// Truncation order with Poisson tail below `TAIL_TARGET`.
pub fn truncation_order(lambda: f64, nbar: f64) -> (usize, f64) {
    let x = lambda * lambda * (1.0 + 2.0 * nbar);
    let mut n = libm::ceil(x + 10.0 * libm::sqrt(x) + 10.0) as usize;
    loop {
        let tail = poisson_upper_tail(x, n as u64);
        if tail < TAIL_TARGET {
            return (n, tail);
        }
        n += 5;
    }
}

/// exp[−2λ²(⟨P²⟩ − ⟨P(τ)P(0)⟩)] with the closed-form momentum correlation.
pub fn displacement_correlation_vibron(
    tau: f64,
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
) -> Result<Complex64> {
    let l2 = molecule.lambda * molecule.lambda;
    if l2 == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (nu_p, g_p) = effective_params(kp)?;
    let n = thermal.occupation_unchecked(kp.nu);
    Ok(vibron_factor(tau, l2, n, nu_p, g_p))
}

fn vibron_factor(tau: f64, l2: f64, n: f64, nu_p: f64, g_p: f64) -> Complex64 {
    let ph = nu_p * tau;
    let e = libm::exp(-0.5 * g_p * tau.abs());
    let z = Complex64::new((2.0 * n + 1.0) * libm::cos(ph), -libm::sin(ph)) * (l2 * e);
    (z - l2 * (2.0 * n + 1.0)).exp()
}

fn vibron_setup(molecule: &MoleculeParams, kp: &KernelParams, thermal: &ThermalState) -> Result<(f64, f64, f64)> {
    if (molecule.nu - kp.nu).abs() > 1e-12 * molecule.nu {
        return Err(Error::Domain(format!("molecule nu = {} differs from kernel nu = {}", molecule.nu, kp.nu)));
    }
    let (nu_p, g_p) = if molecule.lambda == 0.0 { (kp.nu, 0.0) } else { effective_params(kp)? };
    Ok((thermal.occupation_unchecked(kp.nu), nu_p, g_p))
}

/// Double sum over n, l with L(n)B(n,l) weights, widths γ + nΓ′/2 and positions (n − 2l)ν′.
pub fn absorption_discrete(
    grid: &[f64],
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
    n_max: Option<usize>,
) -> Result<LineSpectrum> {
    let (nbar, nu_p, g_p) = vibron_setup(molecule, kp, thermal)?;
    let lambda = molecule.lambda;
    let x = lambda * lambda * (1.0 + 2.0 * nbar);
    let (n_max, tail) = match n_max {
        Some(n) => {
            let tail = poisson_upper_tail(x, n as u64);
            if tail > TAIL_LIMIT {
                return Err(Error::Truncation { tail, limit: TAIL_LIMIT, n_max: n });
            }
            (n, tail)
        }
        None => truncation_order(lambda, nbar),
    };
    let n_max = if lambda == 0.0 { 0 } else { n_max };
    let mut lines = Vec::new();
    for n in 0..=n_max as u64 {
        let l_top = if nbar == 0.0 { 0 } else { n };
        for l in 0..=l_top {
            let w = line_weight(n, l, lambda, nbar);
            if w > 0.0 {
                lines.push(Line {
                    position: (n as f64 - 2.0 * l as f64) * nu_p,
                    weight: w,
                    width: molecule.gamma + n as f64 * g_p / 2.0,
                });
            }
        }
    }
    Ok(LineSpectrum::build(lines, grid, molecule.gamma, n_max, tail, true))
}

/// Single sum with modified-Bessel weights f_FC((n̄+1)/n̄)^{n/2} I_n(2λ²√(n̄(n̄+1))).
pub fn absorption_bessel(
    grid: &[f64],
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
) -> Result<LineSpectrum> {
    let (nbar, nu_p, g_p) = vibron_setup(molecule, kp, thermal)?;
    let lambda = molecule.lambda;
    let l2 = lambda * lambda;
    let arg = 2.0 * l2 * libm::sqrt(nbar * (nbar + 1.0));
    let (n_max, tail) = if lambda == 0.0 { (0, 0.0) } else { truncation_order(lambda, nbar) };
    let ffc = franck_condon(lambda, nbar);
    let mut lines = Vec::new();
    let n_lo = if nbar == 0.0 { 0 } else { -(n_max as i64) };
    for n in n_lo..=n_max as i64 {
        let m = n.unsigned_abs();
        let w = if nbar == 0.0 {
            if l2 == 0.0 {
                if n == 0 { 1.0 } else { 0.0 }
            } else {
                libm::exp(-l2 + 2.0 * m as f64 * libm::log(lambda) - ln_factorial(m))
            }
        } else {
            ffc * libm::exp(0.5 * n as f64 * libm::log1p(1.0 / nbar) + ln_bessel_i(m as u32, arg))
        };
        if w > 0.0 {
            lines.push(Line {
                position: n as f64 * nu_p,
                weight: w,
                width: molecule.gamma + m as f64 * g_p / 2.0,
            });
        }
    }
    Ok(LineSpectrum::build(lines, grid, molecule.gamma, n_max, tail, arg <= 0.1))
}

/// J(ω) of the electron-phonon coupling.
pub fn spectral_density(omega: f64, sd: &SpectralDensity) -> f64 {
    sd.eval(omega)
}

fn sd_opts() -> QuadOptions {
    QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_segments: 200_000 }
}

fn check_convergent(sd: &SpectralDensity, thermal: &ThermalState, what: &str) -> Result<()> {
    if sd.divergent() && thermal.temperature > 0.0 {
        return Err(Error::Divergent(format!(
            "{what}: 1D spectral density with omega_min = 0 at T > 0 (set an infrared cutoff)"
        )));
    }
    Ok(())
}

/// J(ω)/ω² · coth(βω/2), with its finite ω → 0 limit.
fn g_coth(omega: f64, sd: &SpectralDensity, thermal: &ThermalState) -> f64 {
    if omega <= 0.0 {
        return if sd.kind == Dimension::ThreeD { sd.coupling * 2.0 * thermal.temperature } else { 0.0 };
    }
    let j = sd.eval(omega);
    if j == 0.0 {
        return 0.0;
    }
    j / (omega * omega) * thermal.coth_half(omega)
}

/// ∫ J(ω)/ω² [coth(βω/2)(cos ωτ − 1) − i sin ωτ] dω.
pub fn phonon_exponent(tau: f64, sd: &SpectralDensity, thermal: &ThermalState) -> Result<Complex64> {
    check_convergent(sd, thermal, "phonon correlation")?;
    if tau == 0.0 || sd.coupling == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let f = |w: f64| {
        if w <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let j = sd.eval(w);
        if j == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let g = j / (w * w);
        let s = libm::sin(w * tau);
        // cos − 1 = −2 sin²(ωτ/2), stable for small ωτ.
        let h = libm::sin(0.5 * w * tau);
        Complex64::new(-2.0 * h * h * g * thermal.coth_half(w), -g * s)
    };
    let pts = breakpoints(sd, tau);
    Ok(integrate(f, &pts, sd_opts())?.value)
}

fn breakpoints(sd: &SpectralDensity, tau: f64) -> Vec<f64> {
    let (a, b) = (sd.omega_min, sd.omega_max);
    let periods = libm::ceil((b - a) * tau.abs() / (2.0 * PI)).clamp(1.0, 20_000.0) as usize;
    let mut pts = Vec::with_capacity(periods + 2);
    if sd.kind == Dimension::OneD {
        // Geometric spacing near the infrared end.
        let mut w = a.max(b * 1e-12);
        pts.push(a);
        while w < b / 64.0 {
            w *= 4.0;
            if w < b / 64.0 {
                pts.push(w);
            }
        }
    }
    for i in 0..=periods {
        let w = a + (b - a) * i as f64 / periods as f64;
        if pts.last().is_none_or(|&p| w > p) {
            pts.push(w);
        }
    }
    pts
}

/// ⟨𝒟(τ)𝒟†(0)⟩.
pub fn phonon_correlation(tau: f64, sd: &SpectralDensity, thermal: &ThermalState) -> Result<Complex64> {
    Ok(phonon_exponent(tau, sd, thermal)?.exp())
}

/// f_DW = exp[−∫ J(ω)/ω² coth(βω/2) dω].
pub fn debye_waller(sd: &SpectralDensity, thermal: &ThermalState) -> Result<f64> {
    if sd.divergent() {
        return Err(Error::Divergent(
            "Debye-Waller integral of a 1D spectral density with omega_min = 0 diverges in the infrared".into(),
        ));
    }
    if sd.coupling == 0.0 {
        return Ok(1.0);
    }
    let pts = breakpoints(sd, 0.0);
    let r = integrate(|w: f64| g_coth(w, sd, thermal), &pts, sd_opts())?;
    Ok(libm::exp(-r.value))
}

/// Polaron shift ∫ J(ω)/ω dω, so that ω̃₀ = ω₀ − shift.
pub fn polaron_shift(sd: &SpectralDensity) -> Result<f64> {
    if sd.coupling == 0.0 {
        return Ok(0.0);
    }
    let pts = breakpoints(sd, 0.0);
    Ok(integrate(|w: f64| if w > 0.0 { sd.eval(w) / w } else { 0.0 }, &pts, sd_opts())?.value)
}

/// γ_deph(t) = ∫ J(ω)/ω coth(βω/2) sin(ωt) dω.
pub fn dephasing_rate(t: f64, sd: &SpectralDensity, thermal: &ThermalState) -> Result<f64> {
    check_convergent(sd, thermal, "dephasing rate")?;
    if t == 0.0 || sd.coupling == 0.0 {
        return Ok(0.0);
    }
    let pts = breakpoints(sd, t);
    let f = |w: f64| if w > 0.0 { sd.eval(w) / w * thermal.coth_half(w) * libm::sin(w * t) } else { 0.0 };
    Ok(integrate(f, &pts, sd_opts())?.value)
}

/// Single-mode dephasing rate as the coherence exponent per unit time,
/// λ²(2n̄+1)(1 − cos ω t)/t, which grows as λ²(n̄+½)ω²t at short times.
pub fn single_mode_dephasing(t: f64, lambda_k: f64, omega_k: f64, thermal: &ThermalState) -> Result<f64> {
    let n = thermal.occupation(omega_k)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let h = libm::sin(0.5 * omega_k * t);
    Ok(lambda_k * lambda_k * (2.0 * n + 1.0) * 2.0 * h * h / t)
}

/// Fourier grid used by the time-domain lineshape path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FftGrid {
    pub dt: f64,
    pub samples: usize,
    pub n_fft: usize,
}

impl FftGrid {
    /// dt = min(2π/(32ν), 1/(8ω_max)), horizon 12/γ, frequency spacing ≤ γ/16.
    /// `span` is the largest |Δ| requested and is kept below half the Nyquist frequency.
    pub fn for_lineshape(gamma: f64, nu: Option<f64>, omega_max: Option<f64>, span: f64) -> Result<Self> {
        check_positive("gamma", gamma)?;
        let mut dt = f64::INFINITY;
        if let Some(nu) = nu {
            dt = dt.min(2.0 * PI / (32.0 * nu));
        }
        if let Some(wm) = omega_max {
            dt = dt.min(1.0 / (8.0 * wm));
        }
        if span > 0.0 {
            dt = dt.min(PI / (2.0 * span));
        }
        if !dt.is_finite() {
            dt = 2.0 * PI / (32.0 * gamma);
        }
        let samples = libm::ceil(12.0 / (gamma * dt)) as usize + 1;
        let n_fft = next_pow2((2 * samples).max(libm::ceil(32.0 * PI / (gamma * dt)) as usize));
        if n_fft > 1 << 25 {
            return Err(Error::Resolution(format!("FFT of length {n_fft} needed; gamma too small for the band")));
        }
        Ok(FftGrid { dt, samples, n_fft })
    }

    pub fn d_omega(&self) -> f64 {
        2.0 * PI / (self.n_fft as f64 * self.dt)
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dt
    }
}

/// F(Δ) = ∫₀^∞ e^{−γτ + iΔτ} C(τ) dτ on the FFT frequency grid, returned in
/// ascending frequency order.
pub fn damped_transform(corr: &[Complex64], gamma: f64, grid: &FftGrid) -> (Vec<f64>, Vec<Complex64>) {
    let n = grid.n_fft;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (m, c) in corr.iter().enumerate().take(grid.samples.min(n)) {
        let tau = m as f64 * grid.dt;
        let w = if m == 0 { 0.5 } else { 1.0 };
        buf[m] = c * (w * grid.dt * libm::exp(-gamma * tau));
    }
    fft_in_place(&mut buf, 1);
    let dw = grid.d_omega();
    let mut freqs = Vec::with_capacity(n);
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + n / 2) % n;
        let jj = j as i64 - if j >= n / 2 { n as i64 } else { 0 };
        freqs.push(jj as f64 * dw);
        vals.push(buf[j]);
    }
    (freqs, vals)
}

/// Linear interpolation of a complex curve on an ascending uniform grid.
pub fn interpolate(freqs: &[f64], vals: &[Complex64], x: f64) -> Complex64 {
    let n = freqs.len();
    let dw = freqs[1] - freqs[0];
    let pos = (x - freqs[0]) / dw;
    if pos <= 0.0 {
        return vals[0];
    }
    let i = libm::floor(pos) as usize;
    if i + 1 >= n {
        return vals[n - 1];
    }
    let f = pos - i as f64;
    vals[i] * (1.0 - f) + vals[i + 1] * f
}

fn check_grid(grid: &[f64], gamma: f64, fg: &FftGrid) -> Result<()> {
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain("detuning grid must be strictly increasing".into()));
        }
        if w[1] - w[0] > gamma {
            return Err(Error::Resolution(format!(
                "grid spacing {} exceeds gamma = {gamma}; the zero-phonon line is not resolved",
                w[1] - w[0]
            )));
        }
    }
    if let (Some(a), Some(b)) = (grid.first(), grid.last()) {
        if a.abs().max(b.abs()) >= fg.nyquist() {
            return Err(Error::Resolution("detuning grid exceeds the sampling band".into()));
        }
    }
    Ok(())
}

/// Samples of ψ(τ) = ∫ J/ω² [(n̄+1)e^{−iωτ} + n̄ e^{iωτ}] dω on the FFT time grid.
fn phonon_psi(sd: &SpectralDensity, thermal: &ThermalState, grid: &FftGrid) -> Vec<Complex64> {
    let n = grid.n_fft;
    let dw = grid.d_omega();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, slot) in buf.iter_mut().enumerate() {
        let jj = j as i64 - if j >= n / 2 { n as i64 } else { 0 };
        let w = jj as f64 * dw;
        let a = w.abs();
        let g = if a == 0.0 {
            if sd.kind == Dimension::ThreeD { sd.coupling * thermal.temperature } else { 0.0 }
        } else {
            let jv = sd.eval(a);
            if jv == 0.0 {
                0.0
            } else {
                let nb = thermal.occupation_unchecked(a);
                jv / (a * a) * if w > 0.0 { nb + 1.0 } else { nb }
            }
        };
        *slot = Complex64::new(g * dw, 0.0);
    }
    fft_in_place(&mut buf, -1);
    buf
}

/// Time-domain lineshape result.
#[derive(Debug, Clone, PartialEq)]
pub struct PhononWingResult {
    pub detunings: Vec<f64>,
    pub values: Vec<f64>,
    /// Complex response ∫₀^∞ e^{−(γ − iΔ)τ}⟨ℬℬ†⟩⟨𝒟𝒟†⟩ dτ on the grid.
    pub response: Vec<Complex64>,
    pub tau: Vec<f64>,
    pub correlation: Vec<Complex64>,
    pub polaron_shift: f64,
    pub f_dw: f64,
    pub f_fc: f64,
    pub grid: FftGrid,
}

/// 𝒫_e/η² from the damped product correlation, detuning measured from ω̃₀.
pub fn absorption_full(
    grid: &[f64],
    molecule: &MoleculeParams,
    kp: &KernelParams,
    sd: Option<&SpectralDensity>,
    thermal: &ThermalState,
) -> Result<PhononWingResult> {
    let (nbar, nu_p, g_p) = vibron_setup(molecule, kp, thermal)?;
    let l2 = molecule.lambda * molecule.lambda;
    let sd = sd.filter(|s| s.coupling > 0.0);
    if let Some(s) = sd {
        if s.divergent() {
            return Err(Error::Divergent("1D spectral density needs omega_min > 0 for the lineshape".into()));
        }
    }
    let fg = FftGrid::for_lineshape(
        molecule.gamma,
        if l2 > 0.0 { Some(nu_p.max(kp.nu)) } else { None },
        sd.map(|s| s.omega_max),
        grid.iter().fold(0.0f64, |m, d| m.max(d.abs())),
    )?;
    check_grid(grid, molecule.gamma, &fg)?;
    let psi = sd.map(|s| phonon_psi(s, thermal, &fg));
    let mut corr = Vec::with_capacity(fg.samples);
    let mut dcorr = Vec::with_capacity(fg.samples);
    for m in 0..fg.samples {
        let tau = m as f64 * fg.dt;
        let b = if l2 > 0.0 { vibron_factor(tau, l2, nbar, nu_p, g_p) } else { Complex64::new(1.0, 0.0) };
        let d = match &psi {
            Some(p) => (p[m % fg.n_fft] - p[0]).exp(),
            None => Complex64::new(1.0, 0.0),
        };
        dcorr.push(d);
        corr.push(b * d);
    }
    let (freqs, vals) = damped_transform(&corr, molecule.gamma, &fg);
    let response: Vec<Complex64> = grid.iter().map(|&d| interpolate(&freqs, &vals, d)).collect();
    let values = response.iter().map(|r| r.re / molecule.gamma).collect();
    let (shift, f_dw) = match sd {
        Some(s) => (polaron_shift(s)?, debye_waller(s, thermal)?),
        None => (0.0, 1.0),
    };
    let tau = (0..fg.samples).map(|m| m as f64 * fg.dt).collect();
    Ok(PhononWingResult {
        detunings: grid.to_vec(),
        values,
        response,
        tau,
        correlation: dcorr,
        polaron_shift: shift,
        f_dw,
        f_fc: franck_condon(molecule.lambda, nbar),
        grid: fg,
    })
}

/// A discrete phonon mode for the multimode line-sum oracle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMode {
    pub omega: f64,
    pub lambda: f64,
    /// Correlation decay e^{−γ_k^ph|τ|}.
    pub damping: f64,
}

/// Multi-index line sum over ≤ 4 discrete modes, detuning from ω̃₀.
pub fn absorption_multimode_discrete(
    grid: &[f64],
    gamma: f64,
    modes: &[DiscreteMode],
    thermal: &ThermalState,
) -> Result<LineSpectrum> {
    check_positive("gamma", gamma)?;
    if modes.len() > 4 {
        return Err(Error::Unsupported(format!("{} modes exceed the combinatorial limit of 4", modes.len())));
    }
    let mut lines = vec![Line { position: 0.0, weight: 1.0, width: gamma }];
    let mut tail_total = 0.0;
    let mut n_top = 0;
    for m in modes {
        let nbar = thermal.occupation(m.omega)?;
        let (n_max, tail) = if m.lambda == 0.0 { (0, 0.0) } else { truncation_order(m.lambda, nbar) };
        tail_total += tail;
        n_top = n_top.max(n_max);
        let mut next = Vec::new();
        for base in &lines {
            for n in 0..=n_max as u64 {
                let l_top = if nbar == 0.0 { 0 } else { n };
                for l in 0..=l_top {
                    let w = line_weight(n, l, m.lambda, nbar);
                    if w > 1e-300 {
                        next.push(Line {
                            position: base.position + (n as f64 - 2.0 * l as f64) * m.omega,
                            weight: base.weight * w,
                            width: base.width + n as f64 * m.damping,
                        });
                    }
                }
            }
        }
        lines = next;
    }
    Ok(LineSpectrum::build(lines, grid, gamma, n_top, tail_total, true))
}

/// Emission as the mirror image of absorption about the zero-phonon line.
pub fn mirror_emission(detunings: &[f64], values: &[f64], zpl: f64) -> (Vec<f64>, Vec<f64>) {
    let x = detunings.iter().rev().map(|&d| 2.0 * zpl - d).collect();
    let y = values.iter().rev().copied().collect();
    (x, y)
}
