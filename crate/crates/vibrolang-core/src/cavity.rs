//! Cavity transmission, polariton splitting, Purcell antiresonance and
//! vibration-mediated polariton cross-talk.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{check_finite, check_nonneg, check_positive, Error, Result};
use crate::kernels::KernelParams;
use crate::model::{MoleculeParams, SpectralDensity, ThermalState};
use crate::spectra::{absorption_discrete, absorption_full, franck_condon};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    pub omega_c: f64,
    /// Half-linewidth κ.
    pub kappa: f64,
    pub g: f64,
    pub eta_c: f64,
    pub omega_l: f64,
}

impl CavityParams {
    pub fn new(omega_c: f64, kappa: f64, g: f64, eta_c: f64, omega_l: f64) -> Result<Self> {
        check_finite("omega_c", omega_c)?;
        check_positive("kappa", kappa)?;
        check_nonneg("g", g)?;
        check_finite("eta_c", eta_c)?;
        check_finite("omega_l", omega_l)?;
        Ok(CavityParams { omega_c, kappa, g, eta_c, omega_l })
    }
}

/// Complex molecular response H on a probe-detuning grid measured from ω̃₀.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularResponse {
    pub detunings: Vec<f64>,
    pub h: Vec<Complex64>,
    pub polaron_shift: f64,
    pub f_fc: f64,
    pub f_dw: f64,
    /// Γ′ of the vibron (0 without vibronic coupling).
    pub gamma_prime: f64,
}

/// H(x) = ∫₀^∞ e^{−(γ − ix)τ}⟨𝒟𝒟†⟩⟨ℬℬ†⟩ dτ. Line sum without phonons, FFT with.
pub fn molecular_response(
    grid: &[f64],
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
    sd: Option<&SpectralDensity>,
) -> Result<MolecularResponse> {
    let nbar = thermal.occupation(kp.nu)?;
    let f_fc = franck_condon(molecule.lambda, nbar);
    let gamma_prime = if molecule.lambda == 0.0 { 0.0 } else { crate::kernels::effective_params(kp)?.1 };
    match sd.filter(|s| s.coupling > 0.0) {
        None => {
            let s = absorption_discrete(&[], molecule, kp, thermal, None)?;
            let h = grid
                .iter()
                .map(|&x| {
                    s.lines
                        .iter()
                        .map(|l| l.weight / Complex64::new(l.width, -(x - l.position)))
                        .sum()
                })
                .collect();
            Ok(MolecularResponse { detunings: grid.to_vec(), h, polaron_shift: 0.0, f_fc, f_dw: 1.0, gamma_prime })
        }
        Some(s) => {
            let r = absorption_full(grid, molecule, kp, Some(s), thermal)?;
            Ok(MolecularResponse {
                detunings: r.detunings,
                h: r.response,
                polaron_shift: r.polaron_shift,
                f_fc,
                f_dw: r.f_dw,
                gamma_prime,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    /// Probe detuning from ω̃₀.
    pub detunings: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub abs2: Vec<f64>,
    /// Cavity detuning ω_c − ω̃₀.
    pub cavity_detuning: f64,
    pub g_eff: f64,
    pub response: MolecularResponse,
    /// Set when Γ′ < κ, where the factorized treatment is questionable.
    pub factorization_warning: bool,
}

/// 𝒯(x) = κ/[g²H(x) − i(x − δ_c) + κ] with δ_c = ω_c − ω̃₀.
pub fn transmission(
    grid: &[f64],
    cavity: &CavityParams,
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
    sd: Option<&SpectralDensity>,
) -> Result<Transmission> {
    let response = molecular_response(grid, molecule, kp, thermal, sd)?;
    Ok(transmission_from_response(cavity, molecule, response))
}

pub fn transmission_from_response(
    cavity: &CavityParams,
    molecule: &MoleculeParams,
    response: MolecularResponse,
) -> Transmission {
    let dc = cavity.omega_c - (molecule.omega0 - response.polaron_shift);
    let g2 = cavity.g * cavity.g;
    let amplitude: Vec<Complex64> = response
        .detunings
        .iter()
        .zip(&response.h)
        .map(|(&x, &h)| cavity.kappa / (h * g2 + Complex64::new(cavity.kappa, -(x - dc))))
        .collect();
    let abs2 = amplitude.iter().map(|t| t.norm_sqr()).collect();
    let warn = molecule.lambda > 0.0 && response.gamma_prime < cavity.kappa;
    Transmission {
        detunings: response.detunings.clone(),
        amplitude,
        abs2,
        cavity_detuning: dc,
        g_eff: effective_rabi(cavity.g, response.f_fc, response.f_dw),
        response,
        factorization_warning: warn,
    }
}

pub fn effective_rabi(g: f64, f_fc: f64, f_dw: f64) -> f64 {
    g * libm::sqrt(f_fc * f_dw)
}

pub fn cooperativity(g: f64, kappa: f64, gamma: f64) -> f64 {
    g * g / (kappa * gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub value: f64,
}

/// Local maxima refined by a parabola through the three neighbouring samples.
pub fn find_peaks(x: &[f64], y: &[f64]) -> Vec<Peak> {
    let mut out = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        if y[i] > y[i - 1] && y[i] >= y[i + 1] {
            out.push(parabola(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]));
        }
    }
    out
}

fn parabola(x0: f64, x1: f64, x2: f64, y0: f64, y1: f64, y2: f64) -> Peak {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a == 0.0 {
        return Peak { position: x1, value: y1 };
    }
    let b = d01 - a * (x0 + x1);
    let xp = -b / (2.0 * a);
    let c = y1 - a * x1 * x1 - b * x1;
    Peak { position: xp, value: a * xp * xp + b * xp + c }
}

/// Distance between the two highest transmission maxima.
pub fn polariton_splitting(x: &[f64], y: &[f64]) -> Option<f64> {
    let mut p = find_peaks(x, y);
    if p.len() < 2 {
        return None;
    }
    p.sort_by(|a, b| b.value.total_cmp(&a.value));
    Some((p[0].position - p[1].position).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Antiresonance {
    pub position: f64,
    /// Peak of 1 − |𝒯/𝒯_c|².
    pub depth: f64,
    /// Minimum of |𝒯|².
    pub min_abs2: f64,
    pub hwhm: f64,
}

/// Dip of |𝒯|² relative to the bare cavity 𝒯_c = κ/(κ − i(x − δ_c)).
pub fn antiresonance(t: &Transmission, kappa: f64) -> Result<Antiresonance> {
    let x = &t.detunings;
    let d: Vec<f64> = x
        .iter()
        .zip(&t.amplitude)
        .map(|(&xi, a)| {
            let tc = kappa / Complex64::new(kappa, -(xi - t.cavity_detuning));
            1.0 - (a / tc).norm_sqr()
        })
        .collect();
    let (i, _) = d
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Domain("empty grid".into()))?;
    if i == 0 || i + 1 >= d.len() {
        return Err(Error::Resolution("antiresonance at the grid edge".into()));
    }
    let top = parabola(x[i - 1], x[i], x[i + 1], d[i - 1], d[i], d[i + 1]);
    let half = 0.5 * top.value;
    let cross = |step: isize| -> Result<f64> {
        let mut j = i as isize;
        loop {
            let k = j + step;
            if k < 0 || k as usize >= d.len() {
                return Err(Error::Resolution("dip half-depth not reached inside the grid".into()));
            }
            let (a, b) = (d[j as usize], d[k as usize]);
            if b <= half {
                let f = (a - half) / (a - b);
                return Ok(x[j as usize] + f * (x[k as usize] - x[j as usize]));
            }
            j = k;
        }
    };
    let (l, r) = (cross(-1)?, cross(1)?);
    let min_abs2 = t.abs2.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Antiresonance { position: top.position, depth: top.value, min_abs2, hwhm: 0.5 * (r - l) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonRates {
    /// Near-resonant single-term forms.
    pub main: (f64, f64),
    /// Forms including the counter-rotating term.
    pub two_term: (f64, f64),
    /// λν ≤ 0.1(ω₊ − ω₋).
    pub valid: bool,
}

impl PolaritonRates {
    /// (κ₊, κ₋) in the default two-term form.
    pub fn rates(&self) -> (f64, f64) {
        self.two_term
    }
}

/// Vibration-mediated transfer rates between upper and lower polaritons,
/// with Markovian vibron damping Γ_m.
pub fn polariton_rates(
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
    omega_plus: f64,
    omega_minus: f64,
) -> Result<PolaritonRates> {
    check_finite("omega_plus", omega_plus)?;
    check_finite("omega_minus", omega_minus)?;
    let nu = molecule.nu;
    let n = thermal.occupation(nu)?;
    let gm = kp.gamma_m;
    let split = omega_plus - omega_minus;
    let pre = 0.25 * molecule.lambda * molecule.lambda * nu * nu * gm;
    let h2 = 0.25 * gm * gm;
    let lm = 1.0 / (h2 + (split - nu) * (split - nu));
    let lp = 1.0 / (h2 + (split + nu) * (split + nu));
    if !(lm.is_finite() && lp.is_finite()) {
        return Err(Error::Domain(format!("rates singular for gamma_m = {gm} at exact resonance")));
    }
    Ok(PolaritonRates {
        main: (pre * (n + 1.0) * lm, pre * n * lm),
        two_term: (pre * ((n + 1.0) * lm + n * lp), pre * ((n + 1.0) * lp + n * lm)),
        valid: molecule.lambda * nu <= 0.1 * split.abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolaritonState {
    pub p_u: Vec<f64>,
    pub p_l: Vec<f64>,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub gamma_pm: (f64, f64),
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

/// Closed-form solution of Ṗ_U = −(2γ₊+κ₊)P_U + κ₋P_L, Ṗ_L = −(2γ₋+κ₋)P_L + κ₊P_U.
pub fn polariton_populations(
    times: &[f64],
    init: (f64, f64),
    gamma_pm: (f64, f64),
    rates: (f64, f64),
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_nonneg("gamma_plus", gamma_pm.0)?;
    check_nonneg("gamma_minus", gamma_pm.1)?;
    check_nonneg("kappa_plus", rates.0)?;
    check_nonneg("kappa_minus", rates.1)?;
    check_nonneg("P_U(0)", init.0)?;
    check_nonneg("P_L(0)", init.1)?;
    let a = -(2.0 * gamma_pm.0 + rates.0);
    let b = rates.1;
    let c = rates.0;
    let d = -(2.0 * gamma_pm.1 + rates.1);
    let m = 0.5 * (a + d);
    let s = libm::sqrt(0.25 * (a - d) * (a - d) + b * c);
    let mut pu = Vec::with_capacity(times.len());
    let mut pl = Vec::with_capacity(times.len());
    for &t in times {
        check_nonneg("t", t)?;
        let lo = libm::exp((m - s) * t);
        // e^{mt}cosh(st) and e^{mt}sinh(st)/s without overflow or 0/0.
        let ch = lo * (1.0 + 0.5 * libm::expm1(2.0 * s * t));
        let sh = if s * t < 1e-8 { libm::exp(m * t) * t } else { lo * libm::expm1(2.0 * s * t) / (2.0 * s) };
        pu.push(ch * init.0 + sh * ((a - m) * init.0 + b * init.1));
        pl.push(ch * init.1 + sh * (c * init.0 + (d - m) * init.1));
    }
    Ok((pu, pl))
}

/// Populations with polariton frequencies ω± = ±g about the bare resonance.
pub fn polariton_state(
    times: &[f64],
    init: (f64, f64),
    cavity: &CavityParams,
    molecule: &MoleculeParams,
    kp: &KernelParams,
    thermal: &ThermalState,
) -> Result<PolaritonState> {
    let (wp, wm) = (cavity.g, -cavity.g);
    let r = polariton_rates(molecule, kp, thermal, wp, wm)?.rates();
    let gpm = 0.5 * (cavity.kappa + molecule.gamma);
    let (p_u, p_l) = polariton_populations(times, init, (gpm, gpm), r)?;
    Ok(PolaritonState {
        p_u,
        p_l,
        omega_plus: wp,
        omega_minus: wm,
        gamma_pm: (gpm, gpm),
        kappa_plus: r.0,
        kappa_minus: r.1,
    })
}
