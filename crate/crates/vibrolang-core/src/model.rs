//! Physical parameter types, the 1D host chain and thermal occupations.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{check_finite, check_nonneg, check_positive, param, Error, Result};

/// Electronic two-level system with one vibron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoleculeParams {
    pub omega0: f64,
    pub gamma: f64,
    pub nu: f64,
    pub lambda: f64,
    pub eta_l: f64,
}

impl MoleculeParams {
    pub fn new(omega0: f64, gamma: f64, nu: f64, lambda: f64, eta_l: f64) -> Result<Self> {
        check_finite("omega0", omega0)?;
        check_positive("gamma", gamma)?;
        check_positive("nu", nu)?;
        check_nonneg("lambda", lambda)?;
        check_nonneg("eta_l", eta_l)?;
        Ok(MoleculeParams { omega0, gamma, nu, lambda, eta_l })
    }

    /// True when the drive is no longer weak compared to γ.
    pub fn strong_drive(&self) -> bool {
        self.eta_l >= self.gamma
    }

    /// Reference excited-state population of a resonantly driven two-level system.
    pub fn p0(&self) -> f64 {
        self.eta_l * self.eta_l / (self.gamma * self.gamma)
    }
}

/// Finite 1D host chain with the molecule at site N+1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteChain {
    pub n: usize,
    pub k0: f64,
    pub m0: f64,
    pub dk: f64,
    pub ktot: f64,
    pub dx: f64,
    pub mu: f64,
    /// ω_k/γ_k^ph; `f64::INFINITY` for undamped phonons.
    pub qfactor: f64,
}

impl DiscreteChain {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(param("n", "chain needs N >= 1"));
        }
        check_positive("k0", self.k0)?;
        check_positive("m0", self.m0)?;
        check_positive("mu", self.mu)?;
        check_nonneg("dk", self.dk)?;
        check_nonneg("ktot", self.ktot)?;
        check_finite("dx", self.dx)?;
        if !(self.qfactor > 0.0) {
            return Err(param("qfactor", "must be > 0 or infinite"));
        }
        Ok(())
    }

    /// Chain with m₀ = μ = 1 whose continuum limit has the given ω_max and Γ_m.
    pub fn from_continuum(n: usize, omega_max: f64, gamma_m: f64, qfactor: f64) -> Result<Self> {
        check_positive("omega_max", omega_max)?;
        check_nonneg("gamma_m", gamma_m)?;
        let m0 = 1.0;
        let k0 = m0 * omega_max * omega_max / 4.0;
        let dk = k0 * libm::sqrt(4.0 * gamma_m / omega_max);
        let c = DiscreteChain { n, k0, m0, dk, ktot: 0.0, dx: 0.0, mu: m0, qfactor };
        c.validate()?;
        Ok(c)
    }

    pub fn omega_max(&self) -> f64 {
        2.0 * libm::sqrt(self.k0 / self.m0)
    }

    pub fn mode_count(&self) -> usize {
        2 * self.n + 1
    }

    /// ω_k = ω_max sin(πk/(2(2N+2))), k = 1..2N+1.
    pub fn frequencies(&self) -> Vec<f64> {
        let wm = self.omega_max();
        let denom = 2.0 * (2.0 * self.n as f64 + 2.0);
        (1..=self.mode_count()).map(|k| wm * libm::sin(PI * k as f64 / denom)).collect()
    }

    fn u_zpm(&self, omega_k: f64) -> f64 {
        libm::sqrt(1.0 / (2.0 * self.m0 * omega_k))
    }

    /// Vibron-phonon couplings α_k for a molecule at site N+1.
    pub fn vibron_couplings(&self, freqs: &[f64], nu: f64) -> Vec<f64> {
        let np1 = self.n as f64 + 1.0;
        let x_zpm = libm::sqrt(1.0 / (2.0 * self.mu * nu));
        freqs
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let k = (i + 1) as f64;
                2.0 * self.dk
                    * libm::sqrt(1.0 / np1)
                    * parity_cos(i + 1)
                    * libm::sin(PI * k / (2.0 * np1))
                    * self.u_zpm(w)
                    * x_zpm
            })
            .collect()
    }

    /// Couplings (α_{k,1}, α_{k,2}) of two molecules at sites N+1-j and N+1+j.
    pub fn pair_couplings(&self, freqs: &[f64], nu: f64, j: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if j == 0 || j + 1 > self.n {
            return Err(Error::Domain(format!("pair half-separation j={j} must satisfy 1 <= j <= N-1")));
        }
        let np1 = self.n as f64 + 1.0;
        let x_zpm = libm::sqrt(1.0 / (2.0 * self.mu * nu));
        let mut a1 = Vec::with_capacity(freqs.len());
        let mut a2 = Vec::with_capacity(freqs.len());
        let jf = j as f64;
        for (i, &w) in freqs.iter().enumerate() {
            let k = (i + 1) as f64;
            let pre = 2.0 * self.dk * libm::sqrt(1.0 / np1)
                * libm::sin(PI * k / (2.0 * np1))
                * self.u_zpm(w)
                * x_zpm;
            a1.push(pre * libm::cos(PI * k * (np1 - jf) / (2.0 * np1)));
            a2.push(pre * libm::cos(PI * k * (np1 + jf) / (2.0 * np1)));
        }
        Ok((a1, a2))
    }

    /// Electron-phonon couplings λ_k.
    pub fn electron_couplings(&self, freqs: &[f64]) -> Vec<f64> {
        let np1 = self.n as f64 + 1.0;
        freqs
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let k = (i + 1) as f64;
                2.0 * (self.ktot / w)
                    * libm::sqrt(1.0 / np1)
                    * parity_cos(i + 1)
                    * libm::sin(PI * k / (2.0 * np1))
                    * self.u_zpm(w)
                    * self.dx
            })
            .collect()
    }

    /// Coupling constant of the 1D spectral density implied by k_tot, Δx and m₀.
    pub fn one_d_coupling(&self) -> f64 {
        let wm = self.omega_max();
        16.0 * self.ktot * self.ktot * self.dx * self.dx / (PI * self.m0 * wm * wm * wm)
    }

    /// Frequency shift ν_s and Markovian rate Γ_m = 2νν_s/ω_max.
    pub fn markov_params(&self, nu: f64) -> (f64, f64) {
        let nu_s = self.dk * self.dk / (2.0 * self.k0 * self.mu * nu);
        (nu_s, 2.0 * nu * nu_s / self.omega_max())
    }

    /// The equivalent form Γ_m = Δk²ω_max/(4k₀²), valid for μ = m₀.
    pub fn gamma_m_alt(&self) -> f64 {
        self.dk * self.dk * self.omega_max() / (4.0 * self.k0 * self.k0)
    }
}

/// cos(πk/2) evaluated exactly for integer k.
fn parity_cos(k: usize) -> f64 {
    match k % 4 {
        0 => 1.0,
        2 => -1.0,
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathMode {
    Discrete(DiscreteChain),
    Continuum { omega_max: f64, gamma_m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononBathSpec {
    pub mode: BathMode,
    pub temperature: f64,
}

impl PhononBathSpec {
    pub fn discrete(&self) -> Result<&DiscreteChain> {
        match &self.mode {
            BathMode::Discrete(c) => Ok(c),
            BathMode::Continuum { .. } => Err(Error::Variant("operation needs a discrete chain")),
        }
    }

    /// (ω_max, Γ_m) of the bath, reducing a discrete chain with μ = m₀.
    pub fn continuum(&self, nu: f64) -> (f64, f64) {
        match self.mode {
            BathMode::Discrete(c) => (c.omega_max(), c.markov_params(nu).1),
            BathMode::Continuum { omega_max, gamma_m } => (omega_max, gamma_m),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainModes {
    pub frequencies: Vec<f64>,
    pub alpha: Vec<f64>,
    pub lambda_k: Vec<f64>,
}

impl ChainModes {
    pub fn new(chain: &DiscreteChain, nu: f64) -> Result<Self> {
        chain.validate()?;
        check_positive("nu", nu)?;
        let frequencies = chain.frequencies();
        let alpha = chain.vibron_couplings(&frequencies, nu);
        let lambda_k = chain.electron_couplings(&frequencies);
        Ok(ChainModes { frequencies, alpha, lambda_k })
    }
}

pub fn chain_eigenmodes(spec: &PhononBathSpec) -> Result<Vec<f64>> {
    let c = spec.discrete()?;
    c.validate()?;
    Ok(c.frequencies())
}

pub fn vibron_phonon_couplings(spec: &PhononBathSpec, modes: &[f64], nu: f64) -> Result<Vec<f64>> {
    Ok(spec.discrete()?.vibron_couplings(modes, nu))
}

pub fn electron_phonon_couplings(spec: &PhononBathSpec, modes: &[f64]) -> Result<Vec<f64>> {
    Ok(spec.discrete()?.electron_couplings(modes))
}

pub fn derived_markov_params(spec: &PhononBathSpec, nu: f64) -> Result<(f64, f64)> {
    check_positive("nu", nu)?;
    Ok(spec.discrete()?.markov_params(nu))
}

/// k_B·(1 K)/ħ in rad/ps, for frequencies quoted in THz.
pub const KELVIN: f64 = 0.130_920_5;

/// Temperature in energy units (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub temperature: f64,
    pub beta: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        check_nonneg("temperature", temperature)?;
        let beta = if temperature == 0.0 { f64::INFINITY } else { 1.0 / temperature };
        Ok(ThermalState { temperature, beta })
    }

    pub fn from_kelvin(kelvin: f64) -> Result<Self> {
        check_nonneg("temperature_k", kelvin)?;
        Self::new(kelvin * KELVIN)
    }

    pub fn zero() -> Self {
        ThermalState { temperature: 0.0, beta: f64::INFINITY }
    }

    /// State whose occupation at `omega` equals `nbar`.
    pub fn from_occupation(nbar: f64, omega: f64) -> Result<Self> {
        check_nonneg("nbar", nbar)?;
        check_positive("omega", omega)?;
        if nbar == 0.0 {
            return Ok(Self::zero());
        }
        Self::new(omega / libm::log1p(1.0 / nbar))
    }

    pub fn occupation(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("occupation needs omega > 0, got {omega}")));
        }
        Ok(self.occupation_unchecked(omega))
    }

    pub(crate) fn occupation_unchecked(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            0.0
        } else {
            1.0 / libm::expm1(omega * self.beta)
        }
    }

    /// coth(βω/2) for ω > 0, 1 at T = 0.
    pub(crate) fn coth_half(&self, omega: f64) -> f64 {
        2.0 * self.occupation_unchecked(omega) + 1.0
    }
}

pub fn occupation(omega: f64, thermal: &ThermalState) -> Result<f64> {
    thermal.occupation(omega)
}

/// Dimensionality of the electron-phonon spectral density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    OneD,
    ThreeD,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub kind: Dimension,
    pub coupling: f64,
    pub omega_max: f64,
    pub omega_min: f64,
}

impl SpectralDensity {
    /// Effective number of chain sites used for the default 1D infrared cutoff.
    pub const N_EFF: f64 = 1.0e4;

    pub fn new(kind: Dimension, coupling: f64, omega_max: f64, omega_min: f64) -> Result<Self> {
        check_nonneg("coupling", coupling)?;
        check_positive("omega_max", omega_max)?;
        check_finite("omega_max", omega_max)?;
        check_nonneg("omega_min", omega_min)?;
        if omega_min >= omega_max {
            return Err(param("omega_min", "must be below omega_max"));
        }
        if kind == Dimension::ThreeD && omega_min != 0.0 {
            return Err(param("omega_min", "only used for 1D densities"));
        }
        Ok(SpectralDensity { kind, coupling, omega_max, omega_min })
    }

    pub fn one_d(coupling: f64, omega_max: f64) -> Result<Self> {
        Self::new(Dimension::OneD, coupling, omega_max, omega_max / Self::N_EFF)
    }

    pub fn three_d(coupling: f64, omega_max: f64) -> Result<Self> {
        Self::new(Dimension::ThreeD, coupling, omega_max, 0.0)
    }

    /// 1D density without an infrared cutoff, whose Debye-Waller integral diverges.
    pub fn divergent(&self) -> bool {
        self.kind == Dimension::OneD && self.omega_min == 0.0 && self.coupling > 0.0
    }

    /// J(ω), zero outside (ω_min, ω_max).
    pub fn eval(&self, omega: f64) -> f64 {
        if omega <= self.omega_min || omega >= self.omega_max || omega <= 0.0 {
            return 0.0;
        }
        let edge = libm::sqrt(self.omega_max * self.omega_max - omega * omega) / self.omega_max;
        match self.kind {
            Dimension::OneD => self.coupling * omega * edge,
            Dimension::ThreeD => self.coupling * omega * omega * omega * edge,
        }
    }
}
