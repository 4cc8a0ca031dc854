//! Typed parameter blocks. Every struct rejects unknown keys.
//!
//! Frequencies share one angular unit chosen by the user (presets use rad/ps,
//! labelled THz). Temperatures are given in energy units, kelvin, or as a
//! mean occupation at a reference frequency.

use serde::{Deserialize, Serialize};
use vibrolang_core::cavity::CavityParams;
use vibrolang_core::kernels::KernelParams;
use vibrolang_core::microsim::{PhononInit, TrajectoryConfig};
use vibrolang_core::model::{DiscreteChain, Dimension, MoleculeParams, SpectralDensity, ThermalState};

use crate::error::{at, CliError, Result};

pub const MAX_GRID_POINTS: usize = 2_000_001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self, path: &str) -> Result<Vec<f64>> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(CliError::config(path, "needs finite min <= max"));
        }
        if !(self.step > 0.0) {
            return Err(CliError::config(&format!("{path}.step"), "must be > 0"));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() + 1.0;
        if n > MAX_GRID_POINTS as f64 {
            return Err(CliError::config(path, format!("{n} points exceed {MAX_GRID_POINTS}")));
        }
        Ok((0..n as usize).map(|i| self.min + i as f64 * self.step).collect())
    }
}

/// Exactly one of the three, or none for zero temperature.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thermal {
    /// k_B T in frequency units.
    pub temperature: Option<f64>,
    pub kelvin: Option<f64>,
    /// Occupation at the reference frequency of the command.
    pub nbar: Option<f64>,
}

impl Thermal {
    pub fn resolve(&self, path: &str, reference: Option<f64>) -> Result<ThermalState> {
        let given = [self.temperature.is_some(), self.kelvin.is_some(), self.nbar.is_some()];
        if given.iter().filter(|&&g| g).count() > 1 {
            return Err(CliError::config(path, "give only one of temperature, kelvin, nbar"));
        }
        if let Some(t) = self.temperature {
            return ThermalState::new(t).map_err(at(path));
        }
        if let Some(k) = self.kelvin {
            return ThermalState::from_kelvin(k).map_err(|_| CliError::config(&format!("{path}.kelvin"), "must be >= 0"));
        }
        if let Some(n) = self.nbar {
            let w = reference.ok_or_else(|| CliError::config(&format!("{path}.nbar"), "no reference frequency here"))?;
            return ThermalState::from_occupation(n, w).map_err(at(path));
        }
        Ok(ThermalState::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuumChain {
    pub n: usize,
    pub omega_max: f64,
    pub gamma_m: f64,
    /// null for undamped phonons.
    pub qfactor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitChain {
    pub n: usize,
    pub k0: f64,
    pub m0: f64,
    pub dk: f64,
    pub ktot: f64,
    pub dx: f64,
    pub mu: f64,
    pub qfactor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Chain {
    Continuum(ContinuumChain),
    Discrete(ExplicitChain),
}

impl Chain {
    pub fn build(&self, path: &str) -> Result<DiscreteChain> {
        match self {
            Chain::Continuum(c) => {
                let p = format!("{path}.continuum");
                DiscreteChain::from_continuum(c.n, c.omega_max, c.gamma_m, c.qfactor.unwrap_or(f64::INFINITY))
                    .map_err(at(&p))
            }
            Chain::Discrete(c) => {
                let d = DiscreteChain {
                    n: c.n,
                    k0: c.k0,
                    m0: c.m0,
                    dk: c.dk,
                    ktot: c.ktot,
                    dx: c.dx,
                    mu: c.mu,
                    qfactor: c.qfactor.unwrap_or(f64::INFINITY),
                };
                d.validate().map_err(at(&format!("{path}.discrete")))?;
                Ok(d)
            }
        }
    }

    /// Γ_m of the continuum limit.
    pub fn gamma_m(&self, chain: &DiscreteChain, nu: f64) -> f64 {
        match self {
            Chain::Continuum(c) => c.gamma_m,
            Chain::Discrete(_) => chain.markov_params(nu).1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PhononStart {
    #[default]
    Rest,
    /// Seeded thermal sample; `nbar` is not accepted here.
    Thermal(Thermal),
}

/// Time stepping shared by single and pair runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stepping {
    pub t_max: f64,
    /// Defaults to 2π/(40 ω_max).
    pub dt: Option<f64>,
    /// Defaults to about 2000 stored rows.
    pub record_every: Option<usize>,
}

impl Stepping {
    fn config(&self, path: &str, omega_max: f64, q0: [f64; 2], p0: [f64; 2], phonons: &PhononStart, seed: u64) -> Result<TrajectoryConfig> {
        let mut cfg = TrajectoryConfig::new(omega_max, self.t_max);
        if let Some(dt) = self.dt {
            cfg.dt = dt;
        }
        cfg.record_every = match self.record_every {
            Some(r) => r,
            None => ((self.t_max / cfg.dt / 2000.0).ceil() as usize).max(1),
        };
        cfg.q0 = q0;
        cfg.p0 = p0;
        cfg.phonons = match phonons {
            PhononStart::Rest => PhononInit::Rest,
            PhononStart::Thermal(t) => {
                let p = format!("{path}.phonons.thermal");
                if t.nbar.is_some() {
                    return Err(CliError::config(&format!("{p}.nbar"), "use temperature or kelvin"));
                }
                PhononInit::Thermal { temperature: t.resolve(&p, None)?.temperature, seed }
            }
        };
        cfg.validate(omega_max).map_err(at(path))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationParams {
    pub nu: f64,
    pub chain: Chain,
    pub t_max: f64,
    pub dt: Option<f64>,
    pub record_every: Option<usize>,
    #[serde(default = "one")]
    pub q0: f64,
    #[serde(default)]
    pub p0: f64,
    #[serde(default)]
    pub phonons: PhononStart,
    /// Also write E(0)e^{−Γ_m t}.
    #[serde(default = "yes")]
    pub theory: bool,
}

impl RelaxationParams {
    pub fn stepping(&self) -> Stepping {
        Stepping { t_max: self.t_max, dt: self.dt, record_every: self.record_every }
    }

    pub fn trajectory_config(&self, omega_max: f64, seed: u64) -> Result<TrajectoryConfig> {
        self.stepping().config("parameters", omega_max, [self.q0, 0.0], [self.p0, 0.0], &self.phonons, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelTables {
    pub gamma_m: f64,
    pub omega_max: f64,
    pub separations: Vec<u32>,
    pub t_max: f64,
    #[serde(default = "samples")]
    pub time_samples: usize,
    #[serde(default = "samples")]
    pub frequency_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairTrajectory {
    pub nu: f64,
    pub chain: Chain,
    /// j: molecules at sites N+1∓j.
    pub separation: usize,
    pub t_max: f64,
    pub dt: Option<f64>,
    pub record_every: Option<usize>,
    #[serde(default = "q_pair")]
    pub q0: [f64; 2],
    #[serde(default)]
    pub p0: [f64; 2],
    #[serde(default)]
    pub phonons: PhononStart,
}

impl PairTrajectory {
    pub fn trajectory_config(&self, omega_max: f64, seed: u64) -> Result<TrajectoryConfig> {
        let s = Stepping { t_max: self.t_max, dt: self.dt, record_every: self.record_every };
        s.config("parameters.trajectory", omega_max, self.q0, self.p0, &self.phonons, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectiveParams {
    pub kernels: Option<KernelTables>,
    pub trajectory: Option<PairTrajectory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Molecule {
    pub gamma: f64,
    pub nu: f64,
    #[serde(default)]
    pub lambda: f64,
}

impl Molecule {
    pub fn build(&self, path: &str) -> Result<MoleculeParams> {
        MoleculeParams::new(0.0, self.gamma, self.nu, self.lambda, 0.0).map_err(at(path))
    }
}

/// Vibron damping kernel; `omega_max: null` is the Markovian limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bath {
    pub gamma_m: f64,
    pub omega_max: Option<f64>,
}

impl Bath {
    pub fn build(&self, path: &str, nu: f64) -> Result<KernelParams> {
        KernelParams::new(self.gamma_m, self.omega_max.unwrap_or(f64::INFINITY), nu).map_err(at(path))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Double sum over n, l.
    #[default]
    Lines,
    /// Modified-Bessel single sum.
    Bessel,
    /// FFT of the damped correlation.
    Fft,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Correlation {
    pub t_max: f64,
    #[serde(default = "samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorptionParams {
    pub molecule: Molecule,
    pub bath: Bath,
    #[serde(default)]
    pub thermal: Thermal,
    pub detuning: Grid,
    #[serde(default)]
    pub method: Method,
    pub n_max: Option<usize>,
    /// Also write ⟨P(τ)P(0)⟩.
    pub correlation: Option<Correlation>,
    /// Also write the mirrored emission spectrum.
    #[serde(default)]
    pub emission: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "3d")]
    ThreeD,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Density {
    pub kind: Kind,
    pub coupling: f64,
    pub omega_max: f64,
    /// 1D infrared cutoff, default ω_max/10⁴.
    pub omega_min: Option<f64>,
}

impl Density {
    pub fn build(&self, path: &str) -> Result<SpectralDensity> {
        let (kind, wmin) = match self.kind {
            Kind::OneD => (Dimension::OneD, self.omega_min.unwrap_or(self.omega_max / SpectralDensity::N_EFF)),
            Kind::ThreeD => (Dimension::ThreeD, self.omega_min.unwrap_or(0.0)),
        };
        SpectralDensity::new(kind, self.coupling, self.omega_max, wmin).map_err(at(path))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vibron {
    pub nu: f64,
    pub lambda: f64,
    pub bath: Bath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhononWingParams {
    pub gamma: f64,
    pub spectral_density: Density,
    /// `nbar` refers to the band edge.
    #[serde(default)]
    pub thermal: Thermal,
    pub detuning: Option<Grid>,
    /// Temperatures in kelvin for an f_DW(T) table.
    pub debye_waller_kelvin: Option<Grid>,
    pub vibron: Option<Vibron>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cavity {
    pub kappa: f64,
    pub g: f64,
    /// ω_c − ω₀ before the polaron shift.
    #[serde(default)]
    pub detuning: f64,
}

impl Cavity {
    pub fn build(&self, path: &str) -> Result<CavityParams> {
        CavityParams::new(self.detuning, self.kappa, self.g, 1.0, 0.0).map_err(at(path))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityRunParams {
    pub molecule: Molecule,
    pub bath: Bath,
    pub cavity: Cavity,
    pub spectral_density: Option<Density>,
    /// `nbar` refers to the vibron.
    #[serde(default)]
    pub thermal: Thermal,
    pub detuning: Grid,
    /// Also write the λ = 0, phonon-free transmission.
    #[serde(default)]
    pub two_level_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolaritonParams {
    pub molecule: Molecule,
    pub gamma_m: f64,
    pub cavity: Cavity,
    #[serde(default)]
    pub thermal: Thermal,
    pub t_max: f64,
    #[serde(default = "samples")]
    pub samples: usize,
    /// (P_U, P_L) at t = 0.
    #[serde(default = "upper")]
    pub initial: [f64; 2],
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn samples() -> usize {
    1001
}

fn q_pair() -> [f64; 2] {
    [1.0, 0.0]
}

fn upper() -> [f64; 2] {
    [1.0, 0.0]
}
