//! Classical equations of motion for one or two vibrons on a finite chain.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_positive, param, Error, Result};
use crate::model::{ChainModes, DiscreteChain, MoleculeParams, ThermalState};
use crate::special::expm1_i_over;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhononInit {
    Rest,
    Thermal { temperature: f64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub dt: f64,
    pub t_max: f64,
    /// Store every n-th step.
    pub record_every: usize,
    pub q0: [f64; 2],
    pub p0: [f64; 2],
    pub phonons: PhononInit,
}

impl TrajectoryConfig {
    pub fn default_dt(omega_max: f64) -> f64 {
        2.0 * PI / (40.0 * omega_max)
    }

    /// Vibron at E = 1/2 (Q = 1, P = 0), phonons at rest.
    pub fn new(omega_max: f64, t_max: f64) -> Self {
        TrajectoryConfig {
            dt: Self::default_dt(omega_max),
            t_max,
            record_every: 1,
            q0: [1.0, 0.0],
            p0: [0.0, 0.0],
            phonons: PhononInit::Rest,
        }
    }

    pub fn validate(&self, omega_max: f64) -> Result<()> {
        check_positive("dt", self.dt)?;
        check_positive("t_max", self.t_max)?;
        let limit = 2.0 * PI / (20.0 * omega_max);
        if self.dt > limit {
            return Err(param("dt", format!("{} exceeds 2π/(20 ω_max) = {}", self.dt, limit)));
        }
        if self.record_every == 0 {
            return Err(param("record_every", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Per molecule.
    pub q: Vec<Vec<f64>>,
    pub p: Vec<Vec<f64>>,
    /// E_ν = (P² + Q²)/2 per molecule.
    pub energy: Vec<Vec<f64>>,
    /// Energies of Q± = Q₁ ± Q₂, P± = P₁ ± P₂ (pair runs only).
    pub e_plus: Vec<f64>,
    pub e_minus: Vec<f64>,
    /// Vibron + phonon + interaction energy.
    pub total_energy: Vec<f64>,
    pub seed: Option<u64>,
}

struct System {
    nus: Vec<f64>,
    omegas: Vec<f64>,
    damping: Vec<f64>,
    /// coupling[m][k]
    coupling: Vec<Vec<f64>>,
}

impl System {
    fn dims(&self) -> (usize, usize) {
        (self.nus.len(), self.omegas.len())
    }

    fn deriv(&self, y: &[f64], dy: &mut [f64]) {
        let (m, k) = self.dims();
        let (qv, rest) = y.split_at(m);
        let (pv, rest) = rest.split_at(m);
        let (qk, pk) = rest.split_at(k);
        let (dq, drest) = dy.split_at_mut(m);
        let (dp, drest) = drest.split_at_mut(m);
        let (dqk, dpk) = drest.split_at_mut(k);
        for i in 0..m {
            let a = &self.coupling[i];
            let mut force = 0.0;
            for j in 0..k {
                force += a[j] * qk[j];
            }
            dq[i] = self.nus[i] * pv[i];
            dp[i] = -self.nus[i] * qv[i] + force;
        }
        for j in 0..k {
            let w = self.omegas[j];
            let mut f = -w * qk[j] - self.damping[j] * pk[j];
            for i in 0..m {
                f += self.coupling[i][j] * qv[i];
            }
            dqk[j] = w * pk[j];
            dpk[j] = f;
        }
    }

    fn energies(&self, y: &[f64]) -> (f64, f64) {
        let (m, k) = self.dims();
        let mut quad = 0.0;
        let mut inter = 0.0;
        for i in 0..m {
            quad += 0.5 * self.nus[i] * (y[i] * y[i] + y[m + i] * y[m + i]);
        }
        for j in 0..k {
            let (q, p) = (y[2 * m + j], y[2 * m + k + j]);
            quad += 0.5 * self.omegas[j] * (q * q + p * p);
            for i in 0..m {
                inter -= self.coupling[i][j] * q * y[i];
            }
        }
        (quad, quad + inter)
    }
}

fn build(chain: &DiscreteChain, nus: Vec<f64>, couplings: Vec<Vec<f64>>, freqs: &[f64]) -> System {
    let keep: Vec<usize> = (0..freqs.len()).filter(|&k| couplings.iter().any(|a| a[k] != 0.0)).collect();
    let omegas: Vec<f64> = keep.iter().map(|&k| freqs[k]).collect();
    let damping = omegas
        .iter()
        .map(|w| if chain.qfactor.is_finite() { w / chain.qfactor } else { 0.0 })
        .collect();
    let coupling = couplings.iter().map(|a| keep.iter().map(|&k| a[k]).collect()).collect();
    System { nus, omegas, damping, coupling }
}

fn initial_state(sys: &System, cfg: &TrajectoryConfig) -> Result<(Vec<f64>, Option<u64>)> {
    let (m, k) = sys.dims();
    let mut y = vec![0.0; 2 * m + 2 * k];
    y[..m].copy_from_slice(&cfg.q0[..m]);
    y[m..2 * m].copy_from_slice(&cfg.p0[..m]);
    let mut seed = None;
    if let PhononInit::Thermal { temperature, seed: s } = cfg.phonons {
        let th = ThermalState::new(temperature)?;
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for j in 0..k {
            let sd = libm::sqrt(th.occupation_unchecked(sys.omegas[j]) + 0.5);
            let a: f64 = StandardNormal.sample(&mut rng);
            let b: f64 = StandardNormal.sample(&mut rng);
            y[2 * m + j] = sd * a;
            y[2 * m + k + j] = sd * b;
        }
        seed = Some(s);
    }
    Ok((y, seed))
}

fn integrate(sys: &System, cfg: &TrajectoryConfig, y: &mut [f64], seed: Option<u64>) -> Result<Trajectory> {
    let (m, _) = sys.dims();
    let len = y.len();
    let steps = libm::ceil(cfg.t_max / cfg.dt - 1e-9) as usize;
    let n_rec = steps / cfg.record_every + 1;
    let mut tr = Trajectory {
        times: Vec::with_capacity(n_rec),
        q: vec![Vec::with_capacity(n_rec); m],
        p: vec![Vec::with_capacity(n_rec); m],
        energy: vec![Vec::with_capacity(n_rec); m],
        e_plus: Vec::new(),
        e_minus: Vec::new(),
        total_energy: Vec::with_capacity(n_rec),
        seed,
    };
    let (quad0, _) = sys.energies(y);
    let record = |tr: &mut Trajectory, y: &[f64], t: f64| -> Result<()> {
        tr.times.push(t);
        for i in 0..m {
            tr.q[i].push(y[i]);
            tr.p[i].push(y[m + i]);
            tr.energy[i].push(0.5 * (y[i] * y[i] + y[m + i] * y[m + i]));
        }
        if m == 2 {
            let (qp, pp) = (y[0] + y[1], y[2] + y[3]);
            let (qm, pm) = (y[0] - y[1], y[2] - y[3]);
            tr.e_plus.push(0.5 * (qp * qp + pp * pp));
            tr.e_minus.push(0.5 * (qm * qm + pm * pm));
        }
        let (quad, total) = sys.energies(y);
        tr.total_energy.push(total);
        if quad0 > 0.0 && !(quad <= 10.0 * quad0) {
            return Err(Error::Unstable { t, energy: quad, initial: quad0 });
        }
        Ok(())
    };
    record(&mut tr, y, 0.0)?;
    let dt = cfg.dt;
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut tmp = vec![0.0; len];
    for step in 1..=steps {
        sys.deriv(y, &mut k1);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k1[i];
        }
        sys.deriv(&tmp, &mut k2);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * dt * k2[i];
        }
        sys.deriv(&tmp, &mut k3);
        for i in 0..len {
            tmp[i] = y[i] + dt * k3[i];
        }
        sys.deriv(&tmp, &mut k4);
        for i in 0..len {
            y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if step % cfg.record_every == 0 {
            record(&mut tr, y, step as f64 * dt)?;
        }
    }
    Ok(tr)
}

fn run(sys: &System, cfg: &TrajectoryConfig, omega_max: f64) -> Result<Trajectory> {
    cfg.validate(omega_max)?;
    let (mut y, seed) = initial_state(sys, cfg)?;
    integrate(sys, cfg, &mut y, seed)
}

/// One vibron at site N+1.
pub fn simulate_single(molecule: &MoleculeParams, chain: &DiscreteChain, cfg: &TrajectoryConfig) -> Result<Trajectory> {
    let modes = ChainModes::new(chain, molecule.nu)?;
    let sys = build(chain, vec![molecule.nu], vec![modes.alpha], &modes.frequencies);
    run(&sys, cfg, chain.omega_max())
}

/// Two vibrons at sites N+1∓j.
pub fn simulate_pair(
    molecules: [&MoleculeParams; 2],
    chain: &DiscreteChain,
    j: usize,
    cfg: &TrajectoryConfig,
) -> Result<Trajectory> {
    chain.validate()?;
    let freqs = chain.frequencies();
    let (a1, _) = chain.pair_couplings(&freqs, molecules[0].nu, j)?;
    let (_, a2) = chain.pair_couplings(&freqs, molecules[1].nu, j)?;
    let sys = build(chain, vec![molecules[0].nu, molecules[1].nu], vec![a1, a2], &freqs);
    run(&sys, cfg, chain.omega_max())
}

/// Single-vibron run from an explicit phonon state (coupled modes only).
///
/// Returns the trajectory and the final phonon coordinates and momenta.
pub fn simulate_single_from(
    molecule: &MoleculeParams,
    chain: &DiscreteChain,
    cfg: &TrajectoryConfig,
    phonon_q: &[f64],
    phonon_p: &[f64],
) -> Result<(Trajectory, Vec<f64>, Vec<f64>)> {
    let modes = ChainModes::new(chain, molecule.nu)?;
    let sys = build(chain, vec![molecule.nu], vec![modes.alpha], &modes.frequencies);
    cfg.validate(chain.omega_max())?;
    let k = sys.omegas.len();
    if phonon_q.len() != k || phonon_p.len() != k {
        return Err(param("phonon state", format!("expected {k} coupled modes")));
    }
    let mut y = vec![0.0; 2 + 2 * k];
    y[0] = cfg.q0[0];
    y[1] = cfg.p0[0];
    y[2..2 + k].copy_from_slice(phonon_q);
    y[2 + k..].copy_from_slice(phonon_p);
    let tr = integrate(&sys, cfg, &mut y, None)?;
    Ok((tr, y[2..2 + k].to_vec(), y[2 + k..].to_vec()))
}

/// Least-squares slope of −ln(values) against time over [t0, t1].
pub fn fit_decay_rate(times: &[f64], values: &[f64], t0: f64, t1: f64) -> Result<f64> {
    let (mut n, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &v) in times.iter().zip(values) {
        if t >= t0 && t <= t1 {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("non-positive value {v} at t = {t}")));
            }
            let l = libm::log(v);
            n += 1.0;
            sx += t;
            sy += l;
            sxx += t * t;
            sxy += t * l;
        }
    }
    if n < 2.0 {
        return Err(Error::Domain("fewer than two samples in fit window".into()));
    }
    Ok(-(n * sxy - sx * sy) / (n * sxx - sx * sx))
}

/// Mean of `values` over samples with t in [t0, t1].
pub fn window_mean(times: &[f64], values: &[f64], t0: f64, t1: f64) -> f64 {
    let (mut s, mut n) = (0.0, 0usize);
    for (&t, &v) in times.iter().zip(values) {
        if t >= t0 && t <= t1 {
            s += v;
            n += 1;
        }
    }
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

/// First-order Dyson amplitudes onto |0_ν,1_k⟩ and |2_ν,1_k⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct DysonAmplitudes {
    pub to_ground: Vec<Complex64>,
    pub to_two: Vec<Complex64>,
}

pub fn dyson_first_order(t: f64, modes: &ChainModes, nu: f64) -> Result<DysonAmplitudes> {
    if t < 0.0 {
        return Err(Error::Domain(format!("t must be >= 0, got {t}")));
    }
    let s2 = libm::sqrt(2.0);
    let mut to_ground = Vec::with_capacity(modes.alpha.len());
    let mut to_two = Vec::with_capacity(modes.alpha.len());
    for (&w, &a) in modes.frequencies.iter().zip(&modes.alpha) {
        to_ground.push(expm1_i_over(w - nu, t) * a);
        to_two.push(expm1_i_over(w + nu, t) * (s2 * a));
    }
    Ok(DysonAmplitudes { to_ground, to_two })
}
