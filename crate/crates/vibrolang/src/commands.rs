//! Run one parsed job in memory. Nothing here touches the filesystem.

use serde_json::{json, Map, Value};
use vibrolang_core::cavity::{
    antiresonance, cooperativity, polariton_rates, polariton_splitting, polariton_state, transmission, Transmission,
};
use vibrolang_core::kernels::{
    collective_gamma_freq, collective_gamma_time, effective_params, gamma_freq, gamma_time, momentum_correlation,
    KernelParams,
};
use vibrolang_core::microsim::{fit_decay_rate, simulate_pair, simulate_single, Trajectory};
use vibrolang_core::model::{MoleculeParams, ThermalState};
use vibrolang_core::spectra::{
    absorption_bessel, absorption_discrete, absorption_full, debye_waller, franck_condon, mirror_emission,
};

use crate::config::Job;
use crate::error::{at, numeric, CliError, Result};
use crate::params::*;
use crate::table::Table;

/// Tables and scalar results of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
}

const MAX_CORRELATION_ROWS: usize = 2000;

pub fn execute(job: &Job, seed: u64) -> Result<Output> {
    match job {
        Job::Relaxation(p) => relaxation(p, seed),
        Job::Collective(p) => collective(p, seed),
        Job::Absorption(p) => absorption(p),
        Job::PhononWing(p) => phonon_wing(p),
        Job::Cavity(p) => cavity(p),
        Job::Polariton(p) => polariton(p),
    }
}

fn relaxation(p: &RelaxationParams, seed: u64) -> Result<Output> {
    let chain = p.chain.build("parameters.chain")?;
    let mol = MoleculeParams::new(0.0, 1.0, p.nu, 0.0, 0.0).map_err(at("parameters"))?;
    let cfg = p.trajectory_config(chain.omega_max(), seed)?;
    let tr = simulate_single(&mol, &chain, &cfg).map_err(numeric)?;
    let gamma_m = p.chain.gamma_m(&chain, p.nu);
    let e = &tr.energy[0];
    let mut tables = vec![Table::from_columns("trajectory.csv", &["t", "Q1", "P1", "E1"], &[&tr.times, &tr.q[0], &tr.p[0], e])
        .with_plot("vibron energy", vec![3], false)];
    if p.theory {
        let th: Vec<f64> = tr.times.iter().map(|&t| e[0] * (-gamma_m * t).exp()).collect();
        tables.push(Table::from_columns("theory.csv", &["t", "E_theory"], &[&tr.times, &th]).with_plot(
            "Markovian decay",
            vec![1],
            false,
        ));
    }
    let mut s = Map::new();
    s.insert("gamma_m".into(), json!(gamma_m));
    s.insert("omega_max".into(), json!(chain.omega_max()));
    s.insert("dt".into(), json!(cfg.dt));
    s.insert("fitted_rate".into(), json!(fit_decay_rate(&tr.times, e, 0.0, p.t_max).ok()));
    if let Some(seed) = tr.seed {
        s.insert("seed".into(), json!(seed));
    }
    Ok(Output { tables, summary: s })
}

fn collective(p: &CollectiveParams, seed: u64) -> Result<Output> {
    if p.kernels.is_none() && p.trajectory.is_none() {
        return Err(CliError::config("parameters", "needs `kernels`, `trajectory` or both"));
    }
    let mut tables = Vec::new();
    let mut s = Map::new();
    if let Some(k) = &p.kernels {
        tables.extend(kernel_tables(k)?);
    }
    if let Some(t) = &p.trajectory {
        let tr = pair_trajectory(t, seed, &mut s)?;
        tables.push(
            Table::from_columns(
                "trajectory.csv",
                &["t", "Q1", "P1", "Q2", "P2", "E1", "E2", "Eplus", "Eminus"],
                &[&tr.times, &tr.q[0], &tr.p[0], &tr.q[1], &tr.p[1], &tr.energy[0], &tr.energy[1], &tr.e_plus, &tr.e_minus],
            )
            .with_plot("collective energies", vec![7, 8], false),
        );
    }
    Ok(Output { tables, summary: s })
}

fn kernel_tables(k: &KernelTables) -> Result<Vec<Table>> {
    let path = "parameters.kernels";
    let kp = KernelParams::new(k.gamma_m, k.omega_max, k.omega_max).map_err(at(path))?;
    if !k.omega_max.is_finite() {
        return Err(CliError::config(&format!("{path}.omega_max"), "must be finite"));
    }
    if k.separations.is_empty() || k.separations.contains(&0) {
        return Err(CliError::config(&format!("{path}.separations"), "needs one or more j >= 1"));
    }
    if !(k.t_max > 0.0) {
        return Err(CliError::config(&format!("{path}.t_max"), "must be > 0"));
    }
    for (name, n) in [("time_samples", k.time_samples), ("frequency_samples", k.frequency_samples)] {
        if !(2..=MAX_GRID_POINTS).contains(&n) {
            return Err(CliError::config(&format!("{path}.{name}"), "must be in 2..=2000001"));
        }
    }
    let times = linspace(0.0, k.t_max, k.time_samples);
    let mut header = vec!["t".to_string(), "gamma".to_string()];
    let mut cols = vec![times.clone(), times.iter().map(|&t| gamma_time(t, &kp)).collect::<Vec<_>>()];
    for &j in &k.separations {
        header.push(format!("gamma12_j{j}"));
        cols.push(times.iter().map(|&t| collective_gamma_time(t, j, &kp)).collect::<vibrolang_core::Result<Vec<_>>>().map_err(at(path))?);
    }
    let mut time = table_from("kernel_time.csv", &header, &cols);
    time.plot = Some(crate::table::Plot { title: "memory kernels".into(), series: (1..header.len()).collect(), log_y: false });

    let w = linspace(-k.omega_max, k.omega_max, k.frequency_samples);
    let mut header = vec!["omega".to_string(), "re_gamma".to_string(), "im_gamma".to_string()];
    let g: Vec<_> = w.iter().map(|&x| gamma_freq(x, &kp)).collect();
    let mut cols = vec![w.clone(), g.iter().map(|c| c.real).collect(), g.iter().map(|c| c.imag).collect()];
    for &j in &k.separations {
        let v = w.iter().map(|&x| collective_gamma_freq(x, j, &kp)).collect::<vibrolang_core::Result<Vec<_>>>().map_err(at(path))?;
        header.push(format!("re_gamma12_j{j}"));
        header.push(format!("im_gamma12_j{j}"));
        cols.push(v.iter().map(|c| c.re).collect());
        cols.push(v.iter().map(|c| c.im).collect());
    }
    let mut freq = table_from("kernel_freq.csv", &header, &cols);
    let re: Vec<usize> = (3..header.len()).step_by(2).collect();
    freq.plot = Some(crate::table::Plot { title: "collective kernel, real part".into(), series: re, log_y: false });
    Ok(vec![time, freq])
}

fn pair_trajectory(t: &PairTrajectory, seed: u64, s: &mut Map<String, Value>) -> Result<Trajectory> {
    let chain = t.chain.build("parameters.trajectory.chain")?;
    let mol = MoleculeParams::new(0.0, 1.0, t.nu, 0.0, 0.0).map_err(at("parameters.trajectory"))?;
    let cfg = t.trajectory_config(chain.omega_max(), seed)?;
    let tr = simulate_pair([&mol, &mol], &chain, t.separation, &cfg).map_err(at("parameters.trajectory"))?;
    let gamma_m = t.chain.gamma_m(&chain, t.nu);
    s.insert("gamma_m".into(), json!(gamma_m));
    s.insert("omega_max".into(), json!(chain.omega_max()));
    s.insert("dt".into(), json!(cfg.dt));
    s.insert("fitted_rate_plus".into(), json!(fit_decay_rate(&tr.times, &tr.e_plus, 0.0, t.t_max).ok()));
    s.insert("fitted_rate_minus".into(), json!(fit_decay_rate(&tr.times, &tr.e_minus, 0.0, t.t_max).ok()));
    if let Some(seed) = tr.seed {
        s.insert("seed".into(), json!(seed));
    }
    Ok(tr)
}

fn absorption(p: &AbsorptionParams) -> Result<Output> {
    let mol = p.molecule.build("parameters.molecule")?;
    let kp = p.bath.build("parameters.bath", mol.nu)?;
    let th = p.thermal.resolve("parameters.thermal", Some(mol.nu))?;
    let grid = p.detuning.points("parameters.detuning")?;
    let g2 = mol.gamma * mol.gamma;
    let nbar = th.occupation(mol.nu).map_err(numeric)?;
    let mut s = Map::new();
    let values = match p.method {
        Method::Lines | Method::Bessel => {
            let sp = if p.method == Method::Lines {
                absorption_discrete(&grid, &mol, &kp, &th, p.n_max).map_err(numeric)?
            } else {
                if p.n_max.is_some() {
                    return Err(CliError::config("parameters.n_max", "only used by method `lines`"));
                }
                absorption_bessel(&grid, &mol, &kp, &th).map_err(numeric)?
            };
            s.insert("n_max".into(), json!(sp.n_max));
            s.insert("tail".into(), json!(sp.tail));
            s.insert("valid".into(), json!(sp.valid));
            s.insert("lines".into(), json!(sp.lines.len()));
            sp.values
        }
        Method::Fft => {
            if p.n_max.is_some() {
                return Err(CliError::config("parameters.n_max", "only used by method `lines`"));
            }
            absorption_full(&grid, &mol, &kp, None, &th).map_err(numeric)?.values
        }
    };
    let values: Vec<f64> = values.iter().map(|v| v * g2).collect();
    let (nu_p, g_p) = effective_params(&kp).map_err(numeric)?;
    s.insert("nbar".into(), json!(nbar));
    s.insert("f_fc".into(), json!(franck_condon(mol.lambda, nbar)));
    s.insert("nu_prime".into(), json!(nu_p));
    s.insert("gamma_prime".into(), json!(g_p));
    let mut tables = vec![Table::from_columns("spectrum.csv", &["detuning", "value"], &[&grid, &values])
        .with_plot("absorption P_e/P_0", vec![1], false)];
    if p.emission {
        let (x, y) = mirror_emission(&grid, &values, 0.0);
        tables.push(Table::from_columns("emission.csv", &["detuning", "value"], &[&x, &y]).with_plot("emission", vec![1], false));
    }
    if let Some(c) = &p.correlation {
        tables.push(momentum_table(c, &kp, &th)?);
    }
    Ok(Output { tables, summary: s })
}

fn momentum_table(c: &Correlation, kp: &KernelParams, th: &ThermalState) -> Result<Table> {
    if !(c.t_max > 0.0) {
        return Err(CliError::config("parameters.correlation.t_max", "must be > 0"));
    }
    if !(2..=MAX_GRID_POINTS).contains(&c.samples) {
        return Err(CliError::config("parameters.correlation.samples", "must be in 2..=2000001"));
    }
    let tau = linspace(0.0, c.t_max, c.samples);
    let v = tau.iter().map(|&t| momentum_correlation(t, kp, th)).collect::<vibrolang_core::Result<Vec<_>>>().map_err(numeric)?;
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    Ok(Table::from_columns("correlation.csv", &["tau", "re_corr", "im_corr"], &[&tau, &re, &im]).with_plot(
        "momentum correlation",
        vec![1],
        false,
    ))
}

fn phonon_wing(p: &PhononWingParams) -> Result<Output> {
    let sd = p.spectral_density.build("parameters.spectral_density")?;
    let th = p.thermal.resolve("parameters.thermal", Some(sd.omega_max))?;
    if p.detuning.is_none() && p.debye_waller_kelvin.is_none() {
        return Err(CliError::config("parameters", "needs `detuning`, `debye_waller_kelvin` or both"));
    }
    let (mol, kp) = match &p.vibron {
        Some(v) => {
            let m = MoleculeParams::new(0.0, p.gamma, v.nu, v.lambda, 0.0).map_err(at("parameters.vibron"))?;
            (m, v.bath.build("parameters.vibron.bath", v.nu)?)
        }
        None => {
            let m = MoleculeParams::new(0.0, p.gamma, 1.0, 0.0, 0.0).map_err(at("parameters"))?;
            (m, KernelParams::markovian(0.0, 1.0).map_err(numeric)?)
        }
    };
    let grid = match &p.detuning {
        Some(g) => Some(g.points("parameters.detuning")?),
        None => None,
    };
    let temps = match &p.debye_waller_kelvin {
        Some(g) => Some(g.points("parameters.debye_waller_kelvin")?),
        None => None,
    };
    let mut tables = Vec::new();
    let mut s = Map::new();
    s.insert("temperature".into(), json!(th.temperature));
    s.insert("f_dw".into(), json!(debye_waller(&sd, &th).map_err(numeric)?));
    s.insert("polaron_shift".into(), json!(vibrolang_core::spectra::polaron_shift(&sd).map_err(numeric)?));
    if let Some(grid) = grid {
        let r = absorption_full(&grid, &mol, &kp, Some(&sd), &th).map_err(numeric)?;
        let g2 = p.gamma * p.gamma;
        let values: Vec<f64> = r.values.iter().map(|v| v * g2).collect();
        tables.push(
            Table::from_columns("spectrum.csv", &["detuning", "value"], &[&grid, &values]).with_plot(
                "absorption P_e/P_0",
                vec![1],
                true,
            ),
        );
        let stride = r.tau.len().div_ceil(MAX_CORRELATION_ROWS).max(1);
        let tau: Vec<f64> = r.tau.iter().step_by(stride).copied().collect();
        let re: Vec<f64> = r.correlation.iter().step_by(stride).map(|z| z.re).collect();
        let im: Vec<f64> = r.correlation.iter().step_by(stride).map(|z| z.im).collect();
        tables.push(Table::from_columns("correlation.csv", &["tau", "re_corr", "im_corr"], &[&tau, &re, &im]).with_plot(
            "phonon correlation",
            vec![1, 2],
            false,
        ));
        s.insert("f_fc".into(), json!(r.f_fc));
        s.insert("fft_dt".into(), json!(r.grid.dt));
        s.insert("fft_size".into(), json!(r.grid.n_fft));
    }
    if let Some(temps) = temps {
        let f = temps
            .iter()
            .map(|&k| {
                let t = ThermalState::from_kelvin(k).map_err(at("parameters.debye_waller_kelvin"))?;
                debye_waller(&sd, &t).map_err(numeric)
            })
            .collect::<Result<Vec<_>>>()?;
        tables.push(Table::from_columns("debye_waller.csv", &["temperature_k", "f_dw"], &[&temps, &f]).with_plot(
            "Debye-Waller factor",
            vec![1],
            false,
        ));
    }
    Ok(Output { tables, summary: s })
}

fn cavity(p: &CavityRunParams) -> Result<Output> {
    let mol = p.molecule.build("parameters.molecule")?;
    let kp = p.bath.build("parameters.bath", mol.nu)?;
    let cav = p.cavity.build("parameters.cavity")?;
    let sd = match &p.spectral_density {
        Some(d) => Some(d.build("parameters.spectral_density")?),
        None => None,
    };
    let th = p.thermal.resolve("parameters.thermal", Some(mol.nu))?;
    let grid = p.detuning.points("parameters.detuning")?;
    let t = transmission(&grid, &cav, &mol, &kp, &th, sd.as_ref()).map_err(numeric)?;
    let mut s = transmission_summary(&t, cav.kappa, mol.gamma);
    s.insert("f_fc".into(), json!(t.response.f_fc));
    s.insert("f_dw".into(), json!(t.response.f_dw));
    s.insert("polaron_shift".into(), json!(t.response.polaron_shift));
    s.insert("factorization_warning".into(), json!(t.factorization_warning));
    let mut tables = vec![transmission_table("transmission.csv", &t)];
    if p.two_level_reference {
        let tls = MoleculeParams::new(0.0, mol.gamma, mol.nu, 0.0, 0.0).map_err(numeric)?;
        let t0 = transmission(&grid, &cav, &tls, &kp, &th, None).map_err(numeric)?;
        s.insert("two_level".into(), Value::Object(transmission_summary(&t0, cav.kappa, mol.gamma)));
        tables.push(transmission_table("transmission_tls.csv", &t0));
    }
    Ok(Output { tables, summary: s })
}

fn transmission_table(name: &str, t: &Transmission) -> Table {
    let re: Vec<f64> = t.amplitude.iter().map(|z| z.re).collect();
    let im: Vec<f64> = t.amplitude.iter().map(|z| z.im).collect();
    Table::from_columns(name, &["detuning", "re_T", "im_T", "abs_T2"], &[&t.detunings, &re, &im, &t.abs2]).with_plot(
        "cavity transmission",
        vec![3],
        false,
    )
}

fn transmission_summary(t: &Transmission, kappa: f64, gamma: f64) -> Map<String, Value> {
    let mut s = Map::new();
    s.insert("g_eff".into(), json!(t.g_eff));
    s.insert("cooperativity_eff".into(), json!(cooperativity(t.g_eff, kappa, gamma)));
    s.insert("cavity_detuning".into(), json!(t.cavity_detuning));
    let split = polariton_splitting(&t.detunings, &t.abs2);
    s.insert("splitting".into(), json!(split));
    s.insert("splitting_over_2g_eff".into(), json!(split.map(|x| x / (2.0 * t.g_eff))));
    if let Ok(a) = antiresonance(t, kappa) {
        s.insert(
            "antiresonance".into(),
            json!({ "position": a.position, "depth": a.depth, "min_abs2": a.min_abs2, "hwhm": a.hwhm }),
        );
    }
    s
}

fn polariton(p: &PolaritonParams) -> Result<Output> {
    let mol = p.molecule.build("parameters.molecule")?;
    let kp = KernelParams::markovian(p.gamma_m, mol.nu).map_err(at("parameters"))?;
    let cav = p.cavity.build("parameters.cavity")?;
    let th = p.thermal.resolve("parameters.thermal", Some(mol.nu))?;
    if !(p.t_max > 0.0) {
        return Err(CliError::config("parameters.t_max", "must be > 0"));
    }
    if !(2..=MAX_GRID_POINTS).contains(&p.samples) {
        return Err(CliError::config("parameters.samples", "must be in 2..=2000001"));
    }
    let times = linspace(0.0, p.t_max, p.samples);
    let st = polariton_state(&times, (p.initial[0], p.initial[1]), &cav, &mol, &kp, &th).map_err(at("parameters"))?;
    let r = polariton_rates(&mol, &kp, &th, st.omega_plus, st.omega_minus).map_err(numeric)?;
    let mut s = Map::new();
    s.insert("kappa_plus".into(), json!(st.kappa_plus));
    s.insert("kappa_minus".into(), json!(st.kappa_minus));
    s.insert("kappa_plus_main".into(), json!(r.main.0));
    s.insert("kappa_minus_main".into(), json!(r.main.1));
    s.insert("gamma_plus".into(), json!(st.gamma_pm.0));
    s.insert("gamma_minus".into(), json!(st.gamma_pm.1));
    s.insert("omega_plus".into(), json!(st.omega_plus));
    s.insert("omega_minus".into(), json!(st.omega_minus));
    s.insert("valid".into(), json!(r.valid));
    let tables = vec![Table::from_columns("polariton.csv", &["t", "P_U", "P_L"], &[&times, &st.p_u, &st.p_l])
        .with_plot("polariton populations", vec![1, 2], false)];
    Ok(Output { tables, summary: s })
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn table_from(name: &str, header: &[String], cols: &[Vec<f64>]) -> Table {
    let h: Vec<&str> = header.iter().map(String::as_str).collect();
    let c: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
    Table::from_columns(name, &h, &c)
}
