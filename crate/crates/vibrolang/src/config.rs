//! JSON configuration: envelopes, presets and sweep expansion.

use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::params::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "csv+svg")]
    CsvSvg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Relaxation,
    Collective,
    Absorption,
    PhononWing,
    Cavity,
    Polariton,
    Preset,
    Sweep,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Relaxation,
        Command::Collective,
        Command::Absorption,
        Command::PhononWing,
        Command::Cavity,
        Command::Polariton,
        Command::Preset,
        Command::Sweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Relaxation => "relaxation",
            Command::Collective => "collective",
            Command::Absorption => "absorption",
            Command::PhononWing => "phonon-wing",
            Command::Cavity => "cavity",
            Command::Polariton => "polariton",
            Command::Preset => "preset",
            Command::Sweep => "sweep",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// A single computation with validated parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Relaxation(RelaxationParams),
    Collective(CollectiveParams),
    Absorption(AbsorptionParams),
    PhononWing(PhononWingParams),
    Cavity(CavityRunParams),
    Polariton(PolaritonParams),
}

impl Job {
    pub fn parse(command: Command, parameters: Value) -> Result<Job> {
        Ok(match command {
            Command::Relaxation => Job::Relaxation(typed(parameters)?),
            Command::Collective => Job::Collective(typed(parameters)?),
            Command::Absorption => Job::Absorption(typed(parameters)?),
            Command::PhononWing => Job::PhononWing(typed(parameters)?),
            Command::Cavity => Job::Cavity(typed(parameters)?),
            Command::Polariton => Job::Polariton(typed(parameters)?),
            Command::Preset | Command::Sweep => {
                return Err(CliError::config("command", format!("`{}` is not a single job", command.name())))
            }
        })
    }

    pub fn command(&self) -> Command {
        match self {
            Job::Relaxation(_) => Command::Relaxation,
            Job::Collective(_) => Command::Collective,
            Job::Absorption(_) => Command::Absorption,
            Job::PhononWing(_) => Command::PhononWing,
            Job::Cavity(_) => Command::Cavity,
            Job::Polariton(_) => Command::Polariton,
        }
    }

    /// Parameters with defaults filled in.
    pub fn echo(&self) -> Value {
        let v = match self {
            Job::Relaxation(p) => serde_json::to_value(p),
            Job::Collective(p) => serde_json::to_value(p),
            Job::Absorption(p) => serde_json::to_value(p),
            Job::PhononWing(p) => serde_json::to_value(p),
            Job::Cavity(p) => serde_json::to_value(p),
            Job::Polariton(p) => serde_json::to_value(p),
        };
        v.expect("parameters serialize")
    }
}

fn typed<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let p = e.path().to_string();
        let path = if p == "." { "parameters".to_string() } else { format!("parameters.{p}") };
        CliError::config(&path, e.into_inner())
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Run(Job),
    Sweep { base: Job, axis: String, values: Vec<Value>, points: Vec<Job> },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub plan: Plan,
    pub preset: Option<String>,
    pub settings: Settings,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    command: Option<String>,
    parameters: Option<Value>,
    output: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    preset: Option<String>,
    base: Option<Value>,
    axis: Option<String>,
    values: Option<Vec<Value>>,
}

fn envelope(v: Value, origin: &str) -> Result<Envelope> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let p = e.path().to_string();
        CliError::config(if p == "." { origin } else { &p }, e.into_inner())
    })
}

pub const PRESETS: [(&str, &str); 13] = [
    ("fig2c", include_str!("../presets/fig2c.json")),
    ("fig2d", include_str!("../presets/fig2d.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig4a", include_str!("../presets/fig4a.json")),
    ("fig4b", include_str!("../presets/fig4b.json")),
    ("fig4c", include_str!("../presets/fig4c.json")),
    ("fig4d", include_str!("../presets/fig4d.json")),
    ("fig5a", include_str!("../presets/fig5a.json")),
    ("fig5b", include_str!("../presets/fig5b.json")),
    ("fig5c", include_str!("../presets/fig5c.json")),
    ("fig6a", include_str!("../presets/fig6a.json")),
    ("fig6b", include_str!("../presets/fig6b.json")),
    ("fig6c", include_str!("../presets/fig6c.json")),
];

pub fn preset_text(name: &str) -> Result<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::config("preset", format!("unknown preset `{name}`; known: {}", names.join(", ")))
    })
}

/// Parse the config for `command`. `preset` is the optional positional preset name.
pub fn load(command: Command, text: Option<&str>, preset: Option<&str>) -> Result<Config> {
    let env = match text {
        Some(t) => {
            let v: Value = serde_json::from_str(t).map_err(|e| CliError::config("config", e))?;
            if !v.is_object() {
                return Err(CliError::config("config", "expected a JSON object"));
            }
            Some(envelope(v, "config")?)
        }
        None => None,
    };
    if let Some(Envelope { command: Some(c), .. }) = &env {
        if c != command.name() {
            return Err(CliError::config("command", format!("config says `{c}` but `{}` was invoked", command.name())));
        }
    }
    match command {
        Command::Preset => load_preset(env, preset),
        _ if preset.is_some() => Err(CliError::config("preset", "a preset name is only accepted by `preset`")),
        Command::Sweep => {
            let env = env.ok_or_else(|| CliError::config("config", "`sweep` needs --config"))?;
            let settings = Settings { output: env.output.clone(), format: env.format, seed: env.seed };
            let plan = sweep_plan(env)?;
            Ok(Config { plan, preset: None, settings })
        }
        _ => {
            let env = env.ok_or_else(|| CliError::config("config", format!("`{}` needs --config", command.name())))?;
            reject(&env, &["preset", "base", "axis", "values"])?;
            let settings = Settings { output: env.output, format: env.format, seed: env.seed };
            let params = env.parameters.ok_or_else(|| CliError::config("parameters", "missing"))?;
            Ok(Config { plan: Plan::Run(Job::parse(command, params)?), preset: None, settings })
        }
    }
}

fn reject(env: &Envelope, keys: &[&str]) -> Result<()> {
    for &k in keys {
        let present = match k {
            "parameters" => env.parameters.is_some(),
            "preset" => env.preset.is_some(),
            "base" => env.base.is_some(),
            "axis" => env.axis.is_some(),
            "values" => env.values.is_some(),
            "output" => env.output.is_some(),
            "format" => env.format.is_some(),
            "seed" => env.seed.is_some(),
            _ => false,
        };
        if present {
            return Err(CliError::config(k, "not accepted for this command"));
        }
    }
    Ok(())
}

fn load_preset(env: Option<Envelope>, positional: Option<&str>) -> Result<Config> {
    let (name, settings) = match env {
        Some(e) => {
            reject(&e, &["parameters", "base", "axis", "values"])?;
            let name = match (e.preset.as_deref(), positional) {
                (Some(a), Some(b)) if a != b => {
                    return Err(CliError::config("preset", format!("config names `{a}` but `{b}` was given")))
                }
                (Some(a), _) => a.to_string(),
                (None, Some(b)) => b.to_string(),
                (None, None) => return Err(CliError::config("preset", "missing preset name")),
            };
            (name, Settings { output: e.output, format: e.format, seed: e.seed })
        }
        None => (
            positional.ok_or_else(|| CliError::config("preset", "missing preset name"))?.to_string(),
            Settings::default(),
        ),
    };
    let v: Value = serde_json::from_str(preset_text(&name)?).map_err(|e| CliError::config("preset", e))?;
    let env = envelope(v, "preset")?;
    reject(&env, &["output", "format", "seed", "preset"])?;
    let c = env.command.clone().ok_or_else(|| CliError::config("preset.command", "missing"))?;
    let plan = match Command::from_name(&c) {
        Some(Command::Sweep) => sweep_plan(env)?,
        Some(Command::Preset) | None => return Err(CliError::config("preset.command", format!("bad command `{c}`"))),
        Some(cmd) => Plan::Run(Job::parse(cmd, env.parameters.ok_or_else(|| CliError::config("parameters", "missing"))?)?),
    };
    Ok(Config { plan, preset: Some(name), settings })
}

fn sweep_plan(env: Envelope) -> Result<Plan> {
    reject(&env, &["parameters", "preset"])?;
    let base = match env.base.ok_or_else(|| CliError::config("base", "missing"))? {
        Value::String(name) => {
            let v: Value = serde_json::from_str(preset_text(&name)?).map_err(|e| CliError::config("base", e))?;
            base_job(v)?
        }
        v @ Value::Object(_) => base_job(v)?,
        _ => return Err(CliError::config("base", "expected a preset name or {command, parameters}")),
    };
    let axis = env.axis.ok_or_else(|| CliError::config("axis", "missing"))?;
    let values = env.values.ok_or_else(|| CliError::config("values", "missing"))?;
    if values.is_empty() {
        return Err(CliError::config("values", "needs at least one value"));
    }
    let points = expand(&base, &axis, &values)?;
    Ok(Plan::Sweep { base, axis, values, points })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseJob {
    command: String,
    parameters: Value,
}

fn base_job(v: Value) -> Result<Job> {
    let b: BaseJob = serde_path_to_error::deserialize(v).map_err(|e| CliError::config(&format!("base.{}", e.path()), e.into_inner()))?;
    match Command::from_name(&b.command) {
        Some(Command::Preset | Command::Sweep) | None => {
            Err(CliError::config("base.command", format!("`{}` cannot be swept", b.command)))
        }
        Some(c) => Job::parse(c, b.parameters),
    }
}

/// One job per value, with `axis` (a dotted path inside the parameters) replaced.
pub fn expand(base: &Job, axis: &str, values: &[Value]) -> Result<Vec<Job>> {
    let echo = base.echo();
    let keys: Vec<&str> = axis.strip_prefix("parameters.").unwrap_or(axis).split('.').collect();
    let mut cur = &echo;
    for k in &keys {
        cur = match cur {
            Value::Object(m) => m.get(*k),
            Value::Array(a) => k.parse::<usize>().ok().and_then(|i| a.get(i)),
            _ => None,
        }
        .ok_or_else(|| CliError::config("axis", format!("`{axis}` does not name a parameter")))?;
    }
    if cur.is_object() || cur.is_array() {
        return Err(CliError::config("axis", format!("`{axis}` is not a scalar parameter")));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.is_object() || v.is_array() {
                return Err(CliError::config(&format!("values[{i}]"), "must be a scalar"));
            }
            let mut p = echo.clone();
            let mut slot = &mut p;
            for k in &keys {
                slot = match slot {
                    Value::Object(m) => m.get_mut(*k).expect("checked above"),
                    Value::Array(a) => &mut a[k.parse::<usize>().expect("checked above")],
                    _ => unreachable!(),
                };
            }
            *slot = v.clone();
            Job::parse(base.command(), p).map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("values[{i}]: {m}")),
                other => other,
            })
        })
        .collect()
}
