//! Execute a plan and write its artifacts. Files are only written once every
//! computation has succeeded; the manifest is written last.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::commands::{execute, Output};
use crate::config::{Config, Format, Plan};
use crate::error::{CliError, Result};
use crate::svg;

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub out: PathBuf,
    pub format: Format,
    pub seed: u64,
    /// Worker threads for sweeps; `None` uses all cores.
    pub threads: Option<usize>,
}

impl Options {
    /// CLI flags win over the config file.
    pub fn resolve(cfg: &Config, out: Option<PathBuf>, format: Option<Format>, seed: Option<u64>, threads: Option<usize>) -> Self {
        Options {
            out: out.or_else(|| cfg.settings.output.clone()).unwrap_or_else(|| PathBuf::from("vibrolang-out")),
            format: format.or(cfg.settings.format).unwrap_or(Format::Csv),
            seed: seed.or(cfg.settings.seed).unwrap_or(0),
            threads,
        }
    }
}

struct File {
    path: String,
    bytes: Vec<u8>,
    rows: Option<usize>,
}

fn render(out: &Output, dir: &str, format: Format) -> (Vec<File>, Vec<Value>) {
    let mut files = Vec::new();
    let mut listed = Vec::new();
    for t in &out.tables {
        let path = format!("{dir}{}", t.name);
        let bytes = t.to_csv();
        listed.push(entry(&path, Some(t.rows.len()), &bytes));
        files.push(File { path, bytes, rows: Some(t.rows.len()) });
        if format == Format::CsvSvg {
            if let Some(s) = svg::render(t) {
                let path = format!("{dir}{}", t.name.trim_end_matches(".csv").to_string() + ".svg");
                let bytes = s.into_bytes();
                listed.push(entry(&path, None, &bytes));
                files.push(File { path, bytes, rows: None });
            }
        }
    }
    (files, listed)
}

fn entry(path: &str, rows: Option<usize>, bytes: &[u8]) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("file".into(), json!(path));
    if let Some(r) = rows {
        m.insert("rows".into(), json!(r));
    }
    m.insert("sha256".into(), json!(sha256_hex(bytes)));
    Value::Object(m)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::CsvSvg => "csv+svg",
    }
}

/// Run the plan and return the manifest that was written.
pub fn run(cfg: &Config, opts: &Options) -> Result<Value> {
    let mut manifest = serde_json::Map::new();
    if let Some(p) = &cfg.preset {
        manifest.insert("preset".into(), json!(p));
    }
    manifest.insert("format".into(), json!(format_name(opts.format)));
    manifest.insert("seed".into(), json!(opts.seed));
    let mut files = Vec::new();
    match &cfg.plan {
        Plan::Run(job) => {
            let out = execute(job, opts.seed)?;
            let (f, listed) = render(&out, "", opts.format);
            files = f;
            manifest.insert("command".into(), json!(job.command().name()));
            manifest.insert("parameters".into(), job.echo());
            manifest.insert("files".into(), Value::Array(listed));
            manifest.insert("summary".into(), Value::Object(out.summary));
        }
        Plan::Sweep { base, axis, values, points } => {
            let work = || points.par_iter().map(|j| execute(j, opts.seed)).collect::<Vec<Result<Output>>>();
            let results = match opts.threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::config("threads", e))?
                    .install(work),
                None => work(),
            };
            let mut entries = Vec::new();
            for (i, ((r, job), value)) in results.into_iter().zip(points).zip(values).enumerate() {
                let out = r.map_err(|e| match e {
                    CliError::Config(m) => CliError::Config(format!("values[{i}]: {m}")),
                    other => other,
                })?;
                let dir = format!("point_{i:03}/");
                let (f, listed) = render(&out, &dir, opts.format);
                files.extend(f);
                entries.push(json!({
                    "index": i,
                    "value": value,
                    "directory": dir.trim_end_matches('/'),
                    "parameters": job.echo(),
                    "files": listed,
                    "summary": out.summary,
                }));
            }
            manifest.insert("command".into(), json!("sweep"));
            manifest.insert("base_command".into(), json!(base.command().name()));
            manifest.insert("axis".into(), json!(axis));
            manifest.insert("values".into(), Value::Array(values.clone()));
            manifest.insert("parameters".into(), base.echo());
            manifest.insert("points".into(), Value::Array(entries));
        }
    }
    let manifest = Value::Object(manifest);
    write_all(&opts.out, &files, &manifest)?;
    Ok(manifest)
}

fn write_all(out: &Path, files: &[File], manifest: &Value) -> Result<()> {
    fs::create_dir_all(out)?;
    for f in files {
        let p = out.join(&f.path);
        if let Some(d) = p.parent() {
            fs::create_dir_all(d)?;
        }
        debug_assert!(f.rows.is_none() || f.path.ends_with(".csv"));
        fs::write(p, &f.bytes)?;
    }
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(out.join(MANIFEST), text)?;
    Ok(())
}
