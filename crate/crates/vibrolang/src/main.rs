use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vibrolang::{load, run, CliError, Command, Format, Options};

#[derive(Parser)]
#[command(name = "vibrolang", version, about = "Vibronic and phononic relaxation, spectra and cavity transmission")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single vibron energy relaxation on a phonon chain.
    Relaxation(Common),
    /// Collective kernels and two-vibron trajectories.
    Collective(Common),
    /// Vibronic absorption spectrum.
    Absorption(Common),
    /// Zero-phonon line with phonon wing and Debye-Waller factors.
    PhononWing(Common),
    /// Cavity transmission.
    Cavity(Common),
    /// Polariton population cross-talk.
    Polariton(Common),
    /// Bundled figure setups.
    Preset {
        /// fig2c, fig2d, fig3, fig4a-d, fig5a-c or fig6a-c.
        name: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run one job per value of a scalar parameter.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, env = "VIBROLANG_THREADS")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    #[value(name = "csv+svg")]
    CsvSvg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, name, common) = match cli.command {
        Cmd::Relaxation(c) => (Command::Relaxation, None, c),
        Cmd::Collective(c) => (Command::Collective, None, c),
        Cmd::Absorption(c) => (Command::Absorption, None, c),
        Cmd::PhononWing(c) => (Command::PhononWing, None, c),
        Cmd::Cavity(c) => (Command::Cavity, None, c),
        Cmd::Polariton(c) => (Command::Polariton, None, c),
        Cmd::Preset { name, common } => (Command::Preset, name, common),
        Cmd::Sweep(c) => (Command::Sweep, None, c),
    };
    match go(command, name.as_deref(), common) {
        Ok(out) => {
            println!("{}", out.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("vibrolang: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn go(command: Command, name: Option<&str>, c: Common) -> Result<PathBuf, CliError> {
    let text = match &c.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CliError::config("config", format!("{}: {e}", p.display())))?),
        None => None,
    };
    let cfg = load(command, text.as_deref(), name)?;
    let format = c.format.map(|f| match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::CsvSvg => Format::CsvSvg,
    });
    let opts = Options::resolve(&cfg, c.out, format, c.seed, c.threads);
    run(&cfg, &opts)?;
    Ok(opts.out.join(vibrolang::run::MANIFEST))
}
