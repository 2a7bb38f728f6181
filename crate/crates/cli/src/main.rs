use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hybrid_tls_cli::config::{parse_outputs, parse_triple, ConfigFile};
use hybrid_tls_cli::{run_scenario, validate, CliError, FigurePreset, Method, Overrides, Picture, ScenarioConfig};

#[derive(Parser, Debug)]
#[command(version, about = "Driven two-level system with hybrid Lindblad / anti-Hermitian damping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a scenario (or a figure preset) and write CSV files.
    Run(RunArgs),
    /// Report which solution paths apply to a scenario.
    Validate(ScenarioArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Reproduce figure N (1..=9) instead of a custom scenario.
    #[arg(long)]
    figure: Option<u8>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// JSON scenario file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    g0t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    at: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gt: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    tt: Option<f64>,
    #[arg(long)]
    n_thermal: Option<f64>,
    /// Initial normalized Bloch vector "x,y,z" (default ground state 0,0,-1).
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    rk_substeps: Option<usize>,
    /// analytic | expm | rk4
    #[arg(long)]
    method: Option<String>,
    /// Comma list of trajectory, steady, spectrum-decay, spectrum-periodic.
    #[arg(long)]
    outputs: Option<String>,
    /// interaction | schrodinger
    #[arg(long)]
    picture: Option<String>,
    /// omega0 / Omega, the coherence phase rate in the Schrodinger picture.
    #[arg(long)]
    omega0_ratio: Option<f64>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let file = match &self.config {
            Some(path) => serde_json::from_str(&fs::read_to_string(path)?)?,
            None => ConfigFile::default(),
        };
        let ov = Overrides {
            g0t: self.g0t,
            at: self.at,
            gt: self.gt,
            tt: self.tt,
            n_thermal: self.n_thermal,
            init: self.init.as_deref().map(parse_triple).transpose()?,
            tau_max: self.tau_max,
            dt: self.dt,
            rk_substeps: self.rk_substeps,
            method: self.method.as_deref().map(str::parse::<Method>).transpose()?,
            outputs: self.outputs.as_deref().map(parse_outputs).transpose()?,
            picture: self.picture.as_deref().map(str::parse::<Picture>).transpose()?,
            omega0_ratio: self.omega0_ratio,
        };
        ScenarioConfig::resolve(file, &ov)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Run(args) => {
            let written = match args.figure {
                Some(id) => FigurePreset::get(id)?.run(&args.out)?,
                None => run_scenario(&args.scenario.resolve()?, &args.out)?,
            };
            for path in written {
                writeln!(stdout, "{}", path.display())?;
            }
        }
        Command::Validate(args) => {
            for line in validate(&args.resolve()?) {
                writeln!(stdout, "{line}")?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // a closed pipe (e.g. `| head`) is not an error worth reporting
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
