use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sop_cli::{
    argmin_by_series, load_config, run_sweep, sdo_table, validate, write_csv, CliError, Engine,
    ExperimentConfig, SweepVar,
};

#[derive(Parser)]
#[command(
    name = "noma-sop",
    version,
    about = "Secrecy outage sweeps for cooperative NOMA relaying"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form SOP only.
    Analytic(RunArgs),
    /// Monte Carlo SOP only.
    Simulate(RunArgs),
    /// High-SNR approximation (and SDO for dynamic allocation).
    Asymptotic(RunArgs),
    /// Run the engines listed in the config.
    Sweep(RunArgs),
    /// Compare analytic and Monte Carlo point by point; exit 2 on failure.
    Validate(RunArgs),
    /// Print the secrecy diversity order of each scheme.
    Sdo(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario JSON file.
    config: PathBuf,
    /// Output CSV path; overrides `out` from the config. `-` is stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig, CliError> {
        let mut config = load_config(&self.config)?;
        if let Some(t) = self.trials {
            if t == 0 {
                return Err(CliError::Config(
                    "`--trials`: need at least one trial".into(),
                ));
            }
            config.mc.trials = t;
        }
        if let Some(s) = self.seed {
            config.mc.seed = s;
        }
        if self.out.is_some() {
            config.out = self.out.clone();
        }
        Ok(config)
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn run(args: &RunArgs, engine: Option<Engine>) -> Result<ExitCode, CliError> {
    let mut config = args.load()?;
    if let Some(e) = engine {
        config.engines = vec![e];
    }
    let rows = run_sweep(&config)?;
    write_csv(&rows, open_out(config.out.as_deref())?)?;

    if matches!(config.sweep.var, SweepVar::Alpha1 | SweepVar::AlphaJ) {
        for (scheme, engine, at, sop) in argmin_by_series(&rows) {
            eprintln!(
                "min {scheme} ({engine}): sop = {sop:.6e} at {} = {at}",
                config.sweep.var.name()
            );
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!(
            "{failed} of {} rows failed; see the error column",
            rows.len()
        );
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: &RunArgs) -> Result<ExitCode, CliError> {
    let config = args.load()?;
    let report = validate(&config)?;
    report.write_csv(open_out(config.out.as_deref())?)?;
    for (value, scheme, err) in &report.errors {
        eprintln!("{scheme} at {} = {value}: {err}", report.sweep_var);
    }
    eprintln!("{}", report.summary());
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run_sdo(args: &RunArgs) -> Result<ExitCode, CliError> {
    let config = args.load()?;
    let table = sdo_table(&config)?;
    let mut out = open_out(config.out.as_deref())?;
    writeln!(out, "scheme,sdo")?;
    for (scheme, d) in table {
        writeln!(out, "{scheme},{d}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analytic(a) => run(a, Some(Engine::Analytic)),
        Command::Simulate(a) => run(a, Some(Engine::MonteCarlo)),
        Command::Asymptotic(a) => run(a, Some(Engine::Asymptotic)),
        Command::Sweep(a) => run(a, None),
        Command::Validate(a) => run_validate(a),
        Command::Sdo(a) => run_sdo(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
