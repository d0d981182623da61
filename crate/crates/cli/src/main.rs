use clap::{Args, Parser, Subcommand, ValueEnum};
use qcorr_cli::config::{parse_config, Mode, Param, SweepSpec};
use qcorr_cli::error::{CliError, Result};
use qcorr_cli::output::{emit_csv, emit_json};
use qcorr_cli::presets::preset;
use qcorr_cli::sweep::run_sweep;
use qcorr_cli::verify::{render_text, verify_report};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantum-correlation and teleportation sweeps for a graphene pseudo-spin/valley model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state correlation sweep
    Ground(SweepArgs),
    /// Thermal-state correlation sweep
    Thermal(SweepArgs),
    /// Teleportation fidelity sweep
    Teleport(SweepArgs),
    /// Closed-form vs oracle audit report
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep configuration file
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in figure preset (fig2a .. fig7c)
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Override a fixed parameter of the sweep, e.g. --set lambda=0.5
    #[arg(long = "set", value_name = "PARAM=VALUE")]
    set: Vec<String>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Overrides the configured seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON configuration with {"mode": "verify", ...}
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// RNG seed for the sampled audits
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random draws per sampled audit
    #[arg(long)]
    samples: Option<u32>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// csv selects the human-readable text rendering for verify
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn read_config(path: &Path) -> Result<SweepSpec> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

fn apply_overrides(spec: &mut SweepSpec, set: &[String], seed: Option<u64>) -> Result<()> {
    for entry in set {
        let (name, value) = entry.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("--set expects PARAM=VALUE, got {entry:?}"))
        })?;
        let param = Param::parse(name.trim())?;
        let value: f64 = value.trim().parse().map_err(|_| {
            CliError::Validation(format!("--set {name}: {value:?} is not a number"))
        })?;
        spec.set_fixed(param, value)?;
    }
    if let Some(s) = seed {
        spec.seed = s;
    }
    Ok(())
}

fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn run_sweep_command(mode: Mode, args: &SweepArgs) -> Result<()> {
    let mut spec = match (&args.config, &args.preset) {
        (Some(path), None) => read_config(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => {
            return Err(CliError::Validation(
                "either --config or --preset is required".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    if spec.mode != mode {
        return Err(CliError::Validation(format!(
            "configuration is for mode {:?} but the {:?} subcommand was invoked",
            spec.mode.as_str(),
            mode.as_str()
        )));
    }
    apply_overrides(&mut spec, &args.set, args.seed)?;
    let rows = run_sweep(&spec)?;
    let mut sink = open_sink(&args.out)?;
    let io_err = |e: std::io::Error| CliError::Io(e.to_string());
    match args.format {
        Format::Csv => emit_csv(&spec, &rows, &mut sink).map_err(io_err)?,
        Format::Json => emit_json(&spec, &rows, &mut sink).map_err(io_err)?,
    }
    sink.flush().map_err(io_err)?;
    Ok(())
}

fn run_verify_command(args: &VerifyArgs) -> Result<()> {
    let (mut seed, mut samples) = (1u64, 100u32);
    if let Some(path) = &args.config {
        let spec = read_config(path)?;
        if spec.mode != Mode::Verify {
            return Err(CliError::Validation(format!(
                "configuration is for mode {:?} but the \"verify\" subcommand was invoked",
                spec.mode.as_str()
            )));
        }
        seed = spec.seed;
        if let Some(s) = spec.samples {
            samples = s;
        }
    }
    if let Some(s) = args.seed {
        seed = s;
    }
    if let Some(s) = args.samples {
        samples = s;
    }
    let report = verify_report(seed, samples);
    let mut sink = open_sink(&args.out)?;
    let io_err = |e: std::io::Error| CliError::Io(e.to_string());
    match args.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &report)
                .map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(sink).map_err(io_err)?;
        }
        Format::Csv => {
            sink.write_all(render_text(&report).as_bytes()).map_err(io_err)?;
        }
    }
    sink.flush().map_err(io_err)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Ground(args) => run_sweep_command(Mode::Ground, args),
        Command::Thermal(args) => run_sweep_command(Mode::Thermal, args),
        Command::Teleport(args) => run_sweep_command(Mode::Teleport, args),
        Command::Verify(args) => run_verify_command(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
