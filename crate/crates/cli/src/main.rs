use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fwm_core::config::{parse_config_with_overrides, preset, Coupling, Grid, PRESET_NAMES};
use fwm_core::params::{derive_couplings, validate_dispersive};
use fwm_core::sweep::{default_transfer_grids, squeezing_transfer_scan, write_output};
use fwm_core::{run_sweep, ConfigError, FwmError, SweepConfig, SweepError};

#[derive(Parser, Debug)]
#[command(name = "fwm", version, about = "Counterpropagating four-wave mixing sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a sweep described by a key=value config file.
    Sweep {
        config: PathBuf,
        /// Override a config key, e.g. `--set r=0.8`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Write CSV here instead of the config's `output` (or stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a named preset, or print its config.
    Preset {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// List preset names.
        #[arg(long)]
        list: bool,
        /// Print the resolved config text instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Check physical inputs against the dispersive-regime conditions.
    Validate {
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Scan P and |s|L for the best squeezing transfer into mode a.
    TransferReport {
        #[arg(short, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        p_min: f64,
        #[arg(long, default_value_t = 20.0)]
        p_max: f64,
        #[arg(long)]
        p_points: Option<usize>,
        #[arg(long)]
        phase_points: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Validity(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Config(_) => 2,
            Failure::Validity(_) => 3,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<FwmError> for Failure {
    fn from(e: FwmError) -> Self {
        match e {
            FwmError::InvalidParameter { .. } => Failure::Config(e.to_string()),
            other => Failure::Validity(other.to_string()),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(c) => c.into(),
            SweepError::Numerical(n) => n.into(),
            SweepError::Dispersive(_) => Failure::Validity(e.to_string()),
            SweepError::Io { .. } => Failure::Io(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn emit(cfg: &SweepConfig) -> Result<(), Failure> {
    let csv = run_sweep(cfg)?;
    match &cfg.output {
        Some(path) => eprintln!("wrote {} ({} rows)", path.display(), csv.lines().filter(|l| !l.starts_with('#')).count() - 1),
        None => io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok(())
}

fn with_output(mut cfg: SweepConfig, output: Option<PathBuf>) -> SweepConfig {
    if output.is_some() {
        cfg.output = output;
    }
    cfg
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep {
            config,
            overrides,
            output,
        } => {
            let cfg = parse_config_with_overrides(&read(&config)?, &overrides)?;
            emit(&with_output(cfg, output))
        }
        Command::Preset {
            name,
            overrides,
            output,
            list,
            print_config,
        } => {
            if list {
                for n in PRESET_NAMES {
                    println!("{n}");
                }
                return Ok(());
            }
            let name = name.unwrap_or_default();
            let base = preset(&name)?.to_config_text();
            let cfg = with_output(parse_config_with_overrides(&base, &overrides)?, output);
            if print_config {
                print!("{}", cfg.to_config_text());
                return Ok(());
            }
            emit(&cfg)
        }
        Command::Validate {
            config,
            preset: preset_name,
            overrides,
        } => {
            // Validation needs only the physical keys; a mode line is
            // supplied so that a bare parameter file parses.
            let base = match (config, preset_name) {
                (Some(path), _) => format!("mode=amplitudes\n{}", read(&path)?),
                (None, Some(name)) => preset(&name)?.to_config_text(),
                (None, None) => "mode=amplitudes\n".to_string(),
            };
            let cfg = parse_config_with_overrides(&base, &overrides)?;
            let Some(Coupling::Physical(spec)) = cfg.coupling else {
                return Err(Failure::Config("validate needs physical inputs (omega_mhz, g_mhz, ...)".into()));
            };
            let phys = spec.to_params()?;
            let n_max = u32::try_from(cfg.n_max).unwrap_or(u32::MAX);
            let report = validate_dispersive(&phys, n_max, spec.dispersive_threshold)?;
            println!("n_max = {}", cfg.n_max);
            println!("{report}");
            let c = derive_couplings(&phys)?;
            println!("chi0 = {:e} rad/s, sigma0 = {:e} rad/s", c.chi0, c.sigma0);
            println!("chi = {:e}, sigma = {:e}, regime = {}", c.chi, c.sigma, c.regime);
            match c.p_param {
                Some(p) => println!("P = {p:e}"),
                None => println!("P undefined (delta_k = 0)"),
            }
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Validity("dispersive check failed".into()))
            }
        }
        Command::TransferReport {
            r,
            p_min,
            p_max,
            p_points,
            phase_points,
            output,
        } => {
            let (dp, dx) = default_transfer_grids();
            let p_grid = Grid::new(p_min, p_max, p_points.unwrap_or(dp.points))?;
            let x_grid = Grid::new(dx.start, dx.stop, phase_points.unwrap_or(dx.points))?;
            let report = squeezing_transfer_scan(p_grid, x_grid, r)?.to_string();
            match output {
                Some(path) => write_output(&path, &report)?,
                None => print!("{report}"),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("config error: {m}"),
                Failure::Validity(m) => eprintln!("validity failure: {m}"),
                Failure::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
