use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fanoise_core::spectra::{Band, Window};

use crate::commands;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::validate::{self, Overrides, Which};

/// Loading-noise prediction for rotating fan impellers.
#[derive(Debug, Parser)]
#[command(name = "fanoise", version)]
pub struct Cli {
    /// JSON run configuration; the reference fan is used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file, or output directory for `solve`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Only report errors.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the panel mesh and write the geometry CSV.
    Geom,
    /// Synthesise (or ingest) surface pressures and write the pressure CSV.
    Synth {
        #[arg(long)]
        mesh: PathBuf,
    },
    /// Evaluate the loading noise at every observer, writing mic_<name>.csv files.
    Solve {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        pressure: PathBuf,
    },
    /// Estimate the PSD of an observer signal.
    Spectrum {
        #[arg(long)]
        signal: PathBuf,
        #[arg(long)]
        n_segments: Option<usize>,
        #[arg(long)]
        window: Option<String>,
        #[arg(long)]
        overlap: Option<f64>,
    },
    /// Detect and label tones in a spectrum; writes <out>.csv and <out>.json.
    Tones {
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        threshold_db: Option<f64>,
        #[arg(long)]
        grid_divisor: Option<u32>,
    },
    /// Band-filtered surface pressure level on every panel.
    Surfmap {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        pressure: PathBuf,
        /// Band centre, Hz.
        #[arg(long)]
        center: f64,
        /// Band width, Hz (default: the tone grid step).
        #[arg(long)]
        width: Option<f64>,
    },
    /// Run an oracle comparison; exits 2 when it fails.
    Validate {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Near observer distance for `decay`, m.
        #[arg(long)]
        distance: Option<f64>,
    },
    /// Print the configuration in canonical form.
    Config,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    init_logging(cli.quiet);
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fanoise: {e}");
            e.exit_code()
        }
    }
}

fn init_logging(quiet: bool) {
    let level = if quiet {
        log::LevelFilter::Error
    } else {
        log::LevelFilter::Info
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .format_target(false)
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn out_or(cli_out: &Option<PathBuf>, default: &str) -> PathBuf {
    cli_out.clone().unwrap_or_else(|| PathBuf::from(default))
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))?;
    }
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::reference(),
    };
    let out = &cli.out;
    match cli.command {
        Command::Geom => {
            commands::cmd_geom(&config, &out_or(out, "geometry.csv"))?;
        }
        Command::Synth { mesh } => {
            commands::cmd_synth(&config, &mesh, &out_or(out, "pressure.csv"))?;
        }
        Command::Solve { mesh, pressure } => {
            commands::cmd_solve(&config, &mesh, &pressure, &out_or(out, "."))?;
        }
        Command::Spectrum {
            signal,
            n_segments,
            window,
            overlap,
        } => {
            if let Some(n) = n_segments {
                config.spectra.n_segments = n;
            }
            if let Some(w) = window {
                config.spectra.window = w.parse::<Window>().map_err(CliError::Usage)?;
            }
            if let Some(o) = overlap {
                config.spectra.overlap = o;
            }
            config.validate()?;
            commands::cmd_spectrum(&config, &signal, &out_or(out, "spectrum.csv"))?;
        }
        Command::Tones {
            spectrum,
            threshold_db,
            grid_divisor,
        } => {
            if let Some(t) = threshold_db {
                config.spectra.threshold_db = t;
            }
            if let Some(d) = grid_divisor {
                config.spectra.grid_divisor = d;
            }
            config.validate()?;
            commands::cmd_tones(&config, &spectrum, &out_or(out, "tones.csv"))?;
        }
        Command::Surfmap {
            mesh,
            pressure,
            center,
            width,
        } => {
            let step = config.geometry.shaft_frequency() / config.spectra.grid_divisor as f64;
            let band = Band {
                center,
                width: width.unwrap_or(step),
            };
            commands::cmd_surfmap(&config, &mesh, &pressure, band, &out_or(out, "map.csv"))?;
        }
        Command::Validate {
            which,
            tolerance,
            distance,
        } => {
            let check = validate::run(
                which,
                &config,
                &Overrides {
                    tolerance,
                    distance,
                },
            )?;
            let line = check.to_string();
            match out {
                Some(path) => write_report(path, &line)?,
                None => println!("{line}"),
            }
            if !check.passed() {
                return Err(CliError::Validation(
                    format!("{which:?} check exceeded its tolerance").to_lowercase(),
                ));
            }
        }
        Command::Config => {
            let text = config.to_canonical_json();
            match out {
                Some(path) => write_report(path, text.trim_end())?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn write_report(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    writeln!(f, "{text}").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
