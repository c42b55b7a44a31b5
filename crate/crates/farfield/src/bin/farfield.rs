//! Command-line pipeline driver. Thin wrapper over `farfield::driver`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use farfield::driver::{
    cmd_figure, cmd_metrics, cmd_reconstruct, cmd_simulate, cmd_sweep, cmd_tables, TableProfile,
};
use farfield::io::figure::PlotScalar;
use farfield::io::RunConfig;
use farfield::metrics::TrendAxis;
use farfield::{Error, Result};

#[derive(Parser)]
#[command(
    name = "farfield",
    about = "Far-field synthesis and sampling-indicator source reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Run-config file (`key = value` lines).
    #[arg(short, long)]
    config: PathBuf,
    /// Override config keys, e.g. `--set noise.delta=0.1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::from_file(&self.config)?;
        for s in &self.sets {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set needs KEY=VALUE, got `{s}`")))?;
            cfg.apply(k.trim(), v.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize far-field data; writes noiseless and noisy dataset files.
    Simulate(ConfigArgs),
    /// Evaluate the configured indicators on a dataset file.
    Reconstruct {
        #[command(flatten)]
        config: ConfigArgs,
        /// Dataset file produced by `simulate`.
        dataset: PathBuf,
    },
    /// Quality metrics of a reconstructed field against the configured source.
    Metrics {
        #[command(flatten)]
        config: ConfigArgs,
        /// Field file produced by `reconstruct`.
        field: PathBuf,
    },
    /// e_F over a list of values on one parameter axis, with a trend verdict.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        /// Swept parameter: L | omega_max | delta_omega | delta.
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values, e.g. `51,101,151,201`.
        #[arg(long)]
        values: String,
    },
    /// Render one component of a stored field (CSV + 16-bit PGM + sidecar).
    Figure {
        field: PathBuf,
        /// 1-based component index.
        #[arg(long, default_value_t = 1)]
        component: usize,
        /// Plotted scalar: real | imag | magnitude.
        #[arg(long, default_value = "real")]
        scalar: String,
        /// Lower end of the raster range (defaults to the data minimum).
        #[arg(long)]
        min: Option<f64>,
        /// Upper end of the raster range (defaults to the data maximum).
        #[arg(long)]
        max: Option<f64>,
    },
    /// One-shot reproduction of the two e_F benchmark tables.
    Tables {
        /// `full` (10 seeds, h = 0.01) or `ci` (3 seeds, h = 0.02).
        #[arg(long, default_value = "ci")]
        profile: String,
        /// Base seed; replicates use seed, seed+1, ...
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_axis(s: &str) -> Result<TrendAxis> {
    match s {
        "L" | "directions" => Ok(TrendAxis::DirectionCount),
        "omega_max" | "k_max" => Ok(TrendAxis::OmegaMax),
        "delta_omega" | "delta_k" => Ok(TrendAxis::DeltaOmega),
        "delta" | "noise" => Ok(TrendAxis::NoiseDelta),
        other => Err(Error::Config(format!("unknown sweep axis `{other}`"))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let cfg = args.load()?;
            let s = cmd_simulate(&cfg)?;
            println!(
                "{} records in {:.2}s -> {} / {}",
                s.record_count,
                s.synth_seconds,
                s.clean_path.display(),
                s.noisy_path.display()
            );
        }
        Command::Reconstruct { config, dataset } => {
            let cfg = config.load()?;
            let t = std::time::Instant::now();
            let fields = cmd_reconstruct(&cfg, &dataset)?;
            if fields.is_empty() {
                eprintln!("warning: no indicators configured, nothing to do");
            }
            for f in &fields {
                println!("{}", f.display());
            }
            println!("reconstructed {} field(s) in {:.2}s", fields.len(), t.elapsed().as_secs_f64());
        }
        Command::Metrics { config, field } => {
            let cfg = config.load()?;
            let row = cmd_metrics(&cfg, &field)?;
            println!(
                "e_F = {:.6} ({} mode, L={}, freq {}x{}, noise {}, seed {})",
                row.e_f,
                row.error_mode.as_str(),
                row.direction_count,
                row.freq_count,
                row.freq_delta,
                row.noise_delta,
                row.seed
            );
        }
        Command::Sweep {
            config,
            axis,
            values,
        } => {
            let cfg = config.load()?;
            let axis = parse_axis(&axis)?;
            let values: Vec<f64> = values
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad sweep value `{v}`")))
                })
                .collect::<Result<_>>()?;
            let sweep = cmd_sweep(&cfg, axis, &values)?;
            for (v, r) in sweep.values.iter().zip(&sweep.reports) {
                println!(
                    "{} = {v}: e_F = {:.4} (std {:.4}, {} seeds)",
                    axis.as_str(),
                    r.e_f,
                    r.e_f_std,
                    r.n_seeds
                );
            }
            println!("trend: {:?}", sweep.verdict);
        }
        Command::Figure {
            field,
            component,
            scalar,
            min,
            max,
        } => {
            let scalar = PlotScalar::parse(&scalar)?;
            let range = match (min, max) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => {
                    return Err(Error::Config(
                        "--min and --max must be given together".into(),
                    ))
                }
            };
            let out = cmd_figure(&field, component, scalar, range)?;
            println!(
                "{}\n{}\n{} (range {} .. {})",
                out.csv.display(),
                out.pgm.display(),
                out.sidecar.display(),
                out.vmin,
                out.vmax
            );
        }
        Command::Tables { profile, seed, out } => {
            let profile = TableProfile::parse(&profile)?;
            let (t1, t2) = cmd_tables(profile, seed, &out)?;
            println!("accuracy vs directions/frequencies:\n{}", t1.to_csv());
            println!("accuracy vs frequency step/noise:\n{}", t2.to_csv());
            println!(
                "all trends monotone: {} / {}",
                t1.all_monotone(),
                t2.all_monotone()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
