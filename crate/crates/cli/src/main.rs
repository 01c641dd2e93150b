//! `wsim` — command-line front end for the sensor-field simulation library.
//!
//! Subcommands:
//!
//! * `recover`    — reconstruct the certified-void region of one world.
//! * `localize`   — estimate transmitter positions in one world.
//! * `density`    — solve for the sensor density minimizing the miss
//!   probability of a given transmitter density.
//! * `experiment` — run a seeded Monte Carlo sweep from a config file.
//! * `selftest`   — run the built-in functional checks.
//!
//! Results go to the file named by `--output`; human-readable progress goes
//! to standard error only. Exit codes: 0 success, 1 runtime failure,
//! 2 configuration/validation failure (also used by argument parsing).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;
use wsim_core::density::{optimal_density, uniform_miss_closed_form};
use wsim_core::field::{generate_readings, place_transmitters, validate_transmitters};
use wsim_core::harness::run_experiment_with;
use wsim_core::recovery::{localization_error, localize, majority_decode, reconstruct_void};
use wsim_core::rng::StreamFactory;
use wsim_core::selftest::run_selftest;
use wsim_core::{Deployment, ExperimentConfig, IntervalSet, SpatialPdf};

#[derive(Parser)]
#[command(
    name = "wsim",
    version,
    about = "Simulates binary proximity-sensor fields on the unit segment",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstructs the certified-void region of one world.
    Recover(JobArgs),
    /// Estimates transmitter count and positions in one world.
    Localize(JobArgs),
    /// Solves for the miss-minimizing sensor density.
    Density(JobArgs),
    /// Runs a Monte Carlo experiment sweep.
    Experiment(JobArgs),
    /// Runs the built-in functional checks; nonzero exit on any failure.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct JobArgs {
    /// JSON config describing the job.
    #[arg(long)]
    config: PathBuf,
    /// Where to write the results (JSON or CSV depending on subcommand).
    #[arg(long)]
    output: PathBuf,
    /// Overrides the RNG seed from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for trial execution (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Prints progress to standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SelftestArgs {
    /// Optional JSON report of the individual check results.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Prints each check's detail line, not only failures.
    #[arg(long)]
    verbose: bool,
}

/// CLI failure, split by exit code: configuration mistakes exit 2,
/// everything else exits 1.
enum CliError {
    Config(String),
    Runtime(String),
}

impl From<wsim_core::Error> for CliError {
    fn from(e: wsim_core::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("wsim: config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("wsim: error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Recover(args) => cmd_recover(args),
        Command::Localize(args) => cmd_localize(args),
        Command::Density(args) => cmd_density(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

/// Reads and deserializes a JSON config; all failures (missing file,
/// malformed JSON, unknown fields) are config-class.
fn read_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        // failure here means a pool already exists (e.g. repeated calls in
        // tests); the run is still correct, results never depend on the
        // worker count
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: Option<usize>) {
    if threads.is_some() {
        eprintln!("wsim: built without the `parallel` feature; --threads has no effect");
    }
}

// ======================================================================
// single-world commands: recover, localize
// ======================================================================

/// One world, either explicit or sampled. Explicit positions win over the
/// corresponding sampled counts.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldConfig {
    radio_range: f64,
    #[serde(default)]
    flip_prob: f64,
    /// Explicit transmitter positions.
    #[serde(default)]
    transmitter_positions: Option<Vec<f64>>,
    /// Number of transmitters to sample (ignored given explicit positions).
    #[serde(default)]
    transmitters: Option<usize>,
    /// Explicit sensor positions.
    #[serde(default)]
    sensor_positions: Option<Vec<f64>>,
    /// Number of sensors to sample (ignored given explicit positions).
    #[serde(default)]
    sensors: Option<usize>,
    #[serde(default)]
    sensor_pdf: Option<SpatialPdf>,
    #[serde(default)]
    tx_pdf: Option<SpatialPdf>,
    /// Minimum pairwise transmitter separation.
    #[serde(default)]
    min_separation: f64,
    #[serde(default)]
    seed: u64,
    /// Majority-decode cell width; required when `flip_prob > 0`, optional
    /// otherwise (noise-free worlds default to direct reconstruction).
    #[serde(default)]
    decode_cell_width: Option<f64>,
}

impl WorldConfig {
    /// Builds the deployment. Every failure on this path stems from the
    /// config, so errors surface as config-class.
    fn build(&self, seed_override: Option<u64>) -> Result<Deployment, CliError> {
        let seed = seed_override.unwrap_or(self.seed);
        let factory = StreamFactory::new(seed);
        let mut rng = factory.stream(0);
        if let Some(pdf) = &self.sensor_pdf {
            pdf.validate()?;
        }
        if let Some(pdf) = &self.tx_pdf {
            pdf.validate()?;
        }
        let txs = match (&self.transmitter_positions, self.transmitters) {
            (Some(positions), _) => validate_transmitters(positions.clone(), self.min_separation)?,
            (None, Some(count)) => place_transmitters(
                count,
                self.min_separation,
                self.tx_pdf.as_ref().unwrap_or(&SpatialPdf::Uniform),
                &mut rng,
            )?,
            (None, None) => Vec::new(),
        };
        let d = match (&self.sensor_positions, self.sensors) {
            (Some(positions), _) => {
                let readings =
                    generate_readings(positions, &txs, self.radio_range, self.flip_prob, &mut rng);
                Deployment::new(txs, positions.clone(), readings, self.radio_range, self.flip_prob)?
            }
            (None, Some(n)) => Deployment::generate(
                txs,
                n,
                self.sensor_pdf.as_ref().unwrap_or(&SpatialPdf::Uniform),
                self.radio_range,
                self.flip_prob,
                &mut rng,
            )?,
            (None, None) => {
                return Err(CliError::Config(
                    "world needs either sensor_positions or a sensors count".into(),
                ))
            }
        };
        Ok(d.with_origin(seed, 0))
    }

    /// Cell width for noisy worlds; `None` means direct reconstruction.
    fn decode_width(&self) -> Result<Option<f64>, CliError> {
        if self.flip_prob > 0.0 && self.decode_cell_width.is_none() {
            return Err(CliError::Config(
                "decode_cell_width is required when flip_prob > 0".into(),
            ));
        }
        Ok(self.decode_cell_width)
    }
}

fn intervals_json(set: &IntervalSet) -> serde_json::Value {
    json!(set.intervals().iter().map(|iv| [iv.lo(), iv.hi()]).collect::<Vec<_>>())
}

fn cmd_recover(args: JobArgs) -> Result<(), CliError> {
    configure_threads(args.threads);
    let config: WorldConfig = read_config(&args.config)?;
    let width = config.decode_width()?;
    let d = config.build(args.seed)?;
    if args.verbose {
        eprintln!(
            "recover: {} sensors ({} reading 1), {} transmitters, r_s={}",
            d.sensors().len(),
            d.readings().iter().filter(|&&b| b).count(),
            d.transmitters().len(),
            d.radio_range()
        );
    }
    let void = match width {
        None => reconstruct_void(&d),
        Some(w) => majority_decode(&d, w)?.void_estimate(),
    };
    let measure = void.measure();
    let out = json!({
        "void": intervals_json(&void),
        "measure": measure,
        "loss": 1.0 - measure,
    });
    write_output(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&out).expect("plain value")),
    )
}

fn cmd_localize(args: JobArgs) -> Result<(), CliError> {
    configure_threads(args.threads);
    let config: WorldConfig = read_config(&args.config)?;
    let width = config.decode_width()?;
    let d = config.build(args.seed)?;
    let result = localize(&d, width)?;
    let error = localization_error(d.transmitters(), &result.estimates);
    if args.verbose {
        eprintln!(
            "localize: {} estimates for {} transmitters, padded error {error}",
            result.estimates.len(),
            d.transmitters().len()
        );
    }
    let out = json!({
        "estimates": result.estimates,
        "count": result.estimates.len(),
        "occupied": intervals_json(&result.regions),
        "truth": d.transmitters(),
        "error": error,
    });
    write_output(
        &args.output,
        &format!("{}\n", serde_json::to_string_pretty(&out).expect("plain value")),
    )
}

// ======================================================================
// density command
// ======================================================================

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityConfig {
    /// Transmitter density to deploy against.
    f_x: SpatialPdf,
    /// Sensor count.
    n: usize,
    /// Radio range.
    r_s: f64,
    /// Tabulation segments (defaults to 4096, which is also the lower
    /// bound the solver enforces for accuracy).
    #[serde(default)]
    grid_points: Option<usize>,
}

fn cmd_density(args: JobArgs) -> Result<(), CliError> {
    configure_threads(args.threads);
    let config: DensityConfig = read_config(&args.config)?;
    config.f_x.validate()?;
    let grid_points = config.grid_points.unwrap_or(4096);
    let sol = optimal_density(&config.f_x, config.n, config.r_s, grid_points)?;
    let p_unif = uniform_miss_closed_form(config.n, config.r_s);
    if args.verbose {
        eprintln!(
            "density: mu={}, p_miss_opt={}, p_miss_unif={} on {} segments",
            sol.mu, sol.p_miss, p_unif, sol.grid_points
        );
    }
    let SpatialPdf::Tabulated { values } = &sol.f_lambda else {
        return Err(CliError::Runtime("solver returned a non-tabulated density".into()));
    };
    let mut out = String::from("x,f_x,f_lambda\n");
    let k = values.len() - 1;
    for (i, v) in values.iter().enumerate() {
        let x = i as f64 / k as f64;
        out.push_str(&format!("{x},{},{v}\n", config.f_x.density(x)));
    }
    out.push_str("mu,p_miss_opt,p_miss_unif\n");
    out.push_str(&format!("{},{},{}\n", sol.mu, sol.p_miss, p_unif));
    write_output(&args.output, &out)
}

// ======================================================================
// experiment and selftest commands
// ======================================================================

fn cmd_experiment(args: JobArgs) -> Result<(), CliError> {
    configure_threads(args.threads);
    let config: ExperimentConfig = read_config(&args.config)?;
    config.validate()?;
    let seed = args.seed.unwrap_or(config.seed);
    let verbose = args.verbose;
    let result = run_experiment_with(&config, seed, |row| {
        if verbose {
            eprintln!(
                "{} n={} law={} {}: p_hat={} +-{}",
                row.experiment, row.n, row.law, row.param, row.p_hat, row.ci95
            );
        }
    })?;
    result.write(&args.output)?;
    if verbose {
        eprintln!(
            "wrote {} rows to {} in {:.2}s",
            result.rows.len(),
            args.output.display(),
            result.meta.wall_time_s
        );
    }
    Ok(())
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), CliError> {
    let outcomes = run_selftest();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in &outcomes {
        if !o.passed {
            eprintln!("selftest FAILED {}: {}", o.name, o.detail);
        } else if args.verbose {
            eprintln!("selftest ok {}: {}", o.name, o.detail);
        }
    }
    eprintln!("selftest: {} checks, {} failed", outcomes.len(), failed);
    if let Some(path) = &args.output {
        let report = json!(outcomes
            .iter()
            .map(|o| json!({ "name": o.name, "passed": o.passed, "detail": o.detail }))
            .collect::<Vec<_>>());
        write_output(
            path,
            &format!("{}\n", serde_json::to_string_pretty(&report).expect("plain value")),
        )?;
    }
    if failed > 0 {
        return Err(CliError::Runtime(format!("{failed} self-test check(s) failed")));
    }
    Ok(())
}
