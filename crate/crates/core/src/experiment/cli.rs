//! Command-line front end. The binary only forwards `argv` here.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use super::config::{parse_config_text, parse_estimators, ExperimentConfig, OutputFormat, ParamChoice};
use super::output::{format_sci, ResultTable, FULL_DIGITS, SHORT_DIGITS};
use super::{run_bounds_table, run_estimate, run_preset, run_tune, Preset, RunOptions};
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPABILITY: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Maps a library error onto the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Domain(_) => EXIT_USAGE,
        Error::Capability(_) => EXIT_CAPABILITY,
        Error::Numerical(_) => EXIT_NUMERICAL,
    }
}

#[derive(Debug, Parser)]
#[command(name = "tailsum", version, about = "Tail probabilities of sums of dependent Pareto risks")]
pub struct Cli {
    /// Worker threads for the replication pool (default: all cores).
    #[arg(long, global = true, env = "TAILSUM_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run conditional Monte Carlo estimators at each threshold.
    Estimate(ConfigArgs),
    /// Compute deterministic lower and upper bounds (2 or 3 components).
    Bounds(ConfigArgs),
    /// Reproduce one of the preset tables.
    Table(TableArgs),
    /// Choose λ (nr3) or κ (nr4) by pilot variance.
    Tune(ConfigArgs),
}

/// Flags mirror config-file keys; a flag overrides the file.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// `key = value` file; any flag below overrides it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// clayton or gumbel.
    #[arg(long)]
    pub family: Option<String>,
    /// Kendall's tau (exclusive with --param).
    #[arg(long, conflicts_with = "param")]
    pub tau: Option<String>,
    /// Generator parameter (exclusive with --tau).
    #[arg(long)]
    pub param: Option<String>,
    /// copula (X has copula C) or survival (Y has survival copula C).
    #[arg(long)]
    pub mode: Option<String>,
    /// e.g. pareto:2.5,2.5,2.5
    #[arg(long)]
    pub marginals: Option<String>,
    /// Comma-separated thresholds.
    #[arg(long)]
    pub s: Option<String>,
    /// all, or a list from mc,nr1,nr2,nr3,nr4.
    #[arg(long)]
    pub estimator: Option<String>,
    #[arg(long)]
    pub reps: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Number or `tune`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Number or `tune`.
    #[arg(long)]
    pub kappa: Option<String>,
    #[arg(long)]
    pub pilot_reps: Option<String>,
    /// Bounds grid exponent.
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub allow_large_grid: bool,
    /// csv or markdown.
    #[arg(long)]
    pub format: Option<String>,
    /// Print 17 significant digits.
    #[arg(long)]
    pub full_precision: bool,
    /// Add wall-clock seconds per row (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
}

impl ConfigArgs {
    fn overrides(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let pairs = [
            ("family", &self.family),
            ("tau", &self.tau),
            ("param", &self.param),
            ("mode", &self.mode),
            ("marginals", &self.marginals),
            ("s", &self.s),
            ("estimator", &self.estimator),
            ("reps", &self.reps),
            ("seed", &self.seed),
            ("lambda", &self.lambda),
            ("kappa", &self.kappa),
            ("pilot_reps", &self.pilot_reps),
            ("m", &self.m),
            ("format", &self.format),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                m.insert(k.to_string(), v.clone());
            }
        }
        for (k, on) in [
            ("allow_large_grid", self.allow_large_grid),
            ("full_precision", self.full_precision),
            ("timings", self.timings),
        ] {
            if on {
                m.insert(k.to_string(), "true".into());
            }
        }
        m
    }

    /// File values first, then flags on top, then validation.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut map = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => BTreeMap::new(),
        };
        let flags = self.overrides();
        // A flag for one of tau/param displaces the other from the file.
        if flags.contains_key("tau") {
            map.remove("param");
        }
        if flags.contains_key("param") {
            map.remove("tau");
        }
        map.extend(flags);
        ExperimentConfig::from_pairs(&map)
    }
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// table1 .. table6
    pub preset: String,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    #[arg(long, default_value_t = super::config::DEFAULT_SEED)]
    pub seed: u64,
    /// Defaults to a tenth of --reps, at least 1000.
    #[arg(long)]
    pub pilot_reps: Option<usize>,
    /// Override the preset's bounds grid exponent.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub allow_large_grid: bool,
    /// Skip the deterministic bounds columns.
    #[arg(long)]
    pub no_bounds: bool,
    #[arg(long, default_value = "all")]
    pub estimator: String,
    #[arg(long, default_value = "csv")]
    pub format: String,
    #[arg(long)]
    pub full_precision: bool,
    #[arg(long)]
    pub timings: bool,
}

fn digits(full: bool) -> usize {
    if full {
        FULL_DIGITS
    } else {
        SHORT_DIGITS
    }
}

fn render(table: &ResultTable, format: OutputFormat, full: bool) -> String {
    match format {
        OutputFormat::Csv => table.to_csv_string(digits(full)),
        OutputFormat::Markdown => table.to_markdown(digits(full)),
    }
}

fn log_config(cfg: &ExperimentConfig) -> Result<()> {
    for line in cfg.echo().lines() {
        log::info!("config: {line}");
    }
    let g = cfg.generator()?;
    log::info!("generator: {} parameter {} (tau {})", g.family(), g.param(), g.kendall_tau());
    log::info!("seed: {}", cfg.seed);
    Ok(())
}

/// Runs one parsed command and returns what goes to stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Estimate(a) => {
            let cfg = a.resolve()?;
            log_config(&cfg)?;
            Ok(render(&run_estimate(&cfg)?, cfg.format, cfg.full_precision))
        }
        Command::Bounds(a) => {
            let cfg = a.resolve()?;
            log_config(&cfg)?;
            Ok(render(&run_bounds_table(&cfg)?, cfg.format, cfg.full_precision))
        }
        Command::Tune(a) => {
            let cfg = a.resolve()?;
            log_config(&cfg)?;
            let rows = run_tune(&cfg)?;
            let d = digits(cfg.full_precision);
            let mut out = String::from("s,estimator,value\n");
            for r in rows {
                out += &format!("{},{},{}\n", format_sci(r.s, d), r.estimator, format_sci(r.value, d));
            }
            Ok(out)
        }
        Command::Table(a) => {
            let preset: Preset = a.preset.parse()?;
            let estimators = parse_estimators(&a.estimator)?;
            let format: OutputFormat = a.format.parse()?;
            if a.reps < 2 {
                return Err(Error::Config(format!("--reps: need at least 2, got {}", a.reps)));
            }
            let opts = RunOptions {
                reps: a.reps,
                seed: a.seed,
                pilot_reps: a.pilot_reps.unwrap_or((a.reps / 10).max(1000)),
                lambda: ParamChoice::Tune,
                kappa: ParamChoice::Tune,
                m: a.m,
                allow_large_grid: a.allow_large_grid,
                timings: a.timings,
            };
            log::info!("table {preset}: reps {}, seed {}, pilot reps {}", opts.reps, opts.seed, opts.pilot_reps);
            Ok(render(&run_preset(preset, &estimators, !a.no_bounds, &opts)?, format, a.full_precision))
        }
    }
}

/// Full entry point: parse, set up logging and the pool, run, print.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            log::warn!("worker pool already initialised: {e}");
        }
    }
    let t0 = Instant::now();
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return EXIT_USAGE;
            }
            log::info!("total wall time {:.2}s", t0.elapsed().as_secs_f64());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
