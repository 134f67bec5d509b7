//! Experiment driver behind the `tailsum` binary: configs, table presets,
//! runners and output.

pub mod cli;
pub mod config;
pub mod output;
pub mod presets;

use std::time::Instant;

use crate::bounds::{bounds_tail_with, BoundsOptions, BoundsPair};
use crate::error::{capability, domain, Result};
use crate::estimators::{
    default_grid, run_replications, tune_parameter, Estimator, EstimatorParams, EstimatorReport, TailProblem,
};

pub use config::{ExperimentConfig, OutputFormat, ParamChoice};
pub use output::{format_sci, EstimateCell, ResultRow, ResultTable, FULL_DIGITS, SHORT_DIGITS};
pub use presets::{Preset, Scenario};

/// Pilot runs use their own seed so the chosen parameter is not fitted to
/// the very draws that produce the final estimate.
pub fn pilot_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Knobs shared by every runner.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub reps: usize,
    pub seed: u64,
    pub pilot_reps: usize,
    pub lambda: ParamChoice,
    pub kappa: ParamChoice,
    pub m: Option<u32>,
    pub allow_large_grid: bool,
    pub timings: bool,
}

impl RunOptions {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self {
            reps: cfg.reps,
            seed: cfg.seed,
            pilot_reps: cfg.pilot_reps(),
            lambda: cfg.lambda,
            kappa: cfg.kappa,
            m: cfg.m,
            allow_large_grid: cfg.allow_large_grid,
            timings: cfg.timings,
        }
    }

    fn choice(&self, est: Estimator) -> ParamChoice {
        match est {
            Estimator::Nr3 => self.lambda,
            Estimator::Nr4 => self.kappa,
            _ => ParamChoice::Fixed(f64::NAN),
        }
    }
}

/// Default bounds grid exponent: `2^20` cells for two components and
/// `3^8` per axis for three.
pub fn default_bounds_m(n: usize) -> Result<u32> {
    match n {
        2 => Ok(20),
        3 => Ok(8),
        _ => Err(capability!("deterministic bounds are implemented for 2 or 3 components only, got {n}")),
    }
}

/// The tuning value an estimator will run with: fixed, tuned on the pilot
/// seed over the default grid, or `None` for estimators without one.
pub fn resolve_parameter(p: &TailProblem, est: Estimator, opts: &RunOptions) -> Result<Option<f64>> {
    if est.parameter_range(p.n()).is_none() {
        return Ok(None);
    }
    match opts.choice(est) {
        ParamChoice::Fixed(v) => Ok(Some(v)),
        ParamChoice::Tune => {
            let t0 = Instant::now();
            let grid = default_grid(est, p.n())?;
            let v = tune_parameter(p, est, &grid, opts.pilot_reps, pilot_seed(opts.seed))?;
            log::info!(
                "tuned {est} at s={:e}: {v} ({} pilot reps, {:.2}s)",
                p.threshold(),
                opts.pilot_reps,
                t0.elapsed().as_secs_f64()
            );
            Ok(Some(v))
        }
    }
}

/// Tunes if needed, then runs the full replication.
pub fn run_estimator(p: &TailProblem, est: Estimator, opts: &RunOptions) -> Result<EstimatorReport> {
    let params = match resolve_parameter(p, est, opts)? {
        Some(v) => EstimatorParams::for_estimator(est, v),
        None => EstimatorParams::default(),
    };
    let t0 = Instant::now();
    let r = run_replications(p, est, params, opts.reps, opts.seed)?;
    log::info!(
        "{est} at s={:e}: mean {:e}, cv {:.4}, {} clamped ({:.2}s)",
        p.threshold(),
        r.mean,
        r.cv,
        r.clamped,
        t0.elapsed().as_secs_f64()
    );
    Ok(r)
}

pub fn run_bounds(p: &TailProblem, opts: &RunOptions) -> Result<BoundsPair> {
    let m = match opts.m {
        Some(m) => m,
        None => default_bounds_m(p.n())?,
    };
    let t0 = Instant::now();
    let b = bounds_tail_with(p, m, BoundsOptions { allow_large_grid: opts.allow_large_grid })?;
    log::info!(
        "bounds at s={:e}, m={m}: [{:e}, {:e}] ({:.2}s)",
        p.threshold(),
        b.lower,
        b.upper,
        t0.elapsed().as_secs_f64()
    );
    Ok(b)
}

/// One output row: optional bounds plus every requested estimator.
pub fn evaluate_row(
    label: &str,
    p: &TailProblem,
    estimators: &[Estimator],
    with_bounds: bool,
    opts: &RunOptions,
) -> Result<ResultRow> {
    let t0 = Instant::now();
    let bounds = if with_bounds { Some(run_bounds(p, opts)?) } else { None };
    let estimates = estimators
        .iter()
        .map(|&e| run_estimator(p, e, opts).map(|r| Some(EstimateCell::from(&r))))
        .collect::<Result<Vec<_>>>()?;
    let elapsed = t0.elapsed().as_secs_f64();
    log::info!("row `{label}` s={:e} done in {elapsed:.2}s", p.threshold());
    Ok(ResultRow {
        label: label.to_string(),
        s: p.threshold(),
        lower: bounds.map(|b| b.lower),
        upper: bounds.map(|b| b.upper),
        estimates,
        wall_seconds: opts.timings.then_some(elapsed),
    })
}

fn config_label(cfg: &ExperimentConfig) -> Result<String> {
    let g = cfg.generator()?;
    Ok(format!("{} {} tau={}", cfg.mode, g.family(), g.kendall_tau()))
}

/// `estimate`: every configured estimator at every threshold.
pub fn run_estimate(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let opts = RunOptions::from_config(cfg);
    let label = config_label(cfg)?;
    let mut table = ResultTable::new(cfg.estimators.clone());
    for &s in &cfg.s {
        table.rows.push(evaluate_row(&label, &cfg.problem(s)?, &cfg.estimators, false, &opts)?);
    }
    Ok(table)
}

/// `bounds`: the deterministic bracket at every threshold.
pub fn run_bounds_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let opts = RunOptions::from_config(cfg);
    let label = config_label(cfg)?;
    let mut table = ResultTable::new(Vec::new());
    for &s in &cfg.s {
        table.rows.push(evaluate_row(&label, &cfg.problem(s)?, &[], true, &opts)?);
    }
    Ok(table)
}

/// One tuned value per (threshold, estimator) with a tuning parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneRow {
    pub s: f64,
    pub estimator: Estimator,
    pub value: f64,
}

/// `tune`: pilot search only, for NR3 and NR4 among the configured
/// estimators.
pub fn run_tune(cfg: &ExperimentConfig) -> Result<Vec<TuneRow>> {
    let mut opts = RunOptions::from_config(cfg);
    opts.lambda = ParamChoice::Tune;
    opts.kappa = ParamChoice::Tune;
    let tunable: Vec<Estimator> = cfg
        .estimators
        .iter()
        .copied()
        .filter(|e| matches!(e, Estimator::Nr3 | Estimator::Nr4))
        .collect();
    if tunable.is_empty() {
        return Err(domain!("tune needs nr3 or nr4 among the estimators"));
    }
    let mut rows = Vec::new();
    for &s in &cfg.s {
        let p = cfg.problem(s)?;
        for &e in &tunable {
            if let Some(value) = resolve_parameter(&p, e, &opts)? {
                rows.push(TuneRow { s, estimator: e, value });
            }
        }
    }
    Ok(rows)
}

/// `table`: a preset reproduced row by row.
pub fn run_preset(
    preset: Preset,
    estimators: &[Estimator],
    with_bounds: bool,
    opts: &RunOptions,
) -> Result<ResultTable> {
    let mut opts = opts.clone();
    if opts.m.is_none() {
        opts.m = preset.default_m();
    }
    let with_bounds = with_bounds && preset.default_m().is_some();
    let mut table = ResultTable::new(estimators.to_vec());
    for sc in preset.scenarios() {
        log::info!("{preset}: {} ({} generator parameter {})", sc.label(), sc.family, sc.generator()?.param());
        for &s in &sc.s_values {
            table.rows.push(evaluate_row(&sc.label(), &sc.problem(s)?, estimators, with_bounds, &opts)?);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::parse_config_text;

    fn cfg(extra: &str) -> ExperimentConfig {
        let text = format!("tau = 0.5\nmode = survival\nmarginals = pareto:2.5,2.5\ns = 100\nreps = 4000\n{extra}");
        ExperimentConfig::from_pairs(&parse_config_text(&text).unwrap()).unwrap()
    }

    #[test]
    fn estimate_is_reproducible() {
        let c = cfg("estimator = nr2,nr4\npilot_reps = 1000\n");
        let a = run_estimate(&c).unwrap();
        let b = run_estimate(&c).unwrap();
        assert_eq!(a, b);
        let row = &a.rows[0];
        let nr4 = row.estimate(Estimator::Nr4).unwrap();
        assert!(nr4.parameter.is_some());
        assert!(row.estimate(Estimator::Nr2).unwrap().parameter.is_none());
        assert!(row.wall_seconds.is_none());
        assert_eq!(a.to_csv_string(SHORT_DIGITS), b.to_csv_string(SHORT_DIGITS));
    }

    #[test]
    fn fixed_parameter_is_used() {
        let c = cfg("estimator = nr3\nlambda = 0.15\n");
        let t = run_estimate(&c).unwrap();
        assert_eq!(t.rows[0].estimates[0].as_ref().unwrap().parameter, Some(0.15));
    }

    #[test]
    fn bounds_rows_bracket() {
        let c = cfg("m = 10\n");
        let t = run_bounds_table(&c).unwrap();
        let r = &t.rows[0];
        assert!(r.lower.unwrap() <= r.upper.unwrap());
        assert!(r.lower.unwrap() > 5.1e-5 && r.upper.unwrap() < 5.2e-5);
        assert!(run_bounds_table(&cfg("m = 60\n")).is_err());
    }

    #[test]
    fn tune_requires_tunable_estimator() {
        assert!(run_tune(&cfg("estimator = nr1\n")).is_err());
        let rows = run_tune(&cfg("estimator = nr3\npilot_reps = 1000\n")).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].value > 0.0 && rows[0].value < 0.5);
    }

    #[test]
    fn bounds_default_grid() {
        assert_eq!(default_bounds_m(2).unwrap(), 20);
        assert_eq!(default_bounds_m(3).unwrap(), 8);
        assert!(matches!(default_bounds_m(5), Err(crate::Error::Capability(_))));
    }
}
