use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{EstimatorDraw, TailProblem};
use crate::error::{domain, Error, Result};
use crate::samplers::RngStream;

/// Draws per work unit. Each unit owns the RNG stream numbered by its
/// index, so the partition (and hence every result bit) is independent of
/// how many threads run it.
pub const CHUNK_SIZE: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    PlainMc,
    Nr1,
    Nr2,
    Nr3,
    Nr4,
}

impl Estimator {
    pub const CONDITIONAL: [Estimator; 4] = [Estimator::Nr1, Estimator::Nr2, Estimator::Nr3, Estimator::Nr4];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::PlainMc => "mc",
            Estimator::Nr1 => "nr1",
            Estimator::Nr2 => "nr2",
            Estimator::Nr3 => "nr3",
            Estimator::Nr4 => "nr4",
        }
    }

    /// Open interval of legal tuning values, if the estimator has one.
    pub fn parameter_range(self, n: usize) -> Option<(f64, f64)> {
        let inv = 1.0 / n as f64;
        match self {
            Estimator::Nr3 => Some((0.0, inv)),
            Estimator::Nr4 => Some((inv, 1.0)),
            _ => None,
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" | "plain" | "plain_mc" => Ok(Estimator::PlainMc),
            "nr1" => Ok(Estimator::Nr1),
            "nr2" => Ok(Estimator::Nr2),
            "nr3" => Ok(Estimator::Nr3),
            "nr4" => Ok(Estimator::Nr4),
            other => Err(domain!("unknown estimator `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EstimatorParams {
    pub lambda: Option<f64>,
    pub kappa: Option<f64>,
}

impl EstimatorParams {
    /// Parameters with `value` assigned to whichever slot `est` uses.
    pub fn for_estimator(est: Estimator, value: f64) -> Self {
        match est {
            Estimator::Nr3 => Self { lambda: Some(value), kappa: None },
            Estimator::Nr4 => Self { lambda: None, kappa: Some(value) },
            _ => Self::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorReport {
    pub estimator: Estimator,
    pub mean: f64,
    /// Unbiased sample variance of one draw.
    pub variance: f64,
    /// `sqrt(variance) / mean`.
    pub cv: f64,
    /// `sqrt(E[Z²]) / mean`.
    pub rms_re: f64,
    /// `sqrt(variance / reps)`.
    pub std_error: f64,
    pub reps: usize,
    pub seed: u64,
    /// Tuning value used, if any.
    pub parameter: Option<f64>,
    /// Draws whose capped radial part was clamped at zero.
    pub clamped: usize,
}

/// Streaming mean and centred second moment, merged with Chan's formula.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
    clamped: usize,
}

impl Moments {
    fn push(&mut self, d: EstimatorDraw) {
        self.count += 1;
        let delta = d.value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (d.value - self.mean);
        self.clamped += d.clamped as usize;
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
        self.clamped += other.clamped;
    }
}

fn draw_one(p: &TailProblem, est: Estimator, params: EstimatorParams, rng: &mut RngStream) -> Result<EstimatorDraw> {
    match est {
        Estimator::PlainMc => p.draw_plain_mc(rng),
        Estimator::Nr1 => p.draw_nr1(rng),
        Estimator::Nr2 => p.draw_nr2(rng),
        Estimator::Nr3 => {
            let lambda = params.lambda.ok_or_else(|| domain!("nr3 needs a lambda value"))?;
            p.draw_nr3(lambda, rng)
        }
        Estimator::Nr4 => {
            let kappa = params.kappa.ok_or_else(|| domain!("nr4 needs a kappa value"))?;
            p.draw_nr4(kappa, rng)
        }
    }
}

fn run_chunk(
    p: &TailProblem,
    est: Estimator,
    params: EstimatorParams,
    reps: usize,
    seed: u64,
    chunk: usize,
) -> Result<Moments> {
    let start = chunk * CHUNK_SIZE;
    let len = CHUNK_SIZE.min(reps - start);
    let mut rng = RngStream::new(seed, chunk as u64);
    let mut acc = Moments::default();
    for _ in 0..len {
        acc.push(draw_one(p, est, params, &mut rng)?);
    }
    Ok(acc)
}

fn finish(est: Estimator, params: EstimatorParams, seed: u64, m: Moments) -> EstimatorReport {
    let n = m.count as f64;
    let variance = m.m2 / (n - 1.0);
    let second = m.mean * m.mean + m.m2 / n;
    EstimatorReport {
        estimator: est,
        mean: m.mean,
        variance,
        cv: variance.sqrt() / m.mean,
        rms_re: second.sqrt() / m.mean,
        std_error: (variance / n).sqrt(),
        reps: m.count,
        seed,
        parameter: match est {
            Estimator::Nr3 => params.lambda,
            Estimator::Nr4 => params.kappa,
            _ => None,
        },
        clamped: m.clamped,
    }
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < 2 {
        return Err(domain!("need at least 2 replications, got {reps}"));
    }
    Ok(())
}

/// Runs `reps` independent draws on the current rayon pool.
///
/// Work is cut into fixed chunks of [`CHUNK_SIZE`] draws, chunk `k` using
/// stream `k` of `seed`. Chunk summaries are merged in chunk order, so the
/// report is bit-identical for any number of worker threads.
pub fn run_replications(
    p: &TailProblem,
    est: Estimator,
    params: EstimatorParams,
    reps: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_reps(reps)?;
    let chunks = reps.div_ceil(CHUNK_SIZE);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|c| run_chunk(p, est, params, reps, seed, c))
        .collect::<Result<_>>()?;
    let mut total = Moments::default();
    for part in &parts {
        total.merge(part);
    }
    Ok(finish(est, params, seed, total))
}

/// Single-threaded reference path with the same chunking as
/// [`run_replications`].
pub fn run_replications_sequential(
    p: &TailProblem,
    est: Estimator,
    params: EstimatorParams,
    reps: usize,
    seed: u64,
) -> Result<EstimatorReport> {
    check_reps(reps)?;
    let mut total = Moments::default();
    for c in 0..reps.div_ceil(CHUNK_SIZE) {
        total.merge(&run_chunk(p, est, params, reps, seed, c)?);
    }
    Ok(finish(est, params, seed, total))
}

/// Nine evenly spaced interior points of the estimator's legal interval:
/// `k/(10n)` for λ and `1/n + k(1 − 1/n)/10` for κ, `k = 1..9`.
pub fn default_grid(est: Estimator, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = est
        .parameter_range(n)
        .ok_or_else(|| domain!("{est} has no tuning parameter"))?;
    Ok((1..=9).map(|k| lo + (hi - lo) * k as f64 / 10.0).collect())
}

/// Picks the grid value with the smallest pilot variance. Every grid point
/// is run with the same seed; ties go to the value nearest the middle of
/// the legal interval.
pub fn tune_parameter(
    p: &TailProblem,
    est: Estimator,
    grid: &[f64],
    pilot_reps: usize,
    seed: u64,
) -> Result<f64> {
    let (lo, hi) = est
        .parameter_range(p.n())
        .ok_or_else(|| domain!("{est} has no tuning parameter"))?;
    if grid.is_empty() {
        return Err(domain!("tuning grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|&&g| !(g > lo && g < hi)) {
        return Err(domain!("grid value {bad} outside ({lo}, {hi}) for {est}"));
    }
    if grid.len() == 1 {
        return Ok(grid[0]);
    }
    let mid = 0.5 * (lo + hi);
    let mut best: Option<(f64, f64)> = None;
    for &g in grid {
        let r = run_replications(p, est, EstimatorParams::for_estimator(est, g), pilot_reps, seed)?;
        let better = match best {
            None => true,
            Some((bv, bg)) => r.variance < bv || (r.variance == bv && (g - mid).abs() < (bg - mid).abs()),
        };
        if better {
            best = Some((r.variance, g));
        }
        log::debug!("tune {est} at {g}: variance {:e}", r.variance);
    }
    Ok(best.map(|(_, g)| g).unwrap_or(mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archimedean::Generator;
    use crate::estimators::Mode;
    use crate::marginals::{Marginal, ParetoMarginal};
    use std::sync::Arc;

    fn table3(s: f64) -> TailProblem {
        let m: Vec<Arc<dyn Marginal>> = vec![Arc::new(ParetoMarginal::new(2.5).unwrap()); 2];
        TailProblem::new(Mode::SurvivalY, Generator::clayton(0.5).unwrap(), m, s).unwrap()
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(EstimatorDraw::plain(x)));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..333].iter().for_each(|&x| a.push(EstimatorDraw::plain(x)));
        xs[333..].iter().for_each(|&x| b.push(EstimatorDraw::plain(x)));
        a.merge(&b);
        assert!((a.mean - whole.mean).abs() < 1e-12);
        assert!((a.m2 / whole.m2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_across_runs_and_paths() {
        let p = table3(100.0);
        let a = run_replications(&p, Estimator::Nr2, EstimatorParams::default(), 10_000, 42).unwrap();
        let b = run_replications(&p, Estimator::Nr2, EstimatorParams::default(), 10_000, 42).unwrap();
        let c = run_replications_sequential(&p, Estimator::Nr2, EstimatorParams::default(), 10_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.rms_re >= 1.0 && a.cv >= 0.0);
    }

    #[test]
    fn std_error_scales_with_reps() {
        let p = table3(100.0);
        let a = run_replications(&p, Estimator::Nr1, EstimatorParams::default(), 20_000, 1).unwrap();
        let b = run_replications(&p, Estimator::Nr1, EstimatorParams::default(), 40_000, 2).unwrap();
        let ratio = (a.std_error / a.mean) / (b.std_error / b.mean);
        assert!((1.2..=1.7).contains(&ratio), "{ratio}");
    }

    #[test]
    fn tuning_contracts() {
        let p = table3(100.0);
        assert_eq!(tune_parameter(&p, Estimator::Nr3, &[0.3], 100, 0).unwrap(), 0.3);
        assert!(tune_parameter(&p, Estimator::Nr3, &[], 100, 0).is_err());
        assert!(tune_parameter(&p, Estimator::Nr3, &[0.6], 100, 0).is_err());
        assert!(tune_parameter(&p, Estimator::Nr2, &[0.3], 100, 0).is_err());
        let grid = default_grid(Estimator::Nr4, 2).unwrap();
        assert_eq!(grid.len(), 9);
        let k = tune_parameter(&p, Estimator::Nr4, &grid, 2000, 3).unwrap();
        assert!(k > 0.5 && k < 1.0);
        let var = |g: f64| {
            run_replications(&p, Estimator::Nr4, EstimatorParams::for_estimator(Estimator::Nr4, g), 2000, 3)
                .unwrap()
                .variance
        };
        let best = var(k);
        for &g in &grid {
            assert!(best <= var(g));
        }
        let lam = default_grid(Estimator::Nr3, 5).unwrap();
        assert!((lam[0] - 0.02).abs() < 1e-15 && (lam[8] - 0.18).abs() < 1e-15);
    }

    #[test]
    fn rejects_too_few_reps() {
        let p = table3(100.0);
        assert!(run_replications(&p, Estimator::Nr2, EstimatorParams::default(), 1, 0).is_err());
        assert!(run_replications(&p, Estimator::Nr3, EstimatorParams::default(), 10, 0).is_err());
    }
}
