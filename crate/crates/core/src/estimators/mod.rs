//! Conditional Monte Carlo estimators of `Pr(X₁ + … + Xₙ > s)`.
//!
//! Two settings are supported. In [`Mode::CopulaX`] the vector has the
//! Archimedean copula `C`; in [`Mode::SurvivalY`] `C` is the survival copula,
//! so `Pr(Y > y) = C(F̄₁(y₁), …, F̄ₙ(yₙ))`. Every estimator splits off the
//! exactly known `Pr(max > s)` and simulates only the remaining event
//! `{sum > s, max ≤ s}`.
//!
//! All draws work with latent coordinates `tᵢ = Φ^←(Uᵢ)`. In X mode
//! `Xᵢ ≤ x ⇔ tᵢ ≥ Φ^←(Fᵢ(x))`; in Y mode `Yᵢ ≤ y ⇔ tᵢ ≤ Φ^←(F̄ᵢ(y))`.

mod replicate;

pub use replicate::{
    default_grid, run_replications, run_replications_sequential, tune_parameter, Estimator,
    EstimatorParams, EstimatorReport, CHUNK_SIZE,
};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::archimedean::{copula_union_prob, Generator, RadialDistribution};
use crate::error::{domain, numerical, Error, Result};
use crate::marginals::Marginal;
use crate::numerics::solve_monotone;
use crate::samplers::{sample_simplex, Band, BrechmannSampler, McNeilSampler, RngStream, SimplexPoint};

/// Relative tolerance of the radius root solves.
pub const ROOT_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `X` has copula `C`.
    CopulaX,
    /// `Y` has survival copula `C`.
    SurvivalY,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::CopulaX => "copula",
            Mode::SurvivalY => "survival",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "copula" | "x" => Ok(Mode::CopulaX),
            "survival" | "y" => Ok(Mode::SurvivalY),
            other => Err(domain!("unknown mode `{other}` (expected copula or survival)")),
        }
    }
}

/// Which order statistic of `{Φ^←(·ᵢ(level)) / wᵢ}` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStat {
    Max,
    SecondLargest,
    SecondSmallest,
    Min,
}

/// One realisation of an estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorDraw {
    pub value: f64,
    /// Set when a capped radial endpoint crossed the other one and the
    /// difference was clamped at zero.
    pub clamped: bool,
}

impl EstimatorDraw {
    fn plain(value: f64) -> Self {
        Self { value, clamped: false }
    }
}

/// A fully specified tail problem with its samplers pre-built.
#[derive(Debug, Clone)]
pub struct TailProblem {
    mode: Mode,
    gen: Generator,
    marginals: Vec<Arc<dyn Marginal>>,
    s: f64,
    radial: RadialDistribution,
    band_sampler: BrechmannSampler,
    sub_sampler: McNeilSampler,
    plain_sampler: McNeilSampler,
    max_tail: f64,
}

impl TailProblem {
    pub fn new(mode: Mode, gen: Generator, marginals: Vec<Arc<dyn Marginal>>, s: f64) -> Result<Self> {
        let n = marginals.len();
        if n == 0 {
            return Err(domain!("a tail problem needs at least one marginal"));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain!("threshold must be positive and finite, got {s}"));
        }
        gen.check_dim(n)?;
        let radial = RadialDistribution::new(gen.clone(), n)?;
        let band_sampler = BrechmannSampler::new(gen.clone(), n)?;
        let sub_sampler = McNeilSampler::new(gen.clone(), n.saturating_sub(1).max(1))?;
        let plain_sampler = McNeilSampler::new(gen.clone(), n)?;
        let mut p = Self {
            mode,
            gen,
            marginals,
            s,
            radial,
            band_sampler,
            sub_sampler,
            plain_sampler,
            max_tail: 0.0,
        };
        p.max_tail = p.compute_max_tail();
        Ok(p)
    }

    /// Same problem at another threshold.
    pub fn with_threshold(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(domain!("threshold must be positive and finite, got {s}"));
        }
        let mut p = self.clone();
        p.s = s;
        p.max_tail = p.compute_max_tail();
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.marginals.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn marginals(&self) -> &[Arc<dyn Marginal>] {
        &self.marginals
    }

    pub fn threshold(&self) -> f64 {
        self.s
    }

    pub fn radial(&self) -> &RadialDistribution {
        &self.radial
    }

    /// Latent cut point of component `i` at level `x`: `Φ^←(Fᵢ(x))` in X
    /// mode, `Φ^←(F̄ᵢ(x))` in Y mode.
    #[inline]
    pub fn latent(&self, i: usize, x: f64) -> f64 {
        let q = self.marginals[i].survival(x);
        match self.mode {
            Mode::CopulaX => self.gen.inverse_complement(q),
            Mode::SurvivalY => self.gen.inverse(q),
        }
    }

    /// Component value from its latent coordinate.
    #[inline]
    pub fn value_from_latent(&self, i: usize, t: f64) -> f64 {
        let q = match self.mode {
            Mode::CopulaX => self.gen.complement(t),
            Mode::SurvivalY => self.gen.value(t),
        };
        self.marginals[i].survival_quantile_unchecked(q)
    }

    fn compute_max_tail(&self) -> f64 {
        match self.mode {
            Mode::CopulaX => {
                let t: f64 = (0..self.n()).map(|i| self.latent(i, self.s)).sum();
                self.gen.complement(t)
            }
            Mode::SurvivalY => {
                let q: Vec<f64> = self.marginals.iter().map(|m| m.survival(self.s)).collect();
                // dimension was checked against the generator, far below the
                // inclusion-exclusion limit
                copula_union_prob(&self.gen, &q).unwrap_or(f64::NAN)
            }
        }
    }

    /// `Pr(max > s)`, exact.
    pub fn max_tail_prob(&self) -> f64 {
        self.max_tail
    }

    /// Sum of components at radius `r` along direction `w`.
    fn sum_at_radius(&self, w: &[f64], r: f64) -> f64 {
        w.iter().enumerate().map(|(i, &wi)| self.value_from_latent(i, r * wi)).sum()
    }

    fn order_stat(values: impl Iterator<Item = f64>, which: OrderStat) -> f64 {
        let mut v: Vec<f64> = values.collect();
        v.sort_by(f64::total_cmp);
        let k = v.len();
        match which {
            OrderStat::Max => v[k - 1],
            OrderStat::SecondLargest => v[k.saturating_sub(2)],
            OrderStat::SecondSmallest => v[1.min(k - 1)],
            OrderStat::Min => v[0],
        }
    }

    /// Order statistic of `{latent(i, level) / wᵢ}`.
    pub fn closed_radius_bound(&self, w: &SimplexPoint, level: f64, which: OrderStat) -> f64 {
        Self::order_stat(w.w.iter().enumerate().map(|(i, &wi)| self.latent(i, level) / wi), which)
    }

    /// The radius at which the sum along `w` equals `s`: `U^X` in X mode
    /// (sum decreasing in the radius), `L^Y` in Y mode (increasing).
    pub fn solve_radius_root(&self, w: &SimplexPoint) -> Result<f64> {
        let s = self.s;
        let n = self.n() as f64;
        let f = |r: f64| self.sum_at_radius(&w.w, r);
        let r = match self.mode {
            Mode::CopulaX => {
                let lo = self.closed_radius_bound(w, s, OrderStat::Max);
                let hi = self.closed_radius_bound(w, s / n, OrderStat::Max);
                solve_monotone(f, s, false, Some((lo, hi)), lo, ROOT_REL_TOL)?
            }
            Mode::SurvivalY => {
                let lo = self.closed_radius_bound(w, s / n, OrderStat::Min);
                let hi = self.closed_radius_bound(w, s, OrderStat::Min);
                solve_monotone(f, s, true, Some((lo, hi)), hi, ROOT_REL_TOL)?
            }
        };
        if !r.is_finite() {
            return Err(numerical!("radius root is not finite"));
        }
        Ok(r)
    }

    /// The radius interval on which `{sum > s, max ≤ s}` holds along `w`.
    pub fn radius_interval(&self, w: &SimplexPoint) -> Result<(f64, f64)> {
        let root = self.solve_radius_root(w)?;
        Ok(match self.mode {
            Mode::CopulaX => (self.closed_radius_bound(w, self.s, OrderStat::Max), root),
            Mode::SurvivalY => (root, self.closed_radius_bound(w, self.s, OrderStat::Min)),
        })
    }

    /// CDF of component `i` given the other components (in index order,
    /// skipping `i`), evaluated at `x`.
    pub fn conditional_component_cdf(&self, i: usize, others: &[f64], x: f64) -> Result<f64> {
        let n = self.n();
        if i >= n || others.len() + 1 != n {
            return Err(domain!("need {} conditioning values for index {i} of {n}", n - 1));
        }
        let a: f64 = (0..n)
            .filter(|&j| j != i)
            .zip(others)
            .map(|(j, &xj)| self.latent(j, xj))
            .sum();
        if !a.is_finite() {
            return Err(numerical!("conditioning values carry zero density"));
        }
        Ok(self.conditional_cdf_latent(a, i, x))
    }

    /// `F̄` of the conditional law of component `i`, given the latent sum of
    /// the others.
    fn conditional_sf_latent(&self, a: f64, i: usize, x: f64) -> f64 {
        let k = self.n() - 1;
        let delta = self.latent(i, x);
        let ln_ratio = self.gen.ln_deriv_ratio(k, a + delta, a);
        let sf = match self.mode {
            Mode::CopulaX => -ln_ratio.exp_m1(),
            Mode::SurvivalY => ln_ratio.exp(),
        };
        sf.clamp(0.0, 1.0)
    }

    fn conditional_cdf_latent(&self, a: f64, i: usize, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        1.0 - self.conditional_sf_latent(a, i, x)
    }

    fn is_argmax(values: &[f64], i: usize) -> bool {
        let xi = values[i];
        values.iter().enumerate().all(|(j, &x)| if j < i { xi > x } else { xi >= x })
    }

    /// Indicator-weighted band terms shared by NR1 (`level = s/n`) and NR4
    /// (`level = κs`).
    fn band_terms(&self, level: f64, rng: &mut RngStream) -> Result<f64> {
        let n = self.n();
        let mut total = 0.0;
        let mut values = vec![0.0; n];
        for i in 0..n {
            let m = &self.marginals[i];
            let (q_hi, q_lo) = (m.survival(level), m.survival(self.s));
            let weight = q_hi - q_lo;
            if !(weight > 0.0) {
                continue;
            }
            let band = match self.mode {
                Mode::CopulaX => Band::Upper(q_lo, q_hi),
                Mode::SurvivalY => Band::Lower(q_lo, q_hi),
            };
            let t = self.band_sampler.latent_band(i, band, rng)?;
            for (j, v) in values.iter_mut().enumerate() {
                *v = self.value_from_latent(j, t[j]);
            }
            let sum: f64 = values.iter().sum();
            if sum > self.s && Self::is_argmax(&values, i) {
                total += weight;
            }
        }
        Ok(total)
    }

    /// `Pr(max > s) + Σᵢ (F̄ᵢ(s/n) − F̄ᵢ(s)) · 1{sum > s, i is the max}` with
    /// the draw conditioned on `Xᵢ ∈ (s/n, s]`.
    pub fn draw_nr1(&self, rng: &mut RngStream) -> Result<EstimatorDraw> {
        if self.n() == 1 {
            return Ok(EstimatorDraw::plain(self.max_tail));
        }
        let level = self.s / self.n() as f64;
        Ok(EstimatorDraw::plain(self.max_tail + self.band_terms(level, rng)?))
    }

    /// `Pr(max > s) + Pr(L ≤ R ≤ U | W)` with the radius interval from
    /// [`TailProblem::radius_interval`].
    pub fn draw_nr2(&self, rng: &mut RngStream) -> Result<EstimatorDraw> {
        if self.n() == 1 {
            return Ok(EstimatorDraw::plain(self.max_tail));
        }
        let w = sample_simplex(self.n(), rng);
        let (lo, hi) = self.radius_interval(&w)?;
        debug_assert!(lo <= hi * (1.0 + 1e-8), "radius endpoints out of order: {lo} > {hi}");
        Ok(EstimatorDraw::plain(self.max_tail + self.radial.prob_between(lo, hi)))
    }

    /// Splits `{sum > s, max ≤ s}` by whether all but one component stay
    /// below `λs`. The single-large part is integrated analytically over the
    /// large component; the rest is a radial probability with a capped
    /// endpoint.
    pub fn draw_nr3(&self, lambda: f64, rng: &mut RngStream) -> Result<EstimatorDraw> {
        let n = self.n();
        if !(lambda > 0.0 && lambda < 1.0 / n as f64) {
            return Err(domain!("lambda must lie in (0, 1/{n}), got {lambda}"));
        }
        if n == 1 {
            return Ok(EstimatorDraw::plain(self.max_tail));
        }
        let s = self.s;
        let cut = lambda * s;

        let mut part1 = 0.0;
        for i in 0..n {
            let sub = self.sub_sampler.latent(rng)?;
            let mut a = 0.0;
            let mut total = 0.0;
            let mut gated = true;
            for (j, &t) in (0..n).filter(|&j| j != i).zip(&sub) {
                let x = self.value_from_latent(j, t);
                if x > cut {
                    gated = false;
                    break;
                }
                a += t;
                total += x;
            }
            if !gated {
                continue;
            }
            let diff = self.conditional_sf_latent(a, i, s - total) - self.conditional_sf_latent(a, i, s);
            part1 += diff.max(0.0);
        }

        let w = sample_simplex(n, rng);
        let root = self.solve_radius_root(&w)?;
        let (lo, hi) = match self.mode {
            Mode::CopulaX => {
                let lo = self.closed_radius_bound(&w, s, OrderStat::Max);
                let cap = self.closed_radius_bound(&w, cut, OrderStat::SecondLargest);
                (lo, root.min(cap))
            }
            Mode::SurvivalY => {
                let hi = self.closed_radius_bound(&w, s, OrderStat::Min);
                let cap = self.closed_radius_bound(&w, cut, OrderStat::SecondSmallest);
                (root.max(cap), hi)
            }
        };
        let clamped = hi < lo;
        let part2 = self.radial.prob_between(lo, hi);
        Ok(EstimatorDraw { value: self.max_tail + part1 + part2, clamped })
    }

    /// Splits `{sum > s, max ≤ s}` at `max = κs`: the band part above the cut
    /// is simulated as in NR1, the part below as a radial probability.
    pub fn draw_nr4(&self, kappa: f64, rng: &mut RngStream) -> Result<EstimatorDraw> {
        let n = self.n();
        if !(kappa > 1.0 / n as f64 && kappa < 1.0) {
            return Err(domain!("kappa must lie in (1/{n}, 1), got {kappa}"));
        }
        let s = self.s;
        let cut = kappa * s;
        let band = self.band_terms(cut, rng)?;

        let w = sample_simplex(n, rng);
        let root = self.solve_radius_root(&w)?;
        let (lo, hi) = match self.mode {
            Mode::CopulaX => (self.closed_radius_bound(&w, cut, OrderStat::Max), root),
            Mode::SurvivalY => (root, self.closed_radius_bound(&w, cut, OrderStat::Min)),
        };
        let clamped = hi < lo;
        let radial = self.radial.prob_between(lo, hi);
        Ok(EstimatorDraw { value: self.max_tail + band + radial, clamped })
    }

    /// Crude indicator `1{sum > s}` from one unconditional copula draw.
    pub fn draw_plain_mc(&self, rng: &mut RngStream) -> Result<EstimatorDraw> {
        let t = self.plain_sampler.latent(rng)?;
        let sum: f64 = t.iter().enumerate().map(|(i, &ti)| self.value_from_latent(i, ti)).sum();
        Ok(EstimatorDraw::plain(if sum > self.s { 1.0 } else { 0.0 }))
    }
}
