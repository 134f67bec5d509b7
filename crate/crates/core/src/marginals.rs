//! Marginal laws with positive support.
//!
//! Every marginal exposes the four transforms the samplers and estimators
//! need. Survival values are the primary quantity: in the tail they are
//! tiny and must not be recovered as `1 − cdf`.

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

pub trait Marginal: Debug + Send + Sync {
    /// `F(x) = Pr(X ≤ x)`; zero for `x < 0`.
    fn cdf(&self, x: f64) -> f64;

    /// `F̄(x) = Pr(X > x)`; one for `x < 0`.
    fn survival(&self, x: f64) -> f64;

    /// Unchecked `F^←(p)`.
    fn quantile_unchecked(&self, p: f64) -> f64;

    /// Unchecked `F̄^←(q)`; `q = 0` maps to `+inf`.
    fn survival_quantile_unchecked(&self, q: f64) -> f64;

    /// Short label used in diagnostics.
    fn describe(&self) -> String;

    fn quantile(&self, p: f64) -> Result<f64> {
        check_prob(p)?;
        Ok(self.quantile_unchecked(p))
    }

    fn survival_quantile(&self, q: f64) -> Result<f64> {
        check_prob(q)?;
        Ok(self.survival_quantile_unchecked(q))
    }
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(domain!("probability argument must lie in [0, 1], got {p}"))
    }
}

/// Pareto(α, 1): `F̄(x) = (1 + x)^(−α)` on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoMarginal {
    alpha: f64,
}

impl ParetoMarginal {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain!("Pareto tail index must be positive, got {alpha}"));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Marginal for ParetoMarginal {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -(-self.alpha * x.ln_1p()).exp_m1()
    }

    fn survival(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        (-self.alpha * x.ln_1p()).exp()
    }

    fn quantile_unchecked(&self, p: f64) -> f64 {
        (-(-p).ln_1p() / self.alpha).exp_m1()
    }

    fn survival_quantile_unchecked(&self, q: f64) -> f64 {
        (-q.ln() / self.alpha).exp_m1()
    }

    fn describe(&self) -> String {
        format!("pareto({})", self.alpha)
    }
}

/// Parses `"pareto:α1,α2,…"` into one marginal per listed index.
pub fn parse_marginals(spec: &str) -> Result<Vec<Arc<dyn Marginal>>> {
    let (family, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("marginal spec `{spec}` must look like pareto:a1,a2,...")))?;
    match family.trim().to_ascii_lowercase().as_str() {
        "pareto" => args
            .split(',')
            .map(|a| {
                let alpha: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad Pareto index `{}`", a.trim())))?;
                Ok(Arc::new(ParetoMarginal::new(alpha)?) as Arc<dyn Marginal>)
            })
            .collect(),
        other => Err(Error::Config(format!("unknown marginal family `{other}`"))),
    }
}
