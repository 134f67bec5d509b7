use std::fmt;
use std::str::FromStr;

use crate::error::{capability, domain, Error, Result};
use crate::numerics::log_sum_exp;

/// Highest derivative order supplied for the Gumbel generator.
pub const GUMBEL_MAX_ORDER: usize = 4;

/// Derivative order advertised for Clayton. The closed form works for any
/// order; this only caps what `max_order` reports.
pub const CLAYTON_MAX_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `Φ(t) = (1 + t/θ)^(-θ)`, θ > 0.
    Clayton,
    /// `Φ(t) = exp(-t^b)`, b ∈ (0, 1).
    Gumbel,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Clayton => "clayton",
            Family::Gumbel => "gumbel",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clayton" => Ok(Family::Clayton),
            "gumbel" => Ok(Family::Gumbel),
            other => Err(domain!("unknown generator family `{other}` (expected clayton or gumbel)")),
        }
    }
}

/// Converts Kendall's tau to the generator parameter.
///
/// Clayton: `τ = θ⁻¹ / (2 + θ⁻¹)`, so `θ = (1 − τ) / (2τ)`.
/// Gumbel: `τ = 1 − b`.
pub fn tau_to_param(family: Family, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(domain!("Kendall's tau must lie in (0, 1), got {tau}"));
    }
    Ok(match family {
        Family::Clayton => (1.0 - tau) / (2.0 * tau),
        Family::Gumbel => 1.0 - tau,
    })
}

/// Inverse of [`tau_to_param`].
pub fn param_to_tau(family: Family, param: f64) -> f64 {
    match family {
        Family::Clayton => 1.0 / (2.0 * param + 1.0),
        Family::Gumbel => 1.0 - param,
    }
}

/// An Archimedean generator `Φ` with its inverse and derivatives.
///
/// All evaluations are done in log-space where that matters, and the
/// "complement" forms (`1 − Φ(t)` and `Φ^←(1 − ε)`) are exposed so that
/// callers working near `u = 1` never form `1 − u` explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    family: Family,
    param: f64,
    // Gumbel: Φ^(k)(t) = e^{-t^b} t^{-k} Σ_j coeffs[k][j] t^{jb}; stored as
    // ln|coeff| since every coefficient of a given order has sign (-1)^k.
    gumbel_ln_coeffs: Vec<Vec<f64>>,
}

impl Generator {
    pub fn new(family: Family, param: f64) -> Result<Self> {
        match family {
            Family::Clayton if !(param > 0.0 && param.is_finite()) => {
                return Err(domain!("Clayton parameter must be positive, got {param}"))
            }
            Family::Gumbel if !(param > 0.0 && param < 1.0) => {
                return Err(domain!("Gumbel parameter must lie in (0, 1), got {param}"))
            }
            _ => {}
        }
        let gumbel_ln_coeffs = match family {
            Family::Gumbel => gumbel_coefficients(param, GUMBEL_MAX_ORDER)
                .into_iter()
                .map(|row| row.into_iter().map(|c| c.abs().ln()).collect())
                .collect(),
            Family::Clayton => Vec::new(),
        };
        Ok(Self { family, param, gumbel_ln_coeffs })
    }

    pub fn clayton(theta: f64) -> Result<Self> {
        Self::new(Family::Clayton, theta)
    }

    pub fn gumbel(b: f64) -> Result<Self> {
        Self::new(Family::Gumbel, b)
    }

    pub fn from_tau(family: Family, tau: f64) -> Result<Self> {
        Self::new(family, tau_to_param(family, tau)?)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    pub fn kendall_tau(&self) -> f64 {
        param_to_tau(self.family, self.param)
    }

    /// Highest derivative order available from [`Generator::phi_deriv`].
    pub fn max_order(&self) -> usize {
        match self.family {
            Family::Clayton => CLAYTON_MAX_ORDER,
            Family::Gumbel => GUMBEL_MAX_ORDER,
        }
    }

    /// Largest copula dimension this generator supports (`n − 1 ≤ max_order`).
    pub fn max_dim(&self) -> usize {
        self.max_order() + 1
    }

    pub(crate) fn check_dim(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(domain!("dimension must be at least 1"));
        }
        if n > self.max_dim() {
            return Err(capability!(
                "{} generator supplies derivatives up to order {}, dimension {n} needs order {}",
                self.family,
                self.max_order(),
                n - 1
            ));
        }
        Ok(())
    }

    /// `Φ(t)`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain!("generator argument must be non-negative, got {t}"));
        }
        Ok(self.value(t))
    }

    /// `Φ^←(u)`; `u = 0` maps to `+inf`.
    pub fn phi_inverse(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(domain!("generator inverse needs u in [0, 1], got {u}"));
        }
        Ok(self.inverse(u))
    }

    /// `Φ^(k)(t)` for `k ≤ max_order`.
    pub fn phi_deriv(&self, k: usize, t: f64) -> Result<f64> {
        if k > self.max_order() {
            return Err(capability!(
                "{} generator supplies derivatives up to order {}, requested {k}",
                self.family,
                self.max_order()
            ));
        }
        if !(t >= 0.0) {
            return Err(domain!("generator argument must be non-negative, got {t}"));
        }
        if k == 0 {
            return Ok(self.value(t));
        }
        let mag = self.ln_abs_deriv(k, t).exp();
        Ok(if k % 2 == 0 { mag } else { -mag })
    }

    /// Right derivative `Φ^(k)+`. Both shipped families are smooth, so this
    /// equals the ordinary derivative.
    pub fn phi_right_deriv(&self, k: usize, t: f64) -> Result<f64> {
        self.phi_deriv(k, t)
    }

    /// Unchecked `Φ(t)` for `t ∈ [0, inf]`.
    #[inline]
    pub fn value(&self, t: f64) -> f64 {
        match self.family {
            Family::Clayton => {
                let th = self.param;
                (-th * (t / th).ln_1p()).exp()
            }
            Family::Gumbel => (-t.powf(self.param)).exp(),
        }
    }

    /// `1 − Φ(t)` without cancellation for small `t`.
    #[inline]
    pub fn complement(&self, t: f64) -> f64 {
        match self.family {
            Family::Clayton => {
                let th = self.param;
                -(-th * (t / th).ln_1p()).exp_m1()
            }
            Family::Gumbel => -(-t.powf(self.param)).exp_m1(),
        }
    }

    /// Unchecked `Φ^←(u)` for `u ∈ [0, 1]`.
    #[inline]
    pub fn inverse(&self, u: f64) -> f64 {
        match self.family {
            Family::Clayton => {
                let th = self.param;
                th * (-u.ln() / th).exp_m1()
            }
            Family::Gumbel => (-u.ln()).powf(1.0 / self.param),
        }
    }

    /// `Φ^←(1 − ε)`, accurate when `ε` is tiny.
    #[inline]
    pub fn inverse_complement(&self, eps: f64) -> f64 {
        let neg_ln = -(-eps).ln_1p();
        match self.family {
            Family::Clayton => {
                let th = self.param;
                th * (neg_ln / th).exp_m1()
            }
            Family::Gumbel => neg_ln.powf(1.0 / self.param),
        }
    }

    /// `ln |Φ^(k)(t)|`. The sign of `Φ^(k)` is `(−1)^k` for both families.
    pub fn ln_abs_deriv(&self, k: usize, t: f64) -> f64 {
        debug_assert!(k <= self.max_order());
        match self.family {
            Family::Clayton => {
                let th = self.param;
                let prefactor: f64 = (1..k).map(|j| (j as f64 / th).ln_1p()).sum();
                prefactor - (th + k as f64) * (t / th).ln_1p()
            }
            Family::Gumbel => {
                let b = self.param;
                if k == 0 {
                    return -t.powf(b);
                }
                if t == f64::INFINITY {
                    return f64::NEG_INFINITY;
                }
                let ln_t = t.ln();
                let terms: Vec<f64> = self.gumbel_ln_coeffs[k]
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(j, c)| c + j as f64 * b * ln_t)
                    .collect();
                -t.powf(b) - k as f64 * ln_t + log_sum_exp(&terms)
            }
        }
    }

    /// `ln(Φ^(k)(a) / Φ^(k)(b))`, accurate when `a` and `b` are close.
    pub fn ln_deriv_ratio(&self, k: usize, a: f64, b: f64) -> f64 {
        match self.family {
            Family::Clayton => {
                let th = self.param;
                -(th + k as f64) * ((a - b) / (th + b)).ln_1p()
            }
            Family::Gumbel => {
                if b == 0.0 || !b.is_finite() || !a.is_finite() {
                    return self.ln_abs_deriv(k, a) - self.ln_abs_deriv(k, b);
                }
                let p = self.param;
                // a^p - b^p = b^p (exp(p ln(a/b)) - 1)
                let rel = (a - b) / b;
                let pow_diff = b.powf(p) * (p * rel.ln_1p()).exp_m1();
                if k == 0 {
                    return -pow_diff;
                }
                let poly = |t: f64| {
                    let ln_t = t.ln();
                    let terms: Vec<f64> = self.gumbel_ln_coeffs[k]
                        .iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| c + j as f64 * p * ln_t)
                        .collect();
                    log_sum_exp(&terms)
                };
                -pow_diff - k as f64 * rel.ln_1p() + poly(a) - poly(b)
            }
        }
    }
}

/// Coefficients `c[k][j]` with `Φ^(k)(t) = e^{-t^b} Σ_j c[k][j] t^{jb-k}`.
///
/// Differentiating `c t^{jb-k} e^{-t^b}` gives
/// `c (jb-k) t^{jb-k-1} e^{-t^b} − c b t^{(j+1)b-k-1} e^{-t^b}`, hence
/// `c[k+1][j] = (jb − k) c[k][j] − b c[k][j−1]`.
pub fn gumbel_coefficients(b: f64, max_order: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for k in 0..max_order {
        let prev = &rows[k];
        let mut next = vec![0.0; k + 2];
        for (j, slot) in next.iter_mut().enumerate() {
            let keep = prev.get(j).map_or(0.0, |c| c * (j as f64 * b - k as f64));
            let shift = if j >= 1 { prev.get(j - 1).map_or(0.0, |c| -b * c) } else { 0.0 };
            *slot = keep + shift;
        }
        rows.push(next);
    }
    rows
}
