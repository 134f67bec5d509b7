use super::Generator;
use crate::error::{numerical, Result};
use crate::numerics::{ln_factorial, solve_monotone};

/// Conditional law of `Z = C(U)` given `U₁ = u₁`.
///
/// On the latent scale, with `t₁ = Φ^←(u₁)` and `t = Φ^←(z)`,
///
/// ```text
/// F(z | u₁) = Σ_{j=0}^{n−2} (t − t₁)^j / j! · |Φ^(j+1)(t)| / |Φ'(t₁)|
/// ```
///
/// Every term is non-negative, so no cancellation occurs. The support is
/// `z ∈ (0, u₁)`, i.e. `t ∈ (t₁, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KendallConditional {
    gen: Generator,
    dim: usize,
    ln_fact: Vec<f64>,
}

impl KendallConditional {
    pub fn new(gen: Generator, dim: usize) -> Result<Self> {
        gen.check_dim(dim)?;
        let ln_fact = (0..dim).map(ln_factorial).collect();
        Ok(Self { gen, dim, ln_fact })
    }

    pub fn generator(&self) -> &Generator {
        &self.gen
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `F(z | u₁)`; 1 for `z ≥ u₁`, 0 for `z ≤ 0`.
    pub fn cdf(&self, z: f64, u1: f64) -> f64 {
        if z >= u1 {
            return 1.0;
        }
        if z <= 0.0 {
            return 0.0;
        }
        self.cdf_latent(self.gen.inverse(z), self.gen.inverse(u1))
    }

    /// The same conditional CDF in latent coordinates `t = Φ^←(z)`,
    /// `t1 = Φ^←(u₁)`. Decreasing in `t`.
    pub fn cdf_latent(&self, t: f64, t1: f64) -> f64 {
        if t <= t1 {
            return 1.0;
        }
        if t == f64::INFINITY {
            return 0.0;
        }
        let d = t - t1;
        let mut total = self.gen.ln_deriv_ratio(1, t, t1).exp();
        if self.dim > 2 {
            let ln_d = d.ln();
            let ln_den = self.gen.ln_abs_deriv(1, t1);
            for j in 1..=self.dim - 2 {
                let ln_term = j as f64 * ln_d - self.ln_fact[j] + self.gen.ln_abs_deriv(j + 1, t)
                    - ln_den;
                total += ln_term.exp();
            }
        }
        total.clamp(0.0, 1.0)
    }

    /// Draws the latent `Φ^←(Z)` given `t1 = Φ^←(u₁)` by inverting the
    /// conditional CDF at level `v`.
    pub fn inverse_latent(&self, v: f64, t1: f64) -> Result<f64> {
        if v >= 1.0 {
            return Ok(t1);
        }
        if v <= 0.0 {
            return Ok(f64::INFINITY);
        }
        // solve over the gap d = t − t₁ so that tiny gaps keep relative precision
        let start = if t1 > 0.0 && t1.is_finite() { t1 } else { 1.0 };
        let d = solve_monotone(|d| self.cdf_latent(t1 + d, t1), v, false, None, start, 1e-12)?;
        Ok(t1 + d)
    }
}

/// Latent form of the step that fills in component `j` (1-based, `2 ≤ j ≤ n`)
/// once `Φ^←(Z)` and the first `j − 1` latent coordinates are known.
///
/// The remaining mass `z_inv − partial_sum` is split by stick-breaking:
/// component `j < n` takes the fraction `1 − v^{1/(n−j)}`, and component `n`
/// takes whatever is left.
pub fn kendall_cond_t_step(n: usize, j: usize, v: f64, z_inv: f64, partial_sum: f64) -> Result<f64> {
    let rest = z_inv - partial_sum;
    if rest < 0.0 {
        if rest < -1e-12 * z_inv.abs() {
            return Err(numerical!(
                "latent partial sum {partial_sum:e} exceeds Φ^←(z) = {z_inv:e}"
            ));
        }
        return Ok(0.0);
    }
    if j >= n {
        return Ok(rest);
    }
    let frac = -(v.ln() / (n - j) as f64).exp_m1();
    Ok(frac * rest)
}

/// `u_j = Φ((1 − v^{1/(n−j)}) (Φ^←(z) − Σ_{k<j} Φ^←(u_k)))`, with the
/// residual `Φ(Φ^←(z) − Σ_{k<n} Φ^←(u_k))` at `j = n`.
pub fn kendall_cond_u_step(
    gen: &Generator,
    n: usize,
    j: usize,
    v: f64,
    z_inv: f64,
    partial_sum: f64,
) -> Result<f64> {
    Ok(gen.value(kendall_cond_t_step(n, j, v, z_inv, partial_sum)?))
}
