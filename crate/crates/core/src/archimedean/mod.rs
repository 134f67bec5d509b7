//! Archimedean generator machinery.
//!
//! An Archimedean copula is `C(u) = Φ(Φ^←(u₁) + … + Φ^←(uₙ))` for a
//! non-increasing generator `Φ` with `Φ(0) = 1`. Much of the crate works on
//! the *latent* scale `t = Φ^←(u)` rather than on `u` itself: the latent
//! coordinates add, and both `u` and `1 − u` can be recovered from them to
//! full relative precision.

mod generator;
mod kendall;
mod radial;

pub use generator::{
    gumbel_coefficients, param_to_tau, tau_to_param, Family, Generator, CLAYTON_MAX_ORDER,
    GUMBEL_MAX_ORDER,
};
pub use kendall::{kendall_cond_t_step, kendall_cond_u_step, KendallConditional};
pub use radial::RadialDistribution;

use crate::error::{capability, domain, Result};

/// Largest dimension accepted by the `2^n`-term inclusion–exclusion sums.
pub const MAX_INCLUSION_EXCLUSION_DIM: usize = 20;

fn check_unit(u: &[f64]) -> Result<()> {
    if let Some(bad) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(domain!("copula arguments must lie in [0, 1], got {bad}"));
    }
    Ok(())
}

/// `C(u₁, …, uₙ)`.
pub fn copula_cdf(gen: &Generator, u: &[f64]) -> Result<f64> {
    check_unit(u)?;
    if u.iter().any(|&x| x == 0.0) {
        return Ok(0.0);
    }
    let latent: f64 = u.iter().filter(|&&x| x < 1.0).map(|&x| gen.inverse(x)).sum();
    Ok(gen.value(latent))
}

/// `Pr(U₁ ≤ u₁ or … or Uₙ ≤ uₙ)` by inclusion–exclusion over non-empty
/// subsets. Terms are bounded by `min uᵢ`, so the sum is accurate even when
/// the result is tiny.
pub fn copula_union_prob(gen: &Generator, u: &[f64]) -> Result<f64> {
    check_unit(u)?;
    let n = u.len();
    if n > MAX_INCLUSION_EXCLUSION_DIM {
        return Err(capability!(
            "inclusion-exclusion limited to dimension {MAX_INCLUSION_EXCLUSION_DIM}, got {n}"
        ));
    }
    let latent: Vec<f64> = u.iter().map(|&x| gen.inverse(x)).collect();
    let mut acc = crate::numerics::NeumaierSum::new();
    for mask in 1u32..(1u32 << n) {
        let t: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| latent[i]).sum();
        let term = gen.value(t);
        if mask.count_ones() % 2 == 1 {
            acc.add(term);
        } else {
            acc.add(-term);
        }
    }
    Ok(acc.total().clamp(0.0, 1.0))
}

/// `C̄(u) = Pr(U₁ > u₁, …, Uₙ > uₙ)` by inclusion–exclusion,
/// `Σ_{J ⊆ {1..n}} (−1)^{|J|} C(u_J)`, clamped to `[0, 1]`.
pub fn survival_copula_prob(gen: &Generator, u: &[f64]) -> Result<f64> {
    Ok((1.0 - copula_union_prob(gen, u)?).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copula_examples() {
        let c = Generator::clayton(0.5).unwrap();
        assert_eq!(copula_cdf(&c, &[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert!((copula_cdf(&c, &[0.5, 1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((copula_cdf(&c, &[0.5, 0.5]).unwrap() - 7f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(copula_cdf(&c, &[0.0, 0.7]).unwrap(), 0.0);
        assert!(copula_cdf(&c, &[0.5, 1.2]).is_err());
    }

    #[test]
    fn survival_examples() {
        let c = Generator::clayton(0.5).unwrap();
        assert_eq!(survival_copula_prob(&c, &[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((survival_copula_prob(&c, &[0.3]).unwrap() - 0.7).abs() < 1e-15);
        let v = survival_copula_prob(&c, &[0.5, 0.5]).unwrap();
        assert!((v - 7f64.powf(-0.5)).abs() < 1e-14);
        let big = vec![0.5; 21];
        assert!(matches!(
            survival_copula_prob(&c, &big),
            Err(crate::Error::Capability(_))
        ));
    }

    #[test]
    fn bivariate_survival_identity() {
        for g in [Generator::clayton(0.8).unwrap(), Generator::gumbel(0.6).unwrap()] {
            for &(a, b) in &[(0.1, 0.2), (0.5, 0.9), (0.99, 0.3), (0.01, 0.999)] {
                let lhs = survival_copula_prob(&g, &[a, b]).unwrap();
                let rhs = 1.0 - a - b + copula_cdf(&g, &[a, b]).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "{a} {b}: {lhs} vs {rhs}");
            }
        }
    }
}
