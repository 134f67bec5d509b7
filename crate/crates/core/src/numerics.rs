//! Small numerical kernels shared by the samplers, estimators and bounds:
//! compensated summation and bracketed bisection for monotone functions on
//! the positive half-line.

use crate::error::{numerical, Result};

/// Neumaier's variant of Kahan summation.
///
/// Keeps a running compensation term so that sums whose partial totals
/// cancel across many orders of magnitude stay accurate to a few ulps.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator into this one.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Maximum number of bracket doublings before giving up.
pub const MAX_BRACKET_STEPS: usize = 200;
/// Maximum number of bisection steps once a bracket is found.
pub const MAX_BISECTION_STEPS: usize = 200;

/// Solves `f(x) = target` for a monotone `f` on `(0, inf)`.
///
/// `increasing` gives the direction of monotonicity. The initial bracket is
/// `[lo, hi]` if supplied; otherwise it is grown geometrically from
/// `[start/2, start]`. Bisection uses the geometric midpoint while the
/// bracket spans more than a factor of two, so roots anywhere between
/// 1e-300 and 1e300 are reached in a few hundred steps. Stops when the
/// bracket's relative width drops under `rel_tol`.
pub fn solve_monotone<F>(
    f: F,
    target: f64,
    increasing: bool,
    bracket: Option<(f64, f64)>,
    start: f64,
    rel_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    // below(x) is true when x lies left of the root.
    let below = |x: f64| {
        let v = f(x);
        if increasing {
            v < target
        } else {
            v > target
        }
    };

    let (mut lo, mut hi) = match bracket {
        Some((lo, hi)) if lo > 0.0 && hi >= lo && hi.is_finite() => (lo, hi),
        _ => {
            let start = if start.is_finite() && start > 0.0 { start } else { 1.0 };
            (start * 0.5, start)
        }
    };

    // Grow the upper end until it sits right of the root.
    let mut steps = 0;
    while below(hi) {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS || !hi.is_finite() {
            return Err(numerical!(
                "no bracket found after {MAX_BRACKET_STEPS} doublings (target {target:e})"
            ));
        }
    }
    // Shrink the lower end until it sits left of the root; a root at 0 is
    // reported as the smallest bracket reached.
    let mut halvings = 0;
    while !below(lo) {
        hi = lo;
        lo *= 0.5;
        halvings += 1;
        if lo == 0.0 || halvings > 2200 {
            return Ok(hi);
        }
    }

    for _ in 0..MAX_BISECTION_STEPS {
        if hi - lo <= rel_tol * hi {
            break;
        }
        let mid = if hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ln(k!)` for small `k`.
pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// `ln(sum_i exp(x_i))` without overflow; `-inf` for an empty slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = xs.iter().sum();
        let comp: NeumaierSum = xs.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(comp.total(), 2.0);
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let whole: NeumaierSum = xs.iter().copied().collect();
        let mut left: NeumaierSum = xs[..400].iter().copied().collect();
        let right: NeumaierSum = xs[400..].iter().copied().collect();
        left.merge(&right);
        assert!((whole.total() - left.total()).abs() < 1e-15);
    }

    #[test]
    fn solves_across_scales() {
        for &root in &[1e-250f64, 1e-12, 0.3, 1.0, 7.0, 1e9, 1e50] {
            let x = solve_monotone(|x| x.ln(), root.ln(), true, None, 1.0, 1e-13).unwrap();
            assert!((x / root - 1.0).abs() < 1e-12, "{root} -> {x}");
            let y = solve_monotone(|x| -x.ln(), -root.ln(), false, None, 1.0, 1e-13).unwrap();
            assert!((y / root - 1.0).abs() < 1e-12, "{root} -> {y}");
        }
    }

    #[test]
    fn uses_supplied_bracket() {
        let x = solve_monotone(|x| x * x, 2.0, true, Some((1.0, 2.0)), 1.0, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn unbounded_function_fails_to_bracket() {
        let err = solve_monotone(|_| 0.0, 1.0, true, None, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, crate::Error::Numerical(_)));
    }

    #[test]
    fn log_sum_exp_is_stable() {
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }
}
