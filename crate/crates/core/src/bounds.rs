//! Deterministic brackets of `Pr(S > s)` for two and three components.
//!
//! The region `{x ≥ 0 : Σxᵢ ≤ s}` is covered from inside and from outside by
//! unions of grid boxes of side `s/N`. `N = 2^m` for two components and
//! `3^m` for three, which makes successive grids nest and the brackets
//! shrink monotonically in `m`.
//!
//! Survival-copula setting: box probabilities are differences of the joint
//! survival function, which is small where the tail lives. Copula setting:
//! the tail is `Pr(max > s)` plus the boxes of `[0, s]^n` outside the
//! covering, each written through `1 − C`. Both keep every corner value
//! small at large `s`, so no bound is formed by subtracting from one.
//!
//! Corner values come from per-component latent grids computed once, so
//! each corner costs one generator evaluation.

use rayon::prelude::*;

use crate::error::{capability, domain, Result};
use crate::estimators::{Mode, TailProblem};
use crate::numerics::NeumaierSum;

/// Largest `m` accepted without an override for three components.
pub const MAX_M_DIM3: u32 = 10;
/// Largest `m` accepted without an override for two components.
pub const MAX_M_DIM2: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsPair {
    pub lower: f64,
    pub upper: f64,
    pub m: u32,
}

impl BoundsPair {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, lo: f64, hi: f64) -> bool {
        self.lower <= lo && hi <= self.upper
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundsOptions {
    /// Lift the grid-size guard.
    pub allow_large_grid: bool,
}

/// `Pr(X₁ ≤ x₁, …, Xₙ ≤ xₙ) = C(F₁(x₁), …, Fₙ(xₙ))`.
pub fn joint_cdf_x(p: &TailProblem, x: &[f64]) -> Result<f64> {
    if p.mode() != Mode::CopulaX {
        return Err(domain!("joint CDF form needs the copula setting"));
    }
    check_len(p, x)?;
    if x.iter().any(|&v| v <= 0.0) {
        return Ok(0.0);
    }
    let t: f64 = x.iter().enumerate().map(|(i, &v)| p.latent(i, v)).sum();
    Ok(p.generator().value(t))
}

/// `Pr(Y₁ > y₁, …, Yₙ > yₙ) = C(F̄₁(y₁), …, F̄ₙ(yₙ))`.
pub fn joint_sf_y(p: &TailProblem, y: &[f64]) -> Result<f64> {
    if p.mode() != Mode::SurvivalY {
        return Err(domain!("joint survival form needs the survival-copula setting"));
    }
    check_len(p, y)?;
    let t: f64 = y.iter().enumerate().map(|(i, &v)| p.latent(i, v)).sum();
    Ok(p.generator().value(t))
}

fn check_len(p: &TailProblem, x: &[f64]) -> Result<()> {
    if x.len() != p.n() {
        return Err(domain!("expected {} coordinates, got {}", p.n(), x.len()));
    }
    Ok(())
}

/// Lower and upper bounds of `Pr(S > s)` at precision `m`.
pub fn bounds_tail(p: &TailProblem, m: u32) -> Result<BoundsPair> {
    bounds_tail_with(p, m, BoundsOptions::default())
}

pub fn bounds_tail_with(p: &TailProblem, m: u32, opts: BoundsOptions) -> Result<BoundsPair> {
    let n = p.n();
    if m == 0 {
        return Err(domain!("precision m must be at least 1"));
    }
    let (base, guard) = match n {
        2 => (2usize, MAX_M_DIM2),
        3 => (3usize, MAX_M_DIM3),
        _ => {
            return Err(capability!(
                "deterministic bounds are implemented for 2 or 3 components, got {n}"
            ))
        }
    };
    if m > guard && !opts.allow_large_grid {
        return Err(capability!(
            "m = {m} exceeds the grid guard {guard} for {n} components; pass the override to run it"
        ));
    }
    let grid = base
        .checked_pow(m)
        .filter(|g| *g < usize::MAX / 4)
        .ok_or_else(|| capability!("grid {base}^{m} is too large"))?;
    let lat = latent_grids(p, grid);
    let gen = p.generator();
    let (lower, upper) = match (p.mode(), n) {
        (Mode::CopulaX, 2) => x_form2(grid, |[i, j]| gen.complement(lat[0][i] + lat[1][j])),
        (Mode::CopulaX, _) => x_form3(grid, |[i, j, k]| gen.complement(lat[0][i] + lat[1][j] + lat[2][k])),
        (Mode::SurvivalY, 2) => b_form2(grid, |i, j| gen.value(lat[0][i] + lat[1][j])),
        (Mode::SurvivalY, _) => b_form3(grid, |i, j, k| gen.value(lat[0][i] + lat[1][j] + lat[2][k])),
    };
    Ok(BoundsPair { lower: lower.clamp(0.0, 1.0), upper: upper.clamp(0.0, 1.0), m })
}

/// `latᵢ[k] = latent(i, k s / N)` for `k = 0..=N`. At `k = 0` this is `+inf`
/// in the copula setting (`F(0) = 0`) and `0` in the survival setting.
fn latent_grids(p: &TailProblem, grid: usize) -> Vec<Vec<f64>> {
    let s = p.threshold();
    (0..p.n())
        .map(|i| {
            (0..=grid)
                .into_par_iter()
                .map(|k| if k == 0 { p.latent(i, 0.0) } else { p.latent(i, k as f64 * s / grid as f64) })
                .collect()
        })
        .collect()
}

/// Compensated sum of `f(r)` over `range`, split into fixed blocks that are
/// summed in parallel and merged in order.
fn ordered_sum<F>(range: std::ops::Range<usize>, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    const BLOCK: usize = 1 << 14;
    let (start, end) = (range.start, range.end.max(range.start));
    let blocks = (end - start).div_ceil(BLOCK);
    let parts: Vec<NeumaierSum> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = start + b * BLOCK;
            (lo..(lo + BLOCK).min(end)).map(&f).collect()
        })
        .collect();
    let mut total = NeumaierSum::new();
    for part in &parts {
        total.merge(part);
    }
    total.total()
}

/// Mass of the box `∏ (x_lo, x_hi]` under the copula setting, from
/// `g = 1 − C` at the corners. Axes whose lower index is zero are differenced
/// outermost: on those faces `g` is exactly one and the face drops out
/// without rounding.
#[inline]
fn box_mass<const D: usize, G: Fn([usize; D]) -> f64>(g: &G, lo: [usize; D], hi: [usize; D]) -> f64 {
    let mut order = [0usize; D];
    for (a, o) in order.iter_mut().enumerate() {
        *o = a;
    }
    order.sort_by_key(|&a| lo[a] != 0);
    fn alternate<const D: usize, G: Fn([usize; D]) -> f64>(
        g: &G,
        order: &[usize; D],
        depth: usize,
        lo: &[usize; D],
        hi: &[usize; D],
        idx: [usize; D],
    ) -> f64 {
        if depth == D {
            return g(idx);
        }
        let a = order[depth];
        let (mut up, mut down) = (idx, idx);
        up[a] = hi[a];
        down[a] = lo[a];
        alternate(g, order, depth + 1, lo, hi, up) - alternate(g, order, depth + 1, lo, hi, down)
    }
    // C = 1 − g and the alternating sum of a constant vanishes.
    -alternate(g, &order, 0, &lo, &hi, hi)
}

/// Copula-setting bounds for two components: `Pr(max > s)` plus the boxes of
/// `[0, s]²` left uncovered by the inner (`T = N`) or outer (`T = N + 1`)
/// staircase, where column `i` is covered up to row `T − i`.
fn x_form2<G>(n: usize, g: G) -> (f64, f64)
where
    G: Fn([usize; 2]) -> f64 + Sync,
{
    let bound = |t: usize| {
        let mut acc = NeumaierSum::new();
        acc.add(g([n, n]));
        acc.add(ordered_sum(1..n + 1, |i| {
            let j0 = t.saturating_sub(i).min(n);
            if j0 == n {
                0.0
            } else {
                box_mass(&g, [i - 1, j0], [i, n])
            }
        }));
        acc.total()
    };
    (bound(n + 1), bound(n))
}

/// Survival-form bounds of `Pr(S > s)` for two components.
fn b_form2<G>(n: usize, g: G) -> (f64, f64)
where
    G: Fn(usize, usize) -> f64 + Sync,
{
    let mut upper = NeumaierSum::new();
    upper.add(ordered_sum(1..n, |i| g(i - 1, n - i) - g(i, n - i)));
    upper.add(g(n - 1, 0));
    let mut lower = NeumaierSum::new();
    lower.add(ordered_sum(1..n + 1, |i| g(i - 1, n + 1 - i) - g(i, n + 1 - i)));
    lower.add(g(n, 0));
    (lower.total(), upper.total())
}

/// Mass of the box `(x_{i-1}, x_i] × (x_{j-1}, x_j]` in the first two
/// coordinates at fixed third index `k`.
#[inline]
fn box_diff<F: Fn(usize, usize, usize) -> f64>(f: &F, i: usize, j: usize, k: usize) -> f64 {
    (f(i, j, k) - f(i - 1, j, k)) - (f(i, j - 1, k) - f(i - 1, j - 1, k))
}

/// Row sums `Σ_{j=1}^{last(i)} box_diff(i, j, total − i − j)`.
fn diagonal_rows<F>(rows: std::ops::Range<usize>, total: usize, f: &F) -> f64
where
    F: Fn(usize, usize, usize) -> f64 + Sync,
{
    ordered_sum(rows, |i| {
        let mut acc = NeumaierSum::new();
        for j in 1..total - i {
            acc.add(box_diff(f, i, j, total - i - j));
        }
        acc.total()
    })
}

/// Copula-setting bounds for three components: as [`x_form2`] with column
/// `(i, j)` covered up to layer `T − i − j`, `T = N` (inner) or `N + 2`
/// (outer).
fn x_form3<G>(n: usize, g: G) -> (f64, f64)
where
    G: Fn([usize; 3]) -> f64 + Sync,
{
    let bound = |t: usize| {
        let mut acc = NeumaierSum::new();
        acc.add(g([n, n, n]));
        acc.add(ordered_sum(1..n + 1, |i| {
            let mut row = NeumaierSum::new();
            for j in 1..=n {
                let k0 = t.saturating_sub(i + j).min(n);
                if k0 < n {
                    row.add(box_mass(&g, [i - 1, j - 1, k0], [i, j, n]));
                }
            }
            row.total()
        }));
        acc.total()
    };
    (bound(n + 2), bound(n))
}

fn b_form3<G>(n: usize, g: G) -> (f64, f64)
where
    G: Fn(usize, usize, usize) -> f64 + Sync,
{
    let mut upper = NeumaierSum::new();
    upper.add(diagonal_rows(1..n.saturating_sub(1), n, &g));
    upper.add(ordered_sum(1..n.saturating_sub(1), |i| g(i - 1, n - 1 - i, 0) - g(i, n - 1 - i, 0)));
    upper.add(g(n - 2, 0, 0));
    let mut lower = NeumaierSum::new();
    lower.add(diagonal_rows(1..n + 1, n + 2, &g));
    lower.add(ordered_sum(1..n + 1, |i| g(i - 1, n + 1 - i, 0) - g(i, n + 1 - i, 0)));
    lower.add(g(n, 0, 0));
    (lower.total(), upper.total())
}
