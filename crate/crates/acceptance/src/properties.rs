//! Property suites. Each returns `Ok(summary)` or `Err(first failures)`.

use tailsum::archimedean::{Family, Generator, RadialDistribution};
use tailsum::bounds::bounds_tail;
use tailsum::experiment::Preset;
use tailsum::samplers::{sample_simplex, BrechmannSampler, McNeilSampler, RngStream};
use tailsum::Result;

use crate::ks_two_sample;

const TAUS: [f64; 3] = [0.1, 0.5, 0.9];

fn generators() -> Result<Vec<Generator>> {
    let mut out = Vec::new();
    for family in [Family::Clayton, Family::Gumbel] {
        for tau in TAUS {
            out.push(Generator::from_tau(family, tau)?);
        }
    }
    Ok(out)
}

fn log_grid(lo_exp: i32, hi_exp: i32, per_decade: usize) -> Vec<f64> {
    let steps = (hi_exp - lo_exp) as usize * per_decade;
    (0..=steps)
        .map(|k| 10f64.powf(lo_exp as f64 + k as f64 / per_decade as f64))
        .collect()
}

fn verdict(checked: usize, failures: Vec<String>, what: &str) -> std::result::Result<String, String> {
    if failures.is_empty() {
        Ok(format!("{checked} {what} checked"))
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        Err(format!("{} of {checked} {what} failed: {}", failures.len(), shown.join("; ")))
    }
}

/// `Φ^(k)` against Richardson-extrapolated central differences of
/// `Φ^(k−1)`, `k = 1..4`, `t ∈ [1e−3, 1e3]`, relative tolerance 1e−5. The
/// step is a thousandth of `min(t, |Φ^(k−1)/Φ^(k)|)`.
pub fn generator_finite_differences() -> std::result::Result<String, String> {
    let gens = generators().map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in &gens {
        let f = |k: usize, t: f64| if k == 0 { g.value(t) } else { g.phi_deriv(k, t).unwrap() };
        for k in 1..=4.min(g.max_order()) {
            for t in log_grid(-3, 3, 2) {
                // Step small against both t and the local scale of Φ^(k−1).
                let scale = (f(k - 1, t) / f(k, t)).abs();
                let h = 1e-3 * t.min(scale);
                let d = |h: f64| (f(k - 1, t + h) - f(k - 1, t - h)) / (2.0 * h);
                let fd = (4.0 * d(h / 2.0) - d(h)) / 3.0;
                let exact = f(k, t);
                let rel = ((fd - exact) / exact).abs();
                checked += 1;
                if !(rel <= 1e-5) {
                    failures.push(format!("{} {} k={k} t={t:e}: rel {rel:e}", g.family(), g.param()));
                }
            }
        }
    }
    verdict(checked, failures, "derivative points")
}

/// `Φ(a·x)/(1−a)^(n−1) ≥ F̄_R(x)` for `a ∈ {0.1, 0.5, 0.9}`, `n = 2..5`,
/// `x ∈ [1e−3, 1e6]`.
pub fn radial_inequality_grid() -> std::result::Result<String, String> {
    let gens = generators().map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in &gens {
        for n in 2..=5 {
            let r = RadialDistribution::new(g.clone(), n).map_err(|e| e.to_string())?;
            for x in log_grid(-3, 6, 4) {
                let sf = r.sf(x);
                for a in [0.1, 0.5, 0.9] {
                    let lhs = g.value(a * x) / (1.0 - a).powi(n as i32 - 1);
                    checked += 1;
                    if lhs < sf * (1.0 - 1e-12) {
                        failures.push(format!("{} {} n={n} a={a} x={x:e}: {lhs:e} < {sf:e}", g.family(), g.param()));
                    }
                }
            }
        }
    }
    verdict(checked, failures, "grid points")
}

/// Largest KS statistic between the two engines over the margins, the
/// pairwise statistic `C(U₁, U₂)` and the Kendall statistic `C(U)`.
pub fn cross_engine_ks(draws: usize) -> std::result::Result<String, String> {
    let gens = generators().map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (gi, g) in gens.iter().enumerate() {
        for n in [2usize, 5] {
            let engines = (|| -> Result<_> {
                let mn = McNeilSampler::new(g.clone(), n)?;
                let br = BrechmannSampler::new(g.clone(), n)?;
                let mut ra = RngStream::new(101 + gi as u64, n as u64);
                let mut rb = RngStream::new(202 + gi as u64, n as u64);
                let a = (0..draws).map(|_| mn.latent(&mut ra)).collect::<Result<Vec<_>>>()?;
                let b = (0..draws).map(|_| br.latent(&mut rb)).collect::<Result<Vec<_>>>()?;
                Ok((a, b))
            })();
            let (a, b) = engines.map_err(|e| e.to_string())?;
            // Margins, then the pairwise and full Kendall statistics.
            let names: Vec<String> = (1..=n)
                .map(|i| format!("U{i}"))
                .chain(["C(U1,U2)".to_string(), "C(U)".to_string()])
                .collect();
            let stats = |t: &[f64]| -> Vec<f64> {
                let mut v: Vec<f64> = t.iter().map(|&ti| g.value(ti)).collect();
                v.push(g.value(t[0] + t[1]));
                v.push(g.value(t.iter().sum()));
                v
            };
            let sa: Vec<Vec<f64>> = a.iter().map(|t| stats(t)).collect();
            let sb: Vec<Vec<f64>> = b.iter().map(|t| stats(t)).collect();
            for (k, name) in names.iter().enumerate() {
                let mut xa: Vec<f64> = sa.iter().map(|v| v[k]).collect();
                let mut xb: Vec<f64> = sb.iter().map(|v| v[k]).collect();
                let d = ks_two_sample(&mut xa, &mut xb);
                worst = worst.max(d);
                checked += 1;
                if !(d < 0.015) {
                    failures.push(format!("{} {} n={n} {name}: KS {d:.4}", g.family(), g.param()));
                }
            }
        }
    }
    verdict(checked, failures, "KS comparisons").map(|s| format!("{s}, largest KS {worst:.4}"))
}

/// Bounds at `m + 1` nested in bounds at `m`: `m = 2..8` for two
/// components and `m = 2..6` for three, on every Table 1–4 cell.
pub fn bounds_refinement() -> std::result::Result<String, String> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for preset in [Preset::Table1, Preset::Table2, Preset::Table3, Preset::Table4] {
        for sc in preset.scenarios() {
            let top = if sc.alphas.len() == 2 { 8 } else { 6 };
            for &s in &sc.s_values {
                let p = sc.problem(s).map_err(|e| e.to_string())?;
                let mut prev = bounds_tail(&p, 2).map_err(|e| e.to_string())?;
                for m in 3..=top {
                    let b = bounds_tail(&p, m).map_err(|e| e.to_string())?;
                    let tol = 1e-12 * b.upper + 4.0 * f64::EPSILON;
                    checked += 1;
                    if b.lower < prev.lower - tol || b.upper > prev.upper + tol || b.lower > b.upper + tol {
                        failures.push(format!(
                            "{preset} s={s:e} m={m}: [{:e}, {:e}] not inside [{:e}, {:e}]",
                            b.lower, b.upper, prev.lower, prev.upper
                        ));
                    }
                    prev = b;
                }
            }
        }
    }
    verdict(checked, failures, "refinement steps")
}

/// `L ≤ U` for the radius interval on `draws` simplex points per preset
/// cell.
pub fn endpoint_ordering(draws: usize) -> std::result::Result<String, String> {
    let mut failures = Vec::new();
    let mut checked = 0;
    for preset in Preset::ALL {
        for (k, sc) in preset.scenarios().into_iter().enumerate() {
            for &s in &sc.s_values {
                let p = sc.problem(s).map_err(|e| e.to_string())?;
                let mut rng = RngStream::new(7_000 + k as u64, s.to_bits());
                for _ in 0..draws {
                    let w = sample_simplex(p.n(), &mut rng);
                    let (lo, hi) = p.radius_interval(&w).map_err(|e| e.to_string())?;
                    checked += 1;
                    if !(lo <= hi * (1.0 + 1e-9)) {
                        failures.push(format!("{preset} {} s={s:e}: L={lo:e} > U={hi:e}", sc.label()));
                    }
                }
            }
        }
    }
    verdict(checked, failures, "draws")
}
