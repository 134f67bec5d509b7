//! Acceptance run: one PASS/FAIL line per criterion, then supplementary
//! lines. Exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use tailsum::bounds::{bounds_tail, BoundsPair};
use tailsum::estimators::{Estimator, EstimatorReport, TailProblem};
use tailsum::experiment::{run_estimator, ParamChoice, Preset, RunOptions, Scenario};
use tailsum_acceptance::properties;
use tailsum_acceptance::reference::*;
use tailsum_acceptance::{matches_printed, Outcome};

const SEED: u64 = 20_240_601;
const REPS: usize = 100_000;

fn options() -> RunOptions {
    RunOptions {
        reps: REPS,
        seed: SEED,
        pilot_reps: REPS / 10,
        lambda: ParamChoice::Tune,
        kappa: ParamChoice::Tune,
        m: None,
        allow_large_grid: false,
        timings: false,
    }
}

fn scenario(preset: Preset, label: &str) -> Scenario {
    preset
        .scenarios()
        .into_iter()
        .find(|s| s.label() == label)
        .unwrap_or_else(|| panic!("{preset} has no scenario `{label}`"))
}

fn first(preset: Preset) -> Scenario {
    preset.scenarios().remove(0)
}

fn problem(sc: &Scenario, s: f64) -> TailProblem {
    sc.problem(s).expect("preset problems are valid")
}

fn bounds(sc: &Scenario, s: f64, m: u32) -> BoundsPair {
    bounds_tail(&problem(sc, s), m).expect("bounds within guard")
}

fn estimate(p: &TailProblem, est: Estimator) -> EstimatorReport {
    run_estimator(p, est, &options()).expect("estimator run")
}

fn combined_se(a: &EstimatorReport, b: &EstimatorReport) -> f64 {
    a.std_error.hypot(b.std_error)
}

fn pair_matches(b: &BoundsPair, lower: &str, upper: &str) -> (bool, String) {
    let ok = matches_printed(b.lower, lower) && matches_printed(b.upper, upper);
    (ok, format!("[{:.9e}, {:.9e}] vs [{lower}, {upper}]", b.lower, b.upper))
}

fn criterion_1() -> Outcome {
    let sc = first(Preset::Table1);
    let t0 = Instant::now();
    let computed: Vec<_> = TABLE1_BOUNDS.iter().map(|&(s, lo, hi)| (s, bounds(&sc, s, 20), lo, hi)).collect();
    let secs = t0.elapsed().as_secs_f64();
    let mut ok = secs < 10.0;
    let mut parts = Vec::new();
    for (s, b, lo, hi) in &computed {
        let (m, d) = pair_matches(b, lo, hi);
        ok &= m;
        parts.push(format!("s={s:e} {d}{}", if m { "" } else { " MISMATCH" }));
    }
    Outcome::new(ok, format!("m=20 in {secs:.1}s (limit 10s); {}", parts.join("; ")))
}

fn criterion_2() -> Outcome {
    let sc = first(Preset::Table2);
    let t0 = Instant::now();
    let b = bounds(&sc, 1.0, 8);
    let secs = t0.elapsed().as_secs_f64();
    let (m, d) = pair_matches(&b, TABLE2_BOUNDS_S1.0, TABLE2_BOUNDS_S1.1);
    Outcome::new(m && secs < 180.0, format!("m=8, s=1: {d} in {secs:.1}s (limit 180s)"))
}

fn criterion_3() -> Outcome {
    let sc = first(Preset::Table3);
    let mut ok = true;
    let mut parts = Vec::new();
    for &(s, lo, hi) in &TABLE3_BOUNDS {
        let (m, d) = pair_matches(&bounds(&sc, s, 20), lo, hi);
        ok &= m;
        parts.push(format!("s={s:e} {d}"));
    }
    Outcome::new(ok, format!("m=20; {}", parts.join("; ")))
}

fn criterion_4() -> Outcome {
    let sc = first(Preset::Table4);
    let (ref_lo, ref_hi) = TABLE4_BOUNDS_S100;
    let b = bounds(&sc, 1e2, 8);
    let contains = b.lower <= ref_lo && ref_hi <= b.upper;
    let rel_width = b.width() / b.midpoint();
    let coarse = bounds(&sc, 1e2, 6);
    Outcome::new(
        contains && rel_width < 0.05,
        format!(
            "m=8, s=1e2: [{:.6e}, {:.6e}], relative width {rel_width:.2e}; contains [{ref_lo:e}, {ref_hi:e}]: {contains}; \
             m=6 gives [{:.6e}, {:.6e}]",
            b.lower, b.upper, coarse.lower, coarse.upper
        ),
    )
}

/// Per-cell data shared by criterion 5 and the bracketing check.
struct Cell {
    name: String,
    bounds: BoundsPair,
    reports: Vec<EstimatorReport>,
}

fn table_cells() -> Vec<Cell> {
    let mut cells = Vec::new();
    for preset in [Preset::Table1, Preset::Table2, Preset::Table3, Preset::Table4] {
        let m = preset.default_m().expect("tables 1-4 carry bounds");
        for sc in preset.scenarios() {
            for &s in &sc.s_values {
                let p = problem(&sc, s);
                let b = bounds_tail(&p, m).expect("bounds within guard");
                let reports = Estimator::CONDITIONAL.iter().map(|&e| estimate(&p, e)).collect();
                cells.push(Cell { name: format!("{preset} s={s:e}"), bounds: b, reports });
            }
        }
    }
    cells
}

fn criterion_5(cells: &[Cell], secs: f64) -> Outcome {
    let mut misses = Vec::new();
    let mut total = 0;
    for c in cells {
        let mid = c.bounds.midpoint();
        for r in &c.reports {
            total += 1;
            let z = (r.mean - mid) / r.std_error;
            if !(z.abs() <= 3.0) {
                misses.push(format!(
                    "{} {}: mean {:.6e} mid {mid:.6e} se {:.2e} ({z:+.1} se)",
                    c.name, r.estimator, r.mean, r.std_error
                ));
            }
        }
    }
    let ok = misses.is_empty() && secs < 600.0;
    let shown = if misses.is_empty() { String::new() } else { format!("; misses: {}", misses.join("; ")) };
    Outcome::new(
        ok,
        format!("{}/{total} estimates within 3 se of the bounds midpoint, {secs:.0}s (limit 600s){shown}", total - misses.len()),
    )
}

fn bracketing(cells: &[Cell]) -> Outcome {
    let mut misses = Vec::new();
    let mut total = 0;
    for c in cells {
        for r in &c.reports {
            total += 1;
            let slack = 3.0 * r.std_error;
            if !(r.mean >= c.bounds.lower - slack && r.mean <= c.bounds.upper + slack) {
                misses.push(format!("{} {}", c.name, r.estimator));
            }
        }
    }
    Outcome::new(
        misses.is_empty(),
        format!("{}/{total} means inside [lower - 3se, upper + 3se] {}", total - misses.len(), misses.join(", ")),
    )
}

fn criterion_6() -> Outcome {
    let p = problem(&first(Preset::Table3), 1e2);
    let nr1 = estimate(&p, Estimator::Nr1);
    let nr2 = estimate(&p, Estimator::Nr2);
    let cv_ok = (0.4..=0.8).contains(&nr1.cv) && (0.1..=0.25).contains(&nr2.cv);

    let sc5 = scenario(Preset::Table5, "survival clayton tau=0.5");
    let c20 = estimate(&problem(&sc5, 20.0), Estimator::Nr1).cv;
    let c200 = estimate(&problem(&sc5, 200.0), Estimator::Nr1).cv;
    let change = (c20 - c200).abs() / c20.min(c200);
    Outcome::new(
        cv_ok && change < 0.25,
        format!(
            "table 3 s=1e2: cv(nr1) {:.3} in [0.4, 0.8], cv(nr2) {:.3} in [0.1, 0.25] (reference {} / {}); \
             n=5 survival clayton tau=0.5 cv(nr1) {c20:.3} at s=20, {c200:.3} at s=200, change {:.1}%",
            nr1.cv,
            nr2.cv,
            TABLE3_CV.0,
            TABLE3_CV.1,
            100.0 * change
        ),
    )
}

fn criterion_7() -> Outcome {
    let sc = scenario(Preset::Table6, "survival clayton tau=0.9");
    let p = problem(&sc, 200.0);
    let r: Vec<EstimatorReport> = Estimator::CONDITIONAL.iter().map(|&e| estimate(&p, e)).collect();
    let (nr1, rest) = (&r[0], &r[1..]);
    let mut ok = true;
    let mut notes = Vec::new();
    for (i, a) in rest.iter().enumerate() {
        ok &= matches_printed(a.mean, TABLE6_HEADLINE);
        for b in &rest[i + 1..] {
            let z = (a.mean - b.mean) / combined_se(a, b);
            ok &= z.abs() <= 3.0;
            notes.push(format!("{}-{} {z:+.2} se", a.estimator, b.estimator));
        }
    }
    let z1 = (nr1.mean - rest[0].mean) / combined_se(nr1, &rest[0]);
    ok &= z1.abs() <= 3.0;
    Outcome::new(
        ok,
        format!(
            "means nr1 {:.6e}, nr2 {:.6e}, nr3 {:.6e}, nr4 {:.6e} (reference nr2-nr4 {:?}, headline {TABLE6_HEADLINE}); {}; nr1-nr2 {z1:+.2} se",
            nr1.mean,
            rest[0].mean,
            rest[1].mean,
            rest[2].mean,
            TABLE6_SURVIVAL_CLAYTON_09,
            notes.join(", ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let t0 = Instant::now();
    let suites: [(&str, fn() -> Result<String, String>); 5] = [
        ("finite differences", properties::generator_finite_differences),
        ("radial inequality", properties::radial_inequality_grid),
        ("cross-engine KS", || properties::cross_engine_ks(100_000)),
        ("bounds refinement", properties::bounds_refinement),
        ("endpoint ordering", || properties::endpoint_ordering(10_000)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, suite) in suites {
        let s0 = Instant::now();
        let r = suite();
        ok &= r.is_ok();
        let (tag, msg) = match r {
            Ok(m) => ("ok", m),
            Err(m) => ("FAILED", m),
        };
        parts.push(format!("{name} {tag} ({msg}, {:.0}s)", s0.elapsed().as_secs_f64()));
    }
    let secs = t0.elapsed().as_secs_f64();
    Outcome::new(ok && secs < 300.0, format!("{secs:.0}s (limit 300s); {}", parts.join("; ")))
}

fn run(id: &str, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
    println!(
        "{id} {title}: {} [{:.1}s] {}",
        if outcome.pass { "PASS" } else { "FAIL" },
        t0.elapsed().as_secs_f64(),
        outcome.detail
    );
    outcome.pass
}

fn main() {
    println!("acceptance run, seed {SEED}, {REPS} replications per estimate");
    let mut results = vec![
        run("criterion 1", "table 1 bounds", criterion_1),
        run("criterion 2", "table 2 bounds", criterion_2),
        run("criterion 3", "table 3 bounds", criterion_3),
        run("criterion 4", "table 4 containment", criterion_4),
    ];

    let t0 = Instant::now();
    let cells = catch_unwind(table_cells).ok();
    let secs = t0.elapsed().as_secs_f64();
    match &cells {
        Some(c) => results.push(run("criterion 5", "estimator agreement", || criterion_5(c, secs))),
        None => results.push(run("criterion 5", "estimator agreement", || Outcome::new(false, "estimator runs panicked"))),
    }
    results.push(run("criterion 6", "relative-error magnitudes", criterion_6));
    results.push(run("criterion 7", "table 6 spot check", criterion_7));
    results.push(run("criterion 8", "property suites", criterion_8));

    if let Some(c) = &cells {
        run("supplementary", "bounds bracketing with 3 se slack", || bracketing(c));
    }

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
