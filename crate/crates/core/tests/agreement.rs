//! The conditional estimators against crude Monte Carlo and the bounds, and
//! the flat relative error of NR1 and NR4 as the threshold grows.

use std::sync::Arc;

use tailsum::archimedean::{Family, Generator};
use tailsum::bounds::bounds_tail;
use tailsum::estimators::{run_replications, Estimator, EstimatorParams, EstimatorReport, Mode, TailProblem};
use tailsum::marginals::{Marginal, ParetoMarginal};

fn problem(mode: Mode, family: Family, tau: f64, alphas: &[f64], s: f64) -> TailProblem {
    let marginals = alphas
        .iter()
        .map(|&a| Arc::new(ParetoMarginal::new(a).unwrap()) as Arc<dyn Marginal>)
        .collect();
    TailProblem::new(mode, Generator::from_tau(family, tau).unwrap(), marginals, s).unwrap()
}

fn run(p: &TailProblem, est: Estimator, reps: usize, seed: u64) -> EstimatorReport {
    let n = p.n() as f64;
    let params = match est {
        Estimator::Nr3 => EstimatorParams::for_estimator(est, 0.5 / n),
        Estimator::Nr4 => EstimatorParams::for_estimator(est, 0.5 * (1.0 / n + 1.0)),
        _ => EstimatorParams::default(),
    };
    run_replications(p, est, params, reps, seed).unwrap()
}

#[test]
fn conditional_estimators_agree_with_crude_monte_carlo() {
    let cases = [
        (Mode::CopulaX, Family::Clayton, 0.5, vec![1.5, 2.5], 10.0),
        (Mode::SurvivalY, Family::Clayton, 0.3, vec![2.0, 2.0], 10.0),
        (Mode::CopulaX, Family::Gumbel, 0.5, vec![2.0, 2.0], 10.0),
        (Mode::SurvivalY, Family::Gumbel, 0.6, vec![1.5, 2.5], 10.0),
        (Mode::CopulaX, Family::Gumbel, 0.3, vec![2.0, 2.0, 2.0], 20.0),
        (Mode::SurvivalY, Family::Clayton, 0.5, vec![2.5, 2.0, 1.5], 10.0),
    ];
    for (k, (mode, family, tau, alphas, s)) in cases.into_iter().enumerate() {
        let p = problem(mode, family, tau, &alphas, s);
        let seed = 500 + k as u64;
        let mc = run(&p, Estimator::PlainMc, 400_000, seed);
        assert!(mc.mean >= 1e-3, "case {k}: crude estimate {} too small to compare", mc.mean);
        let b = bounds_tail(&p, if alphas.len() == 2 { 10 } else { 5 }).unwrap();
        for est in Estimator::CONDITIONAL {
            let r = run(&p, est, 20_000, seed + 1);
            let se = (r.std_error.powi(2) + mc.std_error.powi(2)).sqrt();
            assert!(
                (r.mean - mc.mean).abs() <= 4.0 * se,
                "case {k} {est}: {} vs crude {} (se {se:e})",
                r.mean,
                mc.mean
            );
            assert!(
                r.mean >= b.lower - 4.0 * r.std_error && r.mean <= b.upper + 4.0 * r.std_error,
                "case {k} {est}: {} outside [{}, {}]",
                r.mean,
                b.lower,
                b.upper
            );
        }
    }
}

#[test]
fn relative_error_stays_flat_in_the_threshold() {
    let reps = 40_000;
    for est in [Estimator::Nr1, Estimator::Nr4] {
        let cvs: Vec<f64> = [20.0, 200.0, 2000.0]
            .iter()
            .map(|&s| {
                let p = problem(Mode::SurvivalY, Family::Clayton, 0.5, &[2.5; 5], s);
                run(&p, est, reps, 77).cv
            })
            .collect();
        for w in cvs.windows(2) {
            let change = (w[1] - w[0]).abs() / w[0].min(w[1]);
            assert!(change < 0.25, "{est}: cv {cvs:?} changes by {change:.3}");
        }
    }
}

#[test]
fn crude_monte_carlo_error_grows_as_the_event_gets_rarer() {
    let cvs: Vec<f64> = [10.0, 100.0]
        .iter()
        .map(|&s| run(&problem(Mode::SurvivalY, Family::Clayton, 0.5, &[2.5; 2], s), Estimator::PlainMc, 100_000, 3).cv)
        .collect();
    assert!(cvs[1] > 3.0 * cvs[0], "{cvs:?}");
}
