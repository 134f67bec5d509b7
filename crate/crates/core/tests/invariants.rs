//! Randomised invariants across the public API.

use std::sync::Arc;

use proptest::prelude::*;
use tailsum::archimedean::{Family, Generator, KendallConditional, RadialDistribution};
use tailsum::bounds::bounds_tail;
use tailsum::estimators::{Mode, TailProblem};
use tailsum::marginals::{Marginal, ParetoMarginal};
use tailsum::samplers::{sample_simplex, McNeilSampler, RngStream};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Clayton), Just(Family::Gumbel)]
}

fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::CopulaX), Just(Mode::SurvivalY)]
}

fn pareto(alphas: &[f64]) -> Vec<Arc<dyn Marginal>> {
    alphas
        .iter()
        .map(|&a| Arc::new(ParetoMarginal::new(a).unwrap()) as Arc<dyn Marginal>)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_round_trip(f in family(), tau in 0.05f64..0.95, e in -12.0f64..-1e-9) {
        let g = Generator::from_tau(f, tau).unwrap();
        let u = 10f64.powf(e);
        prop_assert!((g.phi(g.phi_inverse(u).unwrap()).unwrap() - u).abs() <= 1e-10);
        let t = g.inverse(u);
        prop_assert!((g.value(t) + g.complement(t) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_signs_alternate(f in family(), tau in 0.05f64..0.95, e in -3.0f64..3.0) {
        let g = Generator::from_tau(f, tau).unwrap();
        let t = 10f64.powf(e);
        for k in 1..=g.max_order().min(6) {
            let d = g.phi_deriv(k, t).unwrap();
            prop_assert!(if k % 2 == 0 { d >= 0.0 } else { d <= 0.0 }, "k={} d={}", k, d);
        }
    }

    #[test]
    fn radial_cdf_is_a_cdf(f in family(), tau in 0.05f64..0.95, n in 2usize..=5, mut xs in prop::collection::vec(1e-4f64..1e6, 2..20)) {
        let r = RadialDistribution::new(Generator::from_tau(f, tau).unwrap(), n).unwrap();
        xs.sort_by(f64::total_cmp);
        let cdfs: Vec<f64> = xs.iter().map(|&x| r.cdf(x)).collect();
        prop_assert!(cdfs.iter().all(|c| (0.0..=1.0).contains(c)));
        prop_assert!(cdfs.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn kendall_conditional_is_monotone(f in family(), tau in 0.05f64..0.95, n in 2usize..=5, u1 in 0.01f64..0.99) {
        let k = KendallConditional::new(Generator::from_tau(f, tau).unwrap(), n).unwrap();
        let zs: Vec<f64> = (1..50).map(|i| u1 * i as f64 / 50.0).collect();
        let v: Vec<f64> = zs.iter().map(|&z| k.cdf(z, u1)).collect();
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{:?}", v);
    }

    #[test]
    fn conditional_component_cdf_is_monotone(
        f in family(), m in mode(), tau in 0.05f64..0.9, n in 2usize..=4, seed in any::<u64>(),
    ) {
        let p = TailProblem::new(m, Generator::from_tau(f, tau).unwrap(), pareto(&vec![2.5; n]), 10.0).unwrap();
        let mut rng = RngStream::new(seed, 0);
        let others: Vec<f64> = (0..n - 1).map(|_| 1.0 / rng.uniform() - 1.0).collect();
        let xs = [0.0, 0.01, 0.1, 1.0, 10.0, 100.0, 1e4, 1e8];
        let v: Vec<f64> = xs.iter().map(|&x| p.conditional_component_cdf(0, &others, x).unwrap()).collect();
        prop_assert!(v.iter().all(|c| (0.0..=1.0).contains(c)));
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{:?}", v);
    }

    #[test]
    fn draws_respect_envelopes(
        f in family(), m in mode(), tau in 0.1f64..0.9, n in 2usize..=4, e in 0.0f64..4.0, seed in any::<u64>(),
    ) {
        let s = 10f64.powf(e);
        let p = TailProblem::new(m, Generator::from_tau(f, tau).unwrap(), pareto(&vec![2.0; n]), s).unwrap();
        let base = p.max_tail_prob();
        let kappa = 0.5 * (1.0 / n as f64 + 1.0);
        let envelope4 = 1.0 + base + p.marginals().iter().map(|mg| mg.survival(kappa * s)).sum::<f64>();
        let mut rng = RngStream::new(seed, 1);
        for _ in 0..20 {
            let w = sample_simplex(n, &mut rng);
            let (lo, hi) = p.radius_interval(&w).unwrap();
            prop_assert!(lo <= hi * (1.0 + 1e-9));
            for d in [
                p.draw_nr1(&mut rng).unwrap(),
                p.draw_nr2(&mut rng).unwrap(),
                p.draw_nr3(0.5 / n as f64, &mut rng).unwrap(),
            ] {
                prop_assert!(d.value.is_finite() && d.value >= base * (1.0 - 1e-12));
            }
            let d4 = p.draw_nr4(kappa, &mut rng).unwrap();
            prop_assert!(d4.value >= base * (1.0 - 1e-12) && d4.value <= envelope4 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn bounds_are_ordered_probabilities(
        f in family(), m in mode(), tau in 0.1f64..0.9, e in -1.0f64..5.0, a1 in 0.5f64..3.0, a2 in 0.5f64..3.0, three in any::<bool>(),
    ) {
        let alphas = if three { vec![a1, a2, 2.0] } else { vec![a1, a2] };
        let p = TailProblem::new(m, Generator::from_tau(f, tau).unwrap(), pareto(&alphas), 10f64.powf(e)).unwrap();
        let b = bounds_tail(&p, if three { 3 } else { 8 }).unwrap();
        prop_assert!(0.0 <= b.lower && b.lower <= b.upper && b.upper <= 1.0, "{:?}", b);
        prop_assert!(b.upper >= p.max_tail_prob() * (1.0 - 1e-9));
    }

    #[test]
    fn sampling_is_deterministic(f in family(), tau in 0.1f64..0.9, seed in any::<u64>(), stream in any::<u64>()) {
        let s = McNeilSampler::new(Generator::from_tau(f, tau).unwrap(), 3).unwrap();
        let a: Vec<Vec<f64>> = {
            let mut r = RngStream::new(seed, stream);
            (0..5).map(|_| s.sample(&mut r).unwrap()).collect()
        };
        let mut r = RngStream::new(seed, stream);
        let b: Vec<Vec<f64>> = (0..5).map(|_| s.sample(&mut r).unwrap()).collect();
        prop_assert_eq!(a, b);
    }
}
