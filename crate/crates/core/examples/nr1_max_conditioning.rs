//! NR1: condition one component into the tail band and weight by which
//! component is the largest. Compared with plain Monte Carlo at a moderate
//! threshold where both work.

use std::sync::Arc;

use tailsum::archimedean::Generator;
use tailsum::estimators::{run_replications, Estimator, EstimatorParams, Mode, TailProblem};
use tailsum::marginals::{Marginal, ParetoMarginal};

fn main() -> tailsum::Result<()> {
    let m: Vec<Arc<dyn Marginal>> = vec![Arc::new(ParetoMarginal::new(2.5)?); 2];
    for s in [1.0, 100.0] {
        let p = TailProblem::new(Mode::SurvivalY, Generator::clayton(0.5)?, m.clone(), s)?;
        for est in [Estimator::PlainMc, Estimator::Nr1] {
            let r = run_replications(&p, est, EstimatorParams::default(), 100_000, 7)?;
            println!("s={s:<5} {est:<3}: {:.6e} +- {:.2e} (cv {:.3})", r.mean, r.std_error, r.cv);
        }
    }
    Ok(())
}
