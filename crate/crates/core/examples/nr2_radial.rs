//! NR2: draw a simplex direction and integrate the radial law over the
//! radii at which the sum exceeds the threshold.

use std::sync::Arc;

use tailsum::archimedean::{Family, Generator};
use tailsum::estimators::{run_replications, Estimator, EstimatorParams, Mode, TailProblem};
use tailsum::marginals::{Marginal, ParetoMarginal};
use tailsum::samplers::{sample_simplex, RngStream};

fn main() -> tailsum::Result<()> {
    let m: Vec<Arc<dyn Marginal>> = vec![
        Arc::new(ParetoMarginal::new(0.9)?),
        Arc::new(ParetoMarginal::new(1.8)?),
    ];
    let g = Generator::from_tau(Family::Clayton, 3.0 / 8.0)?;
    let p = TailProblem::new(Mode::CopulaX, g, m, 1e4)?;

    // The interval of radii for one direction.
    let mut rng = RngStream::new(1, 0);
    let w = sample_simplex(2, &mut rng);
    let (lo, hi) = p.radius_interval(&w)?;
    println!("direction {:?}: radii in [{lo:.6e}, {hi:.6e}]", w.w);

    let r = run_replications(&p, Estimator::Nr2, EstimatorParams::default(), 100_000, 7)?;
    println!("NR2 at s=1e4: {:.6e} +- {:.2e} (cv {:.3})", r.mean, r.std_error, r.cv);
    Ok(())
}
