//! Deterministic lower and upper bounds on a grid, and how they tighten
//! as the grid is refined.

use std::sync::Arc;

use tailsum::archimedean::{Family, Generator};
use tailsum::bounds::bounds_tail;
use tailsum::estimators::{Mode, TailProblem};
use tailsum::marginals::{Marginal, ParetoMarginal};

fn main() -> tailsum::Result<()> {
    let m: Vec<Arc<dyn Marginal>> = vec![
        Arc::new(ParetoMarginal::new(0.9)?),
        Arc::new(ParetoMarginal::new(1.8)?),
    ];
    let g = Generator::from_tau(Family::Clayton, 3.0 / 8.0)?;
    let p = TailProblem::new(Mode::CopulaX, g, m, 100.0)?;
    for mm in [4, 8, 12, 16, 20] {
        let b = bounds_tail(&p, mm)?;
        println!("m={mm:<2} [{:.9e}, {:.9e}] width {:.2e}", b.lower, b.upper, b.width());
    }

    let m3: Vec<Arc<dyn Marginal>> = vec![Arc::new(ParetoMarginal::new(2.5)?); 3];
    let p3 = TailProblem::new(Mode::SurvivalY, Generator::clayton(0.5)?, m3, 100.0)?;
    let b = bounds_tail(&p3, 6)?;
    println!("three components, m=6: [{:.6e}, {:.6e}]", b.lower, b.upper);
    Ok(())
}
