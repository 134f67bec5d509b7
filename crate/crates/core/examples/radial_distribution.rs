//! The radial part of an Archimedean copula: survival function, CDF and
//! quantiles, including far tails.

use tailsum::archimedean::{Family, Generator, RadialDistribution};

fn main() -> tailsum::Result<()> {
    for (g, n) in [(Generator::clayton(0.5)?, 2), (Generator::from_tau(Family::Gumbel, 0.5)?, 5)] {
        let r = RadialDistribution::new(g.clone(), n)?;
        println!("{} param {} in {n} dimensions", g.family(), g.param());
        for x in [0.1, 1.0, 10.0, 1e3] {
            println!("  F_R({x}) = {:.8}  survival {:.8e}", r.cdf(x), r.sf(x));
        }
        for p in [0.5, 0.99, 1.0 - 1e-8] {
            let q = r.quantile(p)?;
            println!("  quantile({p}) = {q:.6e}, cdf back {:.12}", r.cdf(q));
        }
        println!("  Pr(1 < R <= 10) = {:.8}", r.prob_between(1.0, 10.0));
    }
    Ok(())
}
