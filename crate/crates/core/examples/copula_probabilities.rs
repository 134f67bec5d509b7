//! Joint CDF, union and joint survival probabilities of an Archimedean
//! copula.

use tailsum::archimedean::{copula_cdf, copula_union_prob, survival_copula_prob, Generator};

fn main() -> tailsum::Result<()> {
    let g = Generator::clayton(0.5)?;
    let u = [0.3, 0.6, 0.9];
    println!("C(u)           = {:.10}", copula_cdf(&g, &u)?);
    println!("Pr(any U > u)  = {:.10}", copula_union_prob(&g, &u)?);
    println!("Pr(all U > u)  = {:.10}", survival_copula_prob(&g, &u)?);

    let indep_like = Generator::gumbel(0.999)?;
    println!("near-independent Gumbel C(u) = {:.6} vs product {:.6}", copula_cdf(&indep_like, &u)?, 0.3 * 0.6 * 0.9);
    Ok(())
}
