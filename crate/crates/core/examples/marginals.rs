//! Pareto marginals and the `pareto:a1,a2,...` spec strings used by the CLI.

use tailsum::marginals::parse_marginals;

fn main() -> tailsum::Result<()> {
    let ms = parse_marginals("pareto:0.9,1.8,2.6")?;
    for m in &ms {
        let x = 1e6;
        let tail = m.survival(x);
        println!(
            "{}: survival({x:e}) = {tail:.6e}, survival quantile back {:.6e}, median {:.4}",
            m.describe(),
            m.survival_quantile(tail)?,
            m.quantile(0.5)?
        );
    }
    Ok(())
}
