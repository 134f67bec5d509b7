//! The two exact copula samplers side by side, plus a band-conditioned draw.

use tailsum::archimedean::{Family, Generator};
use tailsum::samplers::{sample_conditional_band, BrechmannSampler, McNeilSampler, RngStream};

fn main() -> tailsum::Result<()> {
    let g = Generator::from_tau(Family::Gumbel, 0.5)?;
    let n = 3;
    let radial = McNeilSampler::new(g.clone(), n)?;
    let conditional = BrechmannSampler::new(g.clone(), n)?;
    let mut rng = RngStream::new(2024, 0);

    let draws = 50_000;
    let (mut a, mut b) = (0.0, 0.0);
    for _ in 0..draws {
        a += radial.sample(&mut rng)?.iter().all(|&u| u <= 0.5) as u8 as f64;
        b += conditional.sample(&mut rng)?.iter().all(|&u| u <= 0.5) as u8 as f64;
    }
    println!("Pr(all U <= 1/2): radial engine {:.4}, conditional engine {:.4}, exact {:.4}",
        a / draws as f64,
        b / draws as f64,
        g.value(n as f64 * g.inverse(0.5)));

    // U | U_1 in [0.95, 1]: the other coordinates are pulled up too.
    let u = sample_conditional_band(&g, n, 0, 0.95, 1.0, &mut rng)?;
    println!("band-conditioned draw: {u:?}");
    Ok(())
}
