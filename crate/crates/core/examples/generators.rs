//! Clayton and Gumbel generators: values, inverses, derivatives and the
//! Kendall's tau mapping.

use tailsum::archimedean::{param_to_tau, tau_to_param, Family, Generator};

fn main() -> tailsum::Result<()> {
    for (family, tau) in [(Family::Clayton, 3.0 / 8.0), (Family::Clayton, 0.5), (Family::Gumbel, 0.5)] {
        let param = tau_to_param(family, tau)?;
        let g = Generator::new(family, param)?;
        println!("{family} tau={tau}: param {param} (back to tau {})", param_to_tau(family, param));
        for t in [0.1, 1.0, 10.0] {
            let u = g.phi(t)?;
            println!(
                "  t={t:<5} phi={u:.6} inverse={:.6} phi'={:.6e} phi''={:.6e}",
                g.phi_inverse(u)?,
                g.phi_deriv(1, t)?,
                g.phi_deriv(2, t)?
            );
        }
        println!("  highest supported derivative order: {}", g.max_order());
    }

    // Deep tails stay accurate through the complement path.
    let g = Generator::clayton(0.5)?;
    let t = g.inverse_complement(1e-12);
    println!("clayton(0.5): 1 - phi(t) = 1e-12 at t = {t:e}; recovered {:e}", g.complement(t));
    Ok(())
}
