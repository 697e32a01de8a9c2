//! Heat current through a chain between two thermal baths, and how the
//! conductivity grows with length.

use xxchain::transport::*;
use xxchain::{build_chain, ChainSpec};

fn main() -> xxchain::Result<()> {
    let chain = build_chain(&ChainSpec::Krawtchouk { n: 16, p: 0.5 })?;
    let (chain, sd) = shift_to_positive(&chain, AUTO_SHIFT_MIN_ENERGY)?;

    println!("{:>6} {:>6} {:>14} {:>14}", "T0", "TN", "general", "mirror");
    for (t0, tn) in [(2.0, 1.0), (5.0, 1.0), (1.0, 5.0), (3.0, 3.0)] {
        let bath = BathConfig::new(t0, tn, 0.1, 1.0)?;
        let g = heat_current_general(&sd, &bath)?;
        let m = heat_current_mirror(&chain, &sd, &bath)?;
        println!("{t0:>6} {tn:>6} {g:>14.6e} {m:>14.6e}");
    }

    let family = |n: usize| {
        let c = build_chain(&ChainSpec::Krawtchouk { n, p: 0.5 })?;
        Ok(shift_to_positive(&c, AUTO_SHIFT_MIN_ENERGY)?.0)
    };
    let ns: Vec<usize> = (20..=200).step_by(20).collect();
    let fit = transport_exponent(family, 100.0, 0.5, 0.1, 1.0, &ns)?;
    for (n, kappa, _) in &fit.points {
        println!("N={n:<4} kappa={kappa:.6e}");
    }
    println!("kappa ~ N^{:.3} (r^2 {:.4})", fit.exponent, fit.r_squared);
    Ok(())
}
