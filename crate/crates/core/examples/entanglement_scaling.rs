//! Half-chain entanglement entropy at half filling against ln(ell + 1).

use xxchain::entanglement::{interval_entropy, EntropyRoute};
use xxchain::fit::fit_line;
use xxchain::{build_chain, diagonalize, ChainSpec};

fn main() -> xxchain::Result<()> {
    for p in [0.5, 0.9] {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for n in (32..=256).step_by(32) {
            let chain = build_chain(&ChainSpec::Krawtchouk { n, p })?;
            let sd = diagonalize(&chain)?;
            let s = interval_entropy(&chain, &sd, n / 2, n / 2, EntropyRoute::Heun)?;
            println!("p={p} N={n:<4} S={:.6} via {}", s.entropy, s.route);
            x.push(((n / 2 + 1) as f64).ln());
            y.push(s.entropy);
        }
        let fit = fit_line(&x, &y, 2)?;
        println!(
            "p={p}: S = {:.4} ln(ell+1) + {:.4}, r^2 {:.5}\n",
            fit.slope, fit.intercept, fit.r_squared
        );
    }
    Ok(())
}
