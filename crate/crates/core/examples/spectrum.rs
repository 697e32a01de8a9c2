//! Diagonalizes a Krawtchouk chain and compares a few modes with the closed forms.

use xxchain::reference::closed_form_reference;
use xxchain::{build_chain, diagonalize, ChainSpec};

fn main() -> xxchain::Result<()> {
    let spec = ChainSpec::Krawtchouk { n: 12, p: 0.3 };
    let chain = build_chain(&spec)?;
    let sd = diagonalize(&chain)?;

    println!("couplings {:?}", chain.couplings());
    println!(
        "{:>4} {:>12} {:>12} {:>12}",
        "k", "omega", "phi_0", "closed form"
    );
    for k in 0..sd.len() {
        let (omega, phi) = closed_form_reference(&spec, 0, k)?;
        assert!((omega - sd.omegas[k]).abs() < 1e-10);
        println!(
            "{k:>4} {:>12.6} {:>12.6} {:>12.6}",
            sd.omegas[k],
            sd.amplitude(0, k),
            phi
        );
    }
    Ok(())
}
