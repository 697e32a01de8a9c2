//! Perfect state transfer: a Krawtchouk chain, a uniform chain that fails,
//! and a chain designed from a hand-picked spectrum.

use std::f64::consts::PI;

use xxchain::pst::{pst_verdict, synthesize_from_spectrum, transfer_fidelity, PstTolerances};
use xxchain::{build_chain, diagonalize, ChainSpec};

fn main() -> xxchain::Result<()> {
    let tol = PstTolerances::default();

    let kraw = build_chain(&ChainSpec::Krawtchouk { n: 20, p: 0.5 })?;
    let v = pst_verdict(&kraw, PI, &tol)?;
    println!(
        "krawtchouk N=20: fidelity {:.12} at t=pi, verdict {}",
        v.fidelity_at_tau, v.verdict
    );

    let uniform = build_chain(&ChainSpec::Homogeneous {
        n: 9,
        coupling: 1.0,
        field: 0.0,
    })?;
    let sd = diagonalize(&uniform)?;
    let best = (0..20_000)
        .map(|i| (i as f64 * 0.01, transfer_fidelity(&sd, i as f64 * 0.01)))
        .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    println!(
        "uniform N=9: best fidelity {:.4} at t={:.2}",
        best.1, best.0
    );

    // odd integer gaps alternate parity, so everything arrives at t = pi
    let omegas = [-7.0, -4.0, -1.0, 0.0, 1.0, 4.0, 7.0];
    let designed = synthesize_from_spectrum(&omegas)?;
    println!("designed J {:.6?}", designed.couplings());
    println!("designed B {:.6?}", designed.fields());
    let v = pst_verdict(&designed, PI, &tol)?;
    println!(
        "designed: fidelity {:.12}, verdict {}",
        v.fidelity_at_tau, v.verdict
    );
    Ok(())
}
