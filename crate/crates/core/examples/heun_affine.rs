//! The tridiagonal operator commuting with the restricted correlation matrix,
//! and the entanglement Hamiltonian as an affine function of it.

use xxchain::entanglement::*;
use xxchain::{build_chain, diagonalize, ChainSpec};

fn main() -> xxchain::Result<()> {
    let chain = build_chain(&ChainSpec::Krawtchouk { n: 60, p: 0.5 })?;
    let sd = diagonalize(&chain)?;
    let (k, ell) = (29, 29);

    let t = heun_operator(&chain, &sd, k, ell)?;
    let c = correlation_matrix(&sd, k, &interval(ell))?;
    println!("commutator residual {:.2e}", commutator_residual(&t, &c)?);

    let stable = stable_correlation_spectrum(&c, &t)?;
    println!(
        "entropy direct {:.12}, from the operator basis {:.12}",
        entanglement_entropy(&c),
        entropy_from_spectrum(&stable.gammas)
    );

    let fit = fit_affine_approximation(&c, &t)?;
    println!(
        "H ~ {:.6} {:+.6} T, pearson {:.8}, rms {:.2e}",
        fit.alpha0, fit.alpha1, fit.pearson, fit.rms
    );
    for (tv, eps) in fit.t_values.iter().zip(&fit.epsilons).step_by(5) {
        println!(
            "  t={tv:>10.4} eps={eps:>10.4} affine={:>10.4}",
            fit.alpha0 + fit.alpha1 * tv
        );
    }
    Ok(())
}
