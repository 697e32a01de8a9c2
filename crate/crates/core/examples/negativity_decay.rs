//! Negativity between two sites of a long chain as their separation grows,
//! in the bulk and at the boundary.

use xxchain::fit::fit_line;
use xxchain::negativity::{skeletal_sweep, PairPlacement};
use xxchain::{build_chain, ChainSpec};

fn main() -> xxchain::Result<()> {
    let chain = build_chain(&ChainSpec::Krawtchouk { n: 2000, p: 0.5 })?;
    let ds: Vec<usize> = (11..=41).step_by(2).collect();

    for placement in [
        PairPlacement::Bulk { site: 1000 },
        PairPlacement::Leftmost(0),
        PairPlacement::Leftmost(1),
    ] {
        let points = skeletal_sweep(&chain, 999, placement, &ds)?;
        let x: Vec<f64> = points.iter().map(|p| (p.d as f64).ln()).collect();
        let y: Vec<f64> = points.iter().map(|p| p.ef.ln()).collect();
        let fit = fit_line(&x, &y, 4)?;
        let last = points.last().unwrap();
        println!(
            "{placement:?}: Ef ~ d^{:.3}; at d={} Ef={:.3e}, skeletal {:.3e}",
            fit.slope, last.d, last.ef, last.ef_skeletal
        );
    }
    Ok(())
}
