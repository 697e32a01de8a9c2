//! Ground-state correlations of the free-fermion chain and the entanglement
//! quantities derived from them.
//!
//! The ground state fills modes `0..=K`. Everything here is a function of
//! the truncated correlation matrix `C_mn = Σ_{k≤K} φ_m(ω_k) φ_n(ω_k)`.

mod affine;
mod heun;

pub use affine::{fit_affine_approximation, fit_affine_to_spectrum, AffineFit};
pub use heun::{
    commutator_residual, heun_operator, stable_correlation_spectrum, HeunOperator, StableSpectrum,
    COMMUTATION_TOLERANCE,
};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::chain::{Chain, SpectralData};
use crate::error::{Error, Result};

/// Eigenvalues closer than this to 0 or 1 are clamped before the entropy logs.
pub const ENTROPY_CLAMP: f64 = 1e-15;
/// Clamp used by the entanglement Hamiltonian.
pub const HAMILTONIAN_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub region: Vec<usize>,
    /// Highest occupied mode.
    pub filling: usize,
    pub entries: DMatrix<f64>,
}

impl CorrelationMatrix {
    pub fn len(&self) -> usize {
        self.region.len()
    }

    pub fn is_empty(&self) -> bool {
        self.region.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Eigenvalues `γ_n`, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut g: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        g.sort_by(f64::total_cmp);
        g
    }
}

/// Sites `0..=ell`.
pub fn interval(ell: usize) -> Vec<usize> {
    (0..=ell).collect()
}

pub fn correlation_matrix(
    sd: &SpectralData,
    filling: usize,
    region: &[usize],
) -> Result<CorrelationMatrix> {
    let max = sd.len() - 1;
    if filling > max {
        return Err(Error::IndexOutOfRange {
            index: filling,
            max,
        });
    }
    if let Some(&bad) = region.iter().find(|&&s| s > max) {
        return Err(Error::IndexOutOfRange { index: bad, max });
    }
    let rows = DMatrix::from_fn(region.len(), filling + 1, |r, k| sd.phi[(region[r], k)]);
    let mut entries = &rows * rows.transpose();
    // exact symmetry, independent of the summation order
    for i in 0..entries.nrows() {
        for j in 0..i {
            let avg = 0.5 * (entries[(i, j)] + entries[(j, i)]);
            entries[(i, j)] = avg;
            entries[(j, i)] = avg;
        }
    }
    Ok(CorrelationMatrix {
        region: region.to_vec(),
        filling,
        entries,
    })
}

/// Filling of the true ground state: the index of the highest negative mode.
/// Modes within round-off of zero count as empty.
pub fn auto_filling(sd: &SpectralData) -> Result<usize> {
    let scale = sd.omegas.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let cut = -1e-12 * scale;
    match sd.omegas.iter().filter(|&&w| w < cut).count() {
        0 => Err(Error::EmptyFermiSea),
        n => Ok(n - 1),
    }
}

/// Binary entropy in nats, with `γ` clamped to `[ENTROPY_CLAMP, 1 − ENTROPY_CLAMP]`.
pub fn binary_entropy(gamma: f64) -> f64 {
    let g = gamma.clamp(ENTROPY_CLAMP, 1.0 - ENTROPY_CLAMP);
    -(g * g.ln() + (1.0 - g) * (1.0 - g).ln())
}

pub fn entropy_from_spectrum(gammas: &[f64]) -> f64 {
    gammas
        .iter()
        .map(|&g| binary_entropy(g))
        .sum::<f64>()
        .max(0.0)
}

/// `S = −Σ γ ln γ + (1 − γ) ln(1 − γ)` over the eigenvalues of `C`.
pub fn entanglement_entropy(c: &CorrelationMatrix) -> f64 {
    entropy_from_spectrum(&c.spectrum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementHamiltonian {
    pub matrix: DMatrix<f64>,
    /// Single-particle entanglement energies `ln((1 − γ)/γ)`, descending with `γ` ascending.
    pub energies: Vec<f64>,
    /// How many `γ` had to be clamped.
    pub clamped: usize,
}

/// `h = ln((1 − C)/C)` through the eigendecomposition of `C`.
pub fn entanglement_hamiltonian(c: &CorrelationMatrix) -> EntanglementHamiltonian {
    let eig = SymmetricEigen::new(c.entries.clone());
    let mut clamped = 0;
    let eps: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&g| {
            let gc = g.clamp(HAMILTONIAN_CLAMP, 1.0 - HAMILTONIAN_CLAMP);
            if gc != g {
                clamped += 1;
            }
            ((1.0 - gc) / gc).ln()
        })
        .collect();
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] * eps[j]);
    let mut matrix = scaled * v.transpose();
    matrix = 0.5 * (&matrix + matrix.transpose());
    let mut energies = eps;
    energies.sort_by(|a, b| b.total_cmp(a));
    EntanglementHamiltonian {
        matrix,
        energies,
        clamped,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyRoute {
    /// Diagonalize `C` directly.
    Direct,
    /// Diagonalize the commuting Heun operator and read `γ` off its eigenvectors.
    Heun,
}

impl std::fmt::Display for EntropyRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EntropyRoute::Direct => "direct",
            EntropyRoute::Heun => "heun",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalEntropy {
    pub entropy: f64,
    /// Route that actually produced the value.
    pub route: EntropyRoute,
    pub commutator_residual: Option<f64>,
}

/// Entropy of the first `ell + 1` sites.
///
/// The Heun route falls back to direct diagonalization when `T` has a
/// (numerically) degenerate spectrum; other failures are returned.
pub fn interval_entropy(
    chain: &Chain,
    sd: &SpectralData,
    filling: usize,
    ell: usize,
    route: EntropyRoute,
) -> Result<IntervalEntropy> {
    let c = correlation_matrix(sd, filling, &interval(ell))?;
    if route == EntropyRoute::Direct || ell + 1 == sd.len() || filling + 1 == sd.len() {
        return Ok(IntervalEntropy {
            entropy: entanglement_entropy(&c),
            route: EntropyRoute::Direct,
            commutator_residual: None,
        });
    }
    let t = heun_operator(chain, sd, filling, ell)?;
    let residual = commutator_residual(&t, &c)?;
    match stable_correlation_spectrum(&c, &t) {
        Ok(s) => Ok(IntervalEntropy {
            entropy: entropy_from_spectrum(&s.gammas),
            route: EntropyRoute::Heun,
            commutator_residual: Some(residual),
        }),
        Err(Error::DegenerateT { .. }) => Ok(IntervalEntropy {
            entropy: entanglement_entropy(&c),
            route: EntropyRoute::Direct,
            commutator_residual: Some(residual),
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_chain, diagonalize, ChainSpec};

    fn kraw(n: usize, p: f64) -> (Chain, SpectralData) {
        let chain = build_chain(&ChainSpec::Krawtchouk { n, p }).unwrap();
        let sd = diagonalize(&chain).unwrap();
        (chain, sd)
    }

    fn single(c00: f64) -> CorrelationMatrix {
        CorrelationMatrix {
            region: vec![0],
            filling: 0,
            entries: DMatrix::from_element(1, 1, c00),
        }
    }

    #[test]
    fn full_chain_is_a_projector() {
        let (_, sd) = kraw(12, 0.3);
        let c = correlation_matrix(&sd, 5, &interval(12)).unwrap();
        assert!((c.trace() - 6.0).abs() < 1e-12);
        let sq = &c.entries * &c.entries;
        assert!((sq - &c.entries).amax() < 1e-10);
        assert!(entanglement_entropy(&c) < 1e-8);
    }

    #[test]
    fn homogeneous_half_filling_is_flat() {
        let chain = build_chain(&ChainSpec::Homogeneous {
            n: 11,
            coupling: 1.0,
            field: 0.0,
        })
        .unwrap();
        let sd = diagonalize(&chain).unwrap();
        let c = correlation_matrix(&sd, 5, &interval(11)).unwrap();
        for n in 0..12 {
            assert!((c.entries[(n, n)] - 0.5).abs() < 1e-10);
        }
        assert_eq!(auto_filling(&sd).unwrap(), 5);
    }

    #[test]
    fn index_checks() {
        let (_, sd) = kraw(4, 0.5);
        assert!(matches!(
            correlation_matrix(&sd, 5, &[0]),
            Err(Error::IndexOutOfRange { index: 5, max: 4 })
        ));
        assert!(correlation_matrix(&sd, 1, &[0, 7]).is_err());
        assert_eq!(auto_filling(&sd), Err(Error::EmptyFermiSea));
    }

    #[test]
    fn single_site_values() {
        assert!((entanglement_entropy(&single(0.5)) - 2f64.ln()).abs() < 1e-15);
        let h = entanglement_hamiltonian(&single(1.0 / (1.0 + 1f64.exp())));
        assert!((h.matrix[(0, 0)] - 1.0).abs() < 1e-12);
        assert_eq!(h.clamped, 0);
        assert_eq!(
            entanglement_entropy(&single(1.0)),
            entanglement_entropy(&single(1.0 + 1e-14))
        );
    }

    #[test]
    fn flat_spectrum_gives_zero_hamiltonian() {
        let c = CorrelationMatrix {
            region: vec![0, 1, 2],
            filling: 0,
            entries: DMatrix::identity(3, 3) * 0.5,
        };
        assert!(entanglement_hamiltonian(&c).matrix.amax() < 1e-15);
    }

    #[test]
    fn hamiltonian_spectrum_matches_correlations() {
        let (_, sd) = kraw(20, 0.5);
        let c = correlation_matrix(&sd, 9, &interval(6)).unwrap();
        let h = entanglement_hamiltonian(&c);
        let mut eps: Vec<f64> = SymmetricEigen::new(h.matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eps.sort_by(|a, b| b.total_cmp(a));
        for (e, g) in eps.iter().zip(c.spectrum()) {
            assert!((e - ((1.0 - g) / g).ln()).abs() < 1e-6 * e.abs().max(1.0));
        }
    }

    #[test]
    fn clamped_count_is_reported() {
        // a pure state has γ ∈ {0, 1} up to round-off
        let (_, sd) = kraw(12, 0.5);
        let c = correlation_matrix(&sd, 5, &interval(12)).unwrap();
        let h = entanglement_hamiltonian(&c);
        assert_eq!(h.clamped, 13);
        assert!(h.matrix.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn complement_symmetry_and_bounds() {
        let (_, sd) = kraw(30, 0.7);
        let a = correlation_matrix(&sd, 14, &interval(11)).unwrap();
        let b = correlation_matrix(&sd, 14, &(12..=30).collect::<Vec<_>>()).unwrap();
        let (sa, sb) = (entanglement_entropy(&a), entanglement_entropy(&b));
        assert!((sa - sb).abs() < 1e-8);
        assert!(sa > 0.0 && sa <= 12.0 * 2f64.ln());
        for g in a.spectrum() {
            assert!((-1e-12..=1.0 + 1e-12).contains(&g));
        }
    }

    #[test]
    fn routes_agree() {
        let (chain, sd) = kraw(40, 0.5);
        let d = interval_entropy(&chain, &sd, 19, 13, EntropyRoute::Direct).unwrap();
        let h = interval_entropy(&chain, &sd, 19, 13, EntropyRoute::Heun).unwrap();
        assert_eq!(h.route, EntropyRoute::Heun);
        assert!(h.commutator_residual.unwrap() < 1e-10);
        assert!((d.entropy - h.entropy).abs() < 1e-8);
    }
}
