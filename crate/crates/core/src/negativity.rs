//! Fermionic logarithmic negativity between two disjoint groups of sites in
//! the ground state, computed from the covariance matrix `J = 2C − I`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::chain::{spectral_rows, Chain, SpectralData, SpectralRows};
use crate::entanglement::{correlation_matrix, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};

/// Largest condition number of `I + J₊J₋` that is still accepted.
pub const MAX_RESOLVENT_CONDITION: f64 = 1e12;

/// Two disjoint site groups and the correlation matrix over `A₁` followed by `A₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativitySetup {
    pub a1: Vec<usize>,
    pub a2: Vec<usize>,
    pub correlation: CorrelationMatrix,
}

fn check_regions(a1: &[usize], a2: &[usize]) -> Result<()> {
    if a1.is_empty() || a2.is_empty() {
        return Err(Error::InvalidParameter(
            "both regions need at least one site".into(),
        ));
    }
    for a in [a1, a2] {
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "regions must be sorted without repeats".into(),
            ));
        }
    }
    if let Some(s) = a1.iter().find(|s| a2.binary_search(s).is_ok()) {
        return Err(Error::InvalidParameter(format!(
            "site {s} is in both regions"
        )));
    }
    Ok(())
}

impl NegativitySetup {
    pub fn new(a1: Vec<usize>, a2: Vec<usize>, correlation: CorrelationMatrix) -> Result<Self> {
        check_regions(&a1, &a2)?;
        if correlation.len() != a1.len() + a2.len() {
            return Err(Error::LengthMismatch {
                what: "correlation matrix",
                expected: a1.len() + a2.len(),
                found: correlation.len(),
            });
        }
        Ok(Self {
            a1,
            a2,
            correlation,
        })
    }

    pub fn from_spectrum(
        sd: &SpectralData,
        filling: usize,
        a1: &[usize],
        a2: &[usize],
    ) -> Result<Self> {
        check_regions(a1, a2)?;
        let region = [a1, a2].concat();
        let correlation = correlation_matrix(sd, filling, &region)?;
        Self::new(a1.to_vec(), a2.to_vec(), correlation)
    }

    /// Same, from precomputed wavefunction rows covering both regions.
    pub fn from_rows(
        rows: &SpectralRows,
        filling: usize,
        a1: &[usize],
        a2: &[usize],
    ) -> Result<Self> {
        check_regions(a1, a2)?;
        let region = [a1, a2].concat();
        let l = region.len();
        let mut entries = DMatrix::zeros(l, l);
        for i in 0..l {
            for j in 0..=i {
                let c = rows.correlation(region[i], region[j], filling)?;
                entries[(i, j)] = c;
                entries[(j, i)] = c;
            }
        }
        let correlation = CorrelationMatrix {
            region,
            filling,
            entries,
        };
        Self::new(a1.to_vec(), a2.to_vec(), correlation)
    }

    /// Distance between the nearest sites of the two regions.
    pub fn separation(&self) -> usize {
        self.a1
            .iter()
            .flat_map(|&m| self.a2.iter().map(move |&n| m.abs_diff(n)))
            .min()
            .unwrap_or(0)
    }

    /// The same setup with the roles of `A₁` and `A₂` exchanged.
    pub fn swapped(&self) -> Self {
        let (l1, l2) = (self.a1.len(), self.a2.len());
        let perm: Vec<usize> = (l1..l1 + l2).chain(0..l1).collect();
        let c = &self.correlation.entries;
        let entries = DMatrix::from_fn(l1 + l2, l1 + l2, |i, j| c[(perm[i], perm[j])]);
        Self {
            a1: self.a2.clone(),
            a2: self.a1.clone(),
            correlation: CorrelationMatrix {
                region: perm.iter().map(|&i| self.correlation.region[i]).collect(),
                filling: self.correlation.filling,
                entries,
            },
        }
    }
}

/// `J = 2C − I` split along the two regions.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceBlocks {
    pub j11: DMatrix<f64>,
    pub j12: DMatrix<f64>,
    pub j21: DMatrix<f64>,
    pub j22: DMatrix<f64>,
}

impl CovarianceBlocks {
    pub fn new(setup: &NegativitySetup) -> Self {
        let l = setup.correlation.len();
        let l1 = setup.a1.len();
        let l2 = l - l1;
        let j = setup.correlation.entries.scale(2.0) - DMatrix::identity(l, l);
        Self {
            j11: j.view((0, 0), (l1, l1)).into_owned(),
            j12: j.view((0, l1), (l1, l2)).into_owned(),
            j21: j.view((l1, 0), (l2, l1)).into_owned(),
            j22: j.view((l1, l1), (l2, l2)).into_owned(),
        }
    }

    pub fn full(&self) -> DMatrix<f64> {
        let (l1, l2) = (self.j11.nrows(), self.j22.nrows());
        let mut j = DMatrix::zeros(l1 + l2, l1 + l2);
        j.view_mut((0, 0), (l1, l1)).copy_from(&self.j11);
        j.view_mut((0, l1), (l1, l2)).copy_from(&self.j12);
        j.view_mut((l1, 0), (l2, l1)).copy_from(&self.j21);
        j.view_mut((l1, l1), (l2, l2)).copy_from(&self.j22);
        j
    }

    /// `J₊` for `sign = 1`, `J₋` for `sign = −1`.
    pub fn twisted(&self, sign: f64) -> DMatrix<Complex64> {
        let (l1, l2) = (self.j11.nrows(), self.j22.nrows());
        let i = Complex64::new(0.0, sign);
        DMatrix::from_fn(l1 + l2, l1 + l2, |r, c| match (r < l1, c < l1) {
            (true, true) => Complex64::from(-self.j11[(r, c)]),
            (true, false) => i * self.j12[(r, c - l1)],
            (false, true) => i * self.j21[(r - l1, c)],
            (false, false) => Complex64::from(self.j22[(r - l1, c - l1)]),
        })
    }
}

/// `√((1 + ν)/2)` and `√((1 − ν)/2)` for every eigenvalue `ν` of
/// `J_x = (I + J₊J₋)⁻¹ (J₊ + J₋)`, paired and sorted by increasing `ν`.
///
/// With `P = diag(−I, I)` one has `J₊ = DJD`, `J₋ = D̄JD̄` for
/// `D = diag(iI, I)`, so `I ± J_x` is similar to `(I + J²)⁻¹ (P ± J)²`.
/// Both square roots are therefore singular values of
/// `(P ± J)(I + J²)^(−1/2) / √2`, which keeps them accurate when `ν ≈ ±1`.
pub fn transposed_spectrum(blocks: &CovarianceBlocks) -> Result<Vec<(f64, f64)>> {
    let j = blocks.full();
    let l = j.nrows();
    let l1 = blocks.j11.nrows();
    let g = SymmetricEigen::new(DMatrix::identity(l, l) + &j * &j);
    let (gmax, gmin) = g
        .eigenvalues
        .iter()
        .fold((0.0f64, f64::INFINITY), |(a, b), &x| (a.max(x), b.min(x)));
    let condition = gmax / gmin;
    if !(condition <= MAX_RESOLVENT_CONDITION) {
        return Err(Error::SingularResolvent { condition });
    }
    let inv_sqrt = &g.eigenvectors
        * DMatrix::from_diagonal(&g.eigenvalues.map(|x| 1.0 / (2.0 * x).sqrt()))
        * g.eigenvectors.transpose();
    let p = DMatrix::from_fn(l, l, |r, c| match (r == c, r < l1) {
        (false, _) => 0.0,
        (true, true) => -1.0,
        (true, false) => 1.0,
    });
    let sorted = |m: DMatrix<f64>| {
        let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
        s.sort_by(f64::total_cmp);
        s
    };
    let plus = sorted((&p + &j) * &inv_sqrt);
    let minus = sorted((&p - &j) * &inv_sqrt);
    Ok(plus.into_iter().zip(minus.into_iter().rev()).collect())
}

/// Fermionic logarithmic negativity `E_f` between `A₁` and `A₂`.
///
/// With `J₊`, `J₋` the covariance matrix with `±i` on the off-diagonal
/// blocks and `−J₁₁` in the top-left corner,
/// `J_x = (I + J₊J₋)⁻¹ (J₊ + J₋)` and
///
/// `E_f = Σ ln[√((1+ν)/2) + √((1−ν)/2)] + ½ Σ ln[((1+μ)/2)² + ((1−μ)/2)²]`
///
/// over the eigenvalues `ν` of `J_x` and `μ` of `J`. The `ν` are real and
/// lie in `[−1, 1]`; see [`transposed_spectrum`].
pub fn logarithmic_negativity(setup: &NegativitySetup) -> Result<f64> {
    let blocks = CovarianceBlocks::new(setup);
    let first: f64 = transposed_spectrum(&blocks)?
        .iter()
        .map(|(a, b)| (a + b).ln())
        .sum();
    let mus = SymmetricEigen::new(blocks.full()).eigenvalues;
    let second: f64 = 0.5
        * mus
            .iter()
            .map(|&mu| (((1.0 + mu) / 2.0).powi(2) + ((1.0 - mu) / 2.0).powi(2)).ln())
            .sum::<f64>();
    Ok(first + second)
}

/// Leading-order negativity between two single sites,
/// `2 |C_mn|² / (1 + 2(ρ − 1)ρ)`.
pub fn skeletal_negativity(c_mn: f64, rho: f64) -> f64 {
    2.0 * c_mn * c_mn / (1.0 + 2.0 * (rho - 1.0) * rho)
}

/// Filling fraction `(K + 1)/(N + 1)`.
pub fn filling_fraction(filling: usize, sites: usize) -> f64 {
    (filling + 1) as f64 / sites as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticKind {
    /// Two sites placed symmetrically around `pN`.
    Bulk,
    /// Sites `0` and `d`.
    Boundary0,
    /// Sites `1` and `d + 1`.
    Boundary1,
}

/// Large-`N` form of the Krawtchouk correlation `C_mn` at separation `d`.
///
/// The boundary forms hold for `ρ = p`; `p` and `ρ` are ignored there.
pub fn correlation_asymptotic(kind: AsymptoticKind, d: usize, p: f64, rho: f64) -> f64 {
    let d = d as f64;
    match kind {
        AsymptoticKind::Bulk => {
            (d * (1.0 / (p * (1.0 - p))).sqrt() * rho.sqrt().asin()).sin() / (PI * d)
        }
        AsymptoticKind::Boundary0 | AsymptoticKind::Boundary1 => {
            let power = if kind == AsymptoticKind::Boundary0 {
                0.75
            } else {
                1.25
            };
            (-PI * d / 2.0).sin() / ((2.0 * PI.powi(3)).powf(0.25) * d.powf(power))
        }
    }
}

/// Least-squares line through `(x, E_f)`; at least four points.
pub fn negativity_scan_fit(x: &[f64], ef: &[f64]) -> Result<LineFit> {
    fit_line(x, ef, 4)
}

/// Where the left site of a skeletal pair sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairPlacement {
    /// Centered on `site`: `m = site − ⌊d/2⌋`, `n = m + d`.
    Bulk { site: usize },
    /// `m` fixed, `n = m + d`.
    Leftmost(usize),
}

impl PairPlacement {
    pub fn pair(&self, d: usize) -> Result<(usize, usize)> {
        let m = match *self {
            PairPlacement::Bulk { site } => {
                site.checked_sub(d / 2).ok_or(Error::IndexOutOfRange {
                    index: d,
                    max: 2 * site,
                })?
            }
            PairPlacement::Leftmost(m) => m,
        };
        Ok((m, m + d))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletalPoint {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub c_mn: f64,
    pub ef: f64,
    pub ef_skeletal: f64,
}

/// Exact and skeletal negativity between the single sites of each pair.
///
/// Only the needed wavefunction rows are computed, so long chains are cheap.
pub fn skeletal_sweep(
    chain: &Chain,
    filling: usize,
    placement: PairPlacement,
    separations: &[usize],
) -> Result<Vec<SkeletalPoint>> {
    let pairs = separations
        .iter()
        .map(|&d| placement.pair(d))
        .collect::<Result<Vec<_>>>()?;
    let mut sites: Vec<usize> = pairs.iter().flat_map(|&(m, n)| [m, n]).collect();
    sites.sort_unstable();
    sites.dedup();
    let rows = spectral_rows(chain, &sites)?;
    let rho = filling_fraction(filling, chain.sites());
    separations
        .iter()
        .zip(&pairs)
        .map(|(&d, &(m, n))| {
            let setup = NegativitySetup::from_rows(&rows, filling, &[m], &[n])?;
            let c_mn = setup.correlation.entries[(0, 1)];
            Ok(SkeletalPoint {
                d,
                m,
                n,
                c_mn,
                ef: logarithmic_negativity(&setup)?,
                ef_skeletal: skeletal_negativity(c_mn, rho),
            })
        })
        .collect()
}

/// Two adjacent intervals `[c − ℓ₁, c)` and `[c, c + ℓ₂)`.
pub fn adjacent_intervals(
    center: usize,
    ell1: usize,
    ell2: usize,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let start = center.checked_sub(ell1).ok_or(Error::IndexOutOfRange {
        index: ell1,
        max: center,
    })?;
    Ok(((start..center).collect(), (center..center + ell2).collect()))
}
