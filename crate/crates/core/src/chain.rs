//! Chains, their one-excitation Jacobi matrix and its spectral decomposition.
//!
//! A chain with `N + 1` sites is described by `N` positive couplings `J`,
//! `N + 1` on-site fields `B` and, optionally, a strictly increasing dual grid
//! (the spectrum of the position operator). The hopping matrix is the
//! tridiagonal matrix with `B` on the diagonal and `J` next to it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiagonal;

/// Declarative description of a chain, as read from JSON.
///
/// ```json
/// {"kind":"krawtchouk","N":32,"p":0.5}
/// {"kind":"homogeneous","N":32,"J":1.0,"B":0.0}
/// {"kind":"custom","J":[1.0],"B":[0.0,0.0]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChainSpec {
    Krawtchouk {
        #[serde(rename = "N")]
        n: usize,
        p: f64,
    },
    Homogeneous {
        #[serde(rename = "N")]
        n: usize,
        #[serde(rename = "J")]
        coupling: f64,
        #[serde(rename = "B")]
        field: f64,
    },
    Custom {
        #[serde(rename = "J")]
        couplings: Vec<f64>,
        #[serde(rename = "B")]
        fields: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dual: Option<Vec<f64>>,
    },
}

/// A validated chain. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    couplings: Vec<f64>,
    fields: Vec<f64>,
    dual: Option<Vec<f64>>,
}

impl Chain {
    /// Validates and wraps raw arrays.
    pub fn new(couplings: Vec<f64>, fields: Vec<f64>, dual: Option<Vec<f64>>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::InvalidParameter(
                "a chain needs at least one site".into(),
            ));
        }
        if couplings.len() + 1 != fields.len() {
            return Err(Error::LengthMismatch {
                what: "couplings",
                expected: fields.len() - 1,
                found: couplings.len(),
            });
        }
        if let Some((index, &value)) = couplings
            .iter()
            .enumerate()
            .find(|(_, &j)| !(j > 0.0 && j.is_finite()))
        {
            return Err(Error::NonPositiveCoupling { index, value });
        }
        if fields.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter("fields must be finite".into()));
        }
        if let Some(dual) = &dual {
            if dual.len() != fields.len() {
                return Err(Error::LengthMismatch {
                    what: "dual grid",
                    expected: fields.len(),
                    found: dual.len(),
                });
            }
            if let Some(i) = dual.windows(2).position(|w| !(w[1] > w[0])) {
                return Err(Error::NonMonotoneDual { index: i + 1 });
            }
        }
        Ok(Self {
            couplings,
            fields,
            dual,
        })
    }

    /// `N`: the index of the last site.
    pub fn n(&self) -> usize {
        self.couplings.len()
    }

    pub fn sites(&self) -> usize {
        self.fields.len()
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn dual(&self) -> Option<&[f64]> {
        self.dual.as_deref()
    }

    /// Same chain with every field moved by `c`. The spectrum moves by `c`,
    /// the wavefunctions are unchanged.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            couplings: self.couplings.clone(),
            fields: self.fields.iter().map(|b| b + c).collect(),
            dual: self.dual.clone(),
        }
    }

    /// The dense hopping matrix.
    pub fn hopping_matrix(&self) -> DMatrix<f64> {
        let n = self.sites();
        let mut m = DMatrix::zeros(n, n);
        for (i, &b) in self.fields.iter().enumerate() {
            m[(i, i)] = b;
        }
        for (i, &j) in self.couplings.iter().enumerate() {
            m[(i, i + 1)] = j;
            m[(i + 1, i)] = j;
        }
        m
    }

    /// Position operator: diagonal matrix of the dual grid.
    pub fn position_matrix(&self) -> Option<DMatrix<f64>> {
        self.dual
            .as_ref()
            .map(|d| DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn to_spec(&self) -> ChainSpec {
        ChainSpec::Custom {
            couplings: self.couplings.clone(),
            fields: self.fields.clone(),
            dual: self.dual.clone(),
        }
    }
}

/// Builds a chain from its declarative description.
///
/// Krawtchouk chains use `J_n = sqrt(p(1-p)) sqrt((n+1)(N-n))` and
/// `B_n = p(N-n) + (1-p)n`; both built-in families carry the dual grid
/// `λ_ℓ = ℓ`.
pub fn build_chain(spec: &ChainSpec) -> Result<Chain> {
    match *spec {
        ChainSpec::Krawtchouk { n, p } => {
            if n < 1 {
                return Err(Error::InvalidParameter(
                    "Krawtchouk chain needs N >= 1".into(),
                ));
            }
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "p = {p} must lie in (0, 1)"
                )));
            }
            let nf = n as f64;
            let amp = (p * (1.0 - p)).sqrt();
            let couplings = (0..n)
                .map(|i| {
                    let i = i as f64;
                    amp * ((i + 1.0) * (nf - i)).sqrt()
                })
                .collect();
            let fields = (0..=n)
                .map(|i| {
                    let i = i as f64;
                    p * (nf - i) + (1.0 - p) * i
                })
                .collect();
            Chain::new(couplings, fields, Some(unit_grid(n)))
        }
        ChainSpec::Homogeneous { n, coupling, field } => {
            if n < 1 {
                return Err(Error::InvalidParameter(
                    "homogeneous chain needs N >= 1".into(),
                ));
            }
            Chain::new(vec![coupling; n], vec![field; n + 1], Some(unit_grid(n)))
        }
        ChainSpec::Custom {
            ref couplings,
            ref fields,
            ref dual,
        } => Chain::new(couplings.clone(), fields.clone(), dual.clone()),
    }
}

fn unit_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|l| l as f64).collect()
}

/// Eigenvalues in ascending order and the wavefunction matrix with entry
/// `(n, k) = φ_n(ω_k)`. Columns are fixed by `φ_0(ω_k) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub omegas: Vec<f64>,
    pub phi: DMatrix<f64>,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// `φ_n(ω_k)`.
    pub fn amplitude(&self, site: usize, mode: usize) -> f64 {
        self.phi[(site, mode)]
    }

    /// Spectral data of the chain with all fields moved by `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            omegas: self.omegas.iter().map(|w| w + c).collect(),
            phi: self.phi.clone(),
        }
    }
}

/// Full spectral decomposition of the hopping matrix.
pub fn diagonalize(chain: &Chain) -> Result<SpectralData> {
    let n = chain.sites();
    let eig = tridiagonal::eigh(chain.fields(), chain.couplings())?;
    let mut phi = DMatrix::from_column_slice(n, n, &eig.vectors);
    for k in 0..n {
        let mut col = phi.column_mut(k);
        if gauge_sign(chain, eig.values[k], col.as_slice()) < 0.0 {
            col.neg_mut();
        }
    }
    Ok(SpectralData {
        omegas: eig.values,
        phi,
    })
}

/// Eigenvalues and selected rows of the wavefunction matrix, for chains too
/// long to hold the full eigenvector matrix. Runs in O(N²) time and
/// O(N · rows) memory.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralRows {
    pub omegas: Vec<f64>,
    pub sites: Vec<usize>,
    /// `values[(r, k)] = φ_{sites[r]}(ω_k)`.
    pub values: DMatrix<f64>,
}

impl SpectralRows {
    fn row_of(&self, site: usize) -> Result<usize> {
        self.sites
            .iter()
            .position(|&s| s == site)
            .ok_or(Error::IndexOutOfRange {
                index: site,
                max: self.omegas.len().saturating_sub(1),
            })
    }

    /// `Σ_{k ≤ filling} φ_m(ω_k) φ_n(ω_k)` for two of the stored sites.
    pub fn correlation(&self, m: usize, n: usize, filling: usize) -> Result<f64> {
        if filling >= self.omegas.len() {
            return Err(Error::IndexOutOfRange {
                index: filling,
                max: self.omegas.len() - 1,
            });
        }
        let (rm, rn) = (self.row_of(m)?, self.row_of(n)?);
        Ok((0..=filling)
            .map(|k| self.values[(rm, k)] * self.values[(rn, k)])
            .sum())
    }
}

/// Eigenvalues plus the wavefunction rows at `sites`, via inverse iteration.
pub fn spectral_rows(chain: &Chain, sites: &[usize]) -> Result<SpectralRows> {
    let n = chain.sites();
    if let Some(&bad) = sites.iter().find(|&&s| s >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            max: n - 1,
        });
    }
    let omegas = tridiagonal::eigvalsh(chain.fields(), chain.couplings())?;
    let columns: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        omegas
            .par_iter()
            .map(|&w| {
                let mut v = tridiagonal::inverse_iteration(chain.fields(), chain.couplings(), w);
                if gauge_sign(chain, w, &v) < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                sites.iter().map(|&s| v[s]).collect()
            })
            .collect()
    };
    let values = DMatrix::from_fn(sites.len(), n, |r, k| columns[k][r]);
    Ok(SpectralRows {
        omegas,
        sites: sites.to_vec(),
        values,
    })
}

/// Sign that makes `φ_0(ω) > 0`.
///
/// `φ_0` can underflow for long chains, so the sign is read off the largest
/// component instead: `φ_m = φ_0 χ_m(ω)` and the sign of `χ_m(ω)` follows from
/// the ratio form of the three-term recurrence, which cannot overflow.
fn gauge_sign(chain: &Chain, omega: f64, v: &[f64]) -> f64 {
    if v[0] != 0.0 && v[0].abs() > 1e-150 {
        return v[0].signum();
    }
    let m = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let chi_sign = polynomial_sign(chain, omega, m);
    v[m].signum() * chi_sign
}

/// Sign of the orthogonal polynomial `χ_m(ω)` defined by
/// `ω χ_ℓ = J_ℓ χ_{ℓ+1} + B_ℓ χ_ℓ + J_{ℓ-1} χ_{ℓ-1}`, `χ_0 = 1`.
fn polynomial_sign(chain: &Chain, omega: f64, m: usize) -> f64 {
    let j = chain.couplings();
    let b = chain.fields();
    let mut sign = 1.0;
    // ratio = χ_{ℓ+1} / χ_ℓ
    let mut prev_ratio = f64::INFINITY;
    for l in 0..m {
        let back = if l == 0 { 0.0 } else { j[l - 1] / prev_ratio };
        let mut ratio = ((omega - b[l]) - back) / j[l];
        if ratio == 0.0 {
            ratio = f64::MIN_POSITIVE;
        }
        sign *= ratio.signum();
        prev_ratio = ratio;
    }
    sign
}

/// Largest entry of `|ΦᵀΦ − I|`.
pub fn orthonormality_residual(sd: &SpectralData) -> f64 {
    let gram = sd.phi.transpose() * &sd.phi;
    let n = gram.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).abs());
        }
    }
    worst
}

/// Largest entry of `|Λφ_k − ω_k φ_k|` over all modes.
pub fn eigen_residual(chain: &Chain, sd: &SpectralData) -> f64 {
    let lambda = chain.hopping_matrix();
    let lhs = lambda * &sd.phi;
    let mut worst: f64 = 0.0;
    for k in 0..sd.len() {
        for n in 0..sd.len() {
            worst = worst.max((lhs[(n, k)] - sd.omegas[k] * sd.phi[(n, k)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn krawtchouk_three() {
        let c = build_chain(&ChainSpec::Krawtchouk { n: 3, p: 0.5 }).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        for (got, want) in c.couplings().iter().zip([s3, 1.0, s3]) {
            assert!(approx(*got, want, 1e-15));
        }
        assert!(c.fields().iter().all(|&b| approx(b, 1.5, 1e-15)));
        assert_eq!(c.dual().unwrap(), &[0.0, 1.0, 2.0, 3.0]);

        let sd = diagonalize(&c).unwrap();
        for (k, w) in sd.omegas.iter().enumerate() {
            assert!(approx(*w, k as f64, 1e-13));
        }
    }

    #[test]
    fn homogeneous_two() {
        let spec = ChainSpec::Homogeneous {
            n: 2,
            coupling: 1.0,
            field: 0.0,
        };
        let c = build_chain(&spec).unwrap();
        assert_eq!(c.couplings(), &[1.0, 1.0]);
        assert_eq!(c.fields(), &[0.0, 0.0, 0.0]);
        let sd = diagonalize(&c).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in sd.omegas.iter().zip([-r2, 0.0, r2]) {
            assert!(approx(*got, want, 1e-14));
        }
    }

    #[test]
    fn custom_two_site() {
        let c = build_chain(&ChainSpec::Custom {
            couplings: vec![1.0],
            fields: vec![0.0, 0.0],
            dual: None,
        })
        .unwrap();
        assert!(c.dual().is_none());
        let sd = diagonalize(&c).unwrap();
        let h = 0.5f64.sqrt();
        assert!(approx(sd.omegas[0], -1.0, 1e-15) && approx(sd.omegas[1], 1.0, 1e-15));
        // φ_0 > 0 gauge
        assert!(approx(sd.phi[(0, 0)], h, 1e-15) && approx(sd.phi[(1, 0)], -h, 1e-15));
        assert!(approx(sd.phi[(0, 1)], h, 1e-15) && approx(sd.phi[(1, 1)], h, 1e-15));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Chain::new(vec![1.0, 0.0], vec![0.0; 3], None),
            Err(Error::NonPositiveCoupling { index: 1, .. })
        ));
        assert!(matches!(
            Chain::new(vec![-1.0], vec![0.0; 2], None),
            Err(Error::NonPositiveCoupling { index: 0, .. })
        ));
        assert!(matches!(
            Chain::new(vec![1.0], vec![0.0; 3], None),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            Chain::new(vec![1.0, 1.0], vec![0.0; 3], Some(vec![0.0, 2.0, 2.0])),
            Err(Error::NonMonotoneDual { index: 2 })
        ));
        assert!(matches!(
            Chain::new(vec![1.0], vec![0.0; 2], Some(vec![0.0])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(build_chain(&ChainSpec::Krawtchouk { n: 4, p: 1.0 }).is_err());
        assert!(build_chain(&ChainSpec::Krawtchouk { n: 0, p: 0.5 }).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"krawtchouk","N":32,"p":0.5}"#;
        let spec: ChainSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, ChainSpec::Krawtchouk { n: 32, p: 0.5 });
        let text = r#"{"kind":"homogeneous","N":4,"J":1.0,"B":0.0}"#;
        let spec: ChainSpec = serde_json::from_str(text).unwrap();
        assert!(matches!(spec, ChainSpec::Homogeneous { n: 4, .. }));
        let text = r#"{"kind":"custom","J":[1.0,2.0],"B":[0,0,0],"dual":[0,1,5]}"#;
        let spec: ChainSpec = serde_json::from_str(text).unwrap();
        let chain = build_chain(&spec).unwrap();
        assert_eq!(chain.dual().unwrap(), &[0.0, 1.0, 5.0]);
        let back = serde_json::to_string(&chain.to_spec()).unwrap();
        assert_eq!(serde_json::from_str::<ChainSpec>(&back).unwrap(), spec);
    }

    #[test]
    fn orthonormality_residual_detects_scaling() {
        let h = 0.5f64.sqrt();
        let exact = SpectralData {
            omegas: vec![-1.0, 1.0],
            phi: DMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
        };
        assert!(orthonormality_residual(&exact) < 4.0 * f64::EPSILON);
        let mut broken = exact.clone();
        broken.phi.column_mut(1).scale_mut(2.0);
        assert!(orthonormality_residual(&broken) >= 3.0 - 1e-12);
    }

    #[test]
    fn spectral_rows_agree_with_full_decomposition() {
        let chain = build_chain(&ChainSpec::Krawtchouk { n: 60, p: 0.3 }).unwrap();
        let sd = diagonalize(&chain).unwrap();
        let sites = [0, 5, 30, 60];
        let rows = spectral_rows(&chain, &sites).unwrap();
        for (r, &s) in sites.iter().enumerate() {
            for k in 0..=60 {
                assert!(
                    approx(rows.values[(r, k)], sd.phi[(s, k)], 1e-10),
                    "site {s}, mode {k}"
                );
            }
        }
        for k in 0..=60 {
            assert!(approx(rows.omegas[k], sd.omegas[k], 1e-10));
        }
        let c = rows.correlation(5, 30, 20).unwrap();
        let direct: f64 = (0..=20).map(|k| sd.phi[(5, k)] * sd.phi[(30, k)]).sum();
        assert!(approx(c, direct, 1e-12));
        assert!(rows.correlation(1, 30, 20).is_err());
    }

    #[test]
    fn gauge_survives_underflowing_first_component() {
        // For N = 1500 the first component of the extreme modes is ~2^-1500.
        let chain = build_chain(&ChainSpec::Krawtchouk { n: 1500, p: 0.5 }).unwrap();
        let rows = spectral_rows(&chain, &[0, 750, 1500]).unwrap();
        // φ_0 of the top mode underflows; the middle site must still carry
        // the sign of χ_750 at that energy.
        let top = 1500;
        let mid = rows.values[(1, top)];
        let sign = polynomial_sign(&chain, rows.omegas[top], 750);
        assert!(mid != 0.0);
        assert_eq!(mid.signum(), sign);
    }
}
