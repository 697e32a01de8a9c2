use nalgebra::DMatrix;

use super::CorrelationMatrix;
use crate::chain::{Chain, SpectralData};
use crate::error::{Error, Result};
use crate::tridiagonal;

/// Largest normalized commutator accepted by [`stable_correlation_spectrum`].
pub const COMMUTATION_TOLERANCE: f64 = 1e-8;

/// Top-left `(ℓ+1) × (ℓ+1)` block of `{Λ − ω_c, X − λ_c}`, where
/// `ω_c = (ω_K + ω_{K+1})/2` and `λ_c = (λ_ℓ + λ_{ℓ+1})/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeunOperator {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub omega_shift: f64,
    pub lambda_shift: f64,
    pub filling: usize,
    pub ell: usize,
}

impl HeunOperator {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.size();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i + 1 == j {
                self.off[i]
            } else if j + 1 == i {
                self.off[j]
            } else {
                0.0
            }
        })
    }
}

pub fn heun_operator(
    chain: &Chain,
    sd: &SpectralData,
    filling: usize,
    ell: usize,
) -> Result<HeunOperator> {
    let dual = chain.dual().ok_or(Error::MissingDualGrid)?;
    let max = chain.n().saturating_sub(1);
    for idx in [filling, ell] {
        if idx + 1 > chain.n() {
            return Err(Error::IndexOutOfRange { index: idx, max });
        }
    }
    if sd.len() != chain.sites() {
        return Err(Error::LengthMismatch {
            what: "spectral data",
            expected: chain.sites(),
            found: sd.len(),
        });
    }
    let omega_shift = 0.5 * (sd.omegas[filling] + sd.omegas[filling + 1]);
    let lambda_shift = 0.5 * (dual[ell] + dual[ell + 1]);
    // The anticommutator of a tridiagonal A with a diagonal D has entries
    // A_ij (D_i + D_j).
    let shifted_dual: Vec<f64> = dual[..=ell].iter().map(|l| l - lambda_shift).collect();
    let b = chain.fields();
    let j = chain.couplings();
    let diag = (0..=ell)
        .map(|n| 2.0 * (b[n] - omega_shift) * shifted_dual[n])
        .collect();
    let off = (0..ell)
        .map(|n| j[n] * (shifted_dual[n] + shifted_dual[n + 1]))
        .collect();
    Ok(HeunOperator {
        diag,
        off,
        omega_shift,
        lambda_shift,
        filling,
        ell,
    })
}

/// `max |[T, C]| / (max |T| · max |C|)`.
pub fn commutator_residual(t: &HeunOperator, c: &CorrelationMatrix) -> Result<f64> {
    if c.len() != t.size() {
        return Err(Error::LengthMismatch {
            what: "correlation matrix",
            expected: t.size(),
            found: c.len(),
        });
    }
    let tm = t.matrix();
    let comm = &tm * &c.entries - &c.entries * &tm;
    let scale = tm.amax() * c.entries.amax();
    Ok(if scale == 0.0 {
        0.0
    } else {
        comm.amax() / scale
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StableSpectrum {
    /// Eigenvalues of `T`, ascending.
    pub t_values: Vec<f64>,
    /// `γ_n = v_nᵀ C v_n`, in the order of `t_values`.
    pub gammas: Vec<f64>,
    /// Column `n` is the eigenvector `v_n` of `T`.
    pub vectors: DMatrix<f64>,
    /// Largest `‖C v_n − γ_n v_n‖`.
    pub max_residual: f64,
}

/// Eigenvalues of `C` read off the eigenvectors of the commuting operator `T`.
///
/// `T` is tridiagonal with a well separated spectrum, so its eigenvectors are
/// accurate even where `C` has eigenvalues exponentially close to 0 or 1.
pub fn stable_correlation_spectrum(
    c: &CorrelationMatrix,
    t: &HeunOperator,
) -> Result<StableSpectrum> {
    let residual = commutator_residual(t, c)?;
    if residual > COMMUTATION_TOLERANCE {
        return Err(Error::NotCommuting { residual });
    }
    let eig = tridiagonal::eigh(&t.diag, &t.off)?;
    let n = t.size();
    let scale = eig.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if let Some(gap) = eig
        .values
        .windows(2)
        .map(|w| w[1] - w[0])
        .min_by(f64::total_cmp)
        .filter(|&g| g < 1e-12 * scale)
    {
        return Err(Error::DegenerateT { gap });
    }
    let vectors = DMatrix::from_column_slice(n, n, &eig.vectors);
    let cv = &c.entries * &vectors;
    let mut gammas = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for k in 0..n {
        let v = vectors.column(k);
        let g = v.dot(&cv.column(k));
        max_residual = max_residual.max((cv.column(k) - v * g).norm());
        gammas.push(g);
    }
    Ok(StableSpectrum {
        t_values: eig.values,
        gammas,
        vectors,
        max_residual,
    })
}
