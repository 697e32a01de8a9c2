//! Symmetric tridiagonal eigensolvers.
//!
//! The full decomposition is the implicit QL algorithm with Wilkinson-style
//! shifts (the EISPACK `tql2` scheme). For very long chains, where only a few
//! rows of the eigenvector matrix are needed, eigenvalues come from the same
//! QL sweep without vector accumulation and each eigenvector is recovered by
//! inverse iteration in O(n).

use crate::error::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues (ascending) and eigenvectors of a symmetric tridiagonal matrix.
///
/// `vectors` is column-major: eigenvector `k` occupies
/// `vectors[k * n..(k + 1) * n]`.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

/// Full eigendecomposition of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`).
pub fn eigh(diag: &[f64], off: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    check_shape(n, off)?;
    let mut d = diag.to_vec();
    let mut e = padded_off(off, n);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    ql_implicit(&mut d, &mut e, Some(&mut z))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        vectors.extend_from_slice(&z[i * n..(i + 1) * n]);
    }
    Ok(TridiagonalEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    check_shape(n, off)?;
    let mut d = diag.to_vec();
    let mut e = padded_off(off, n);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Unit eigenvector for an (accurately known) eigenvalue by inverse iteration.
///
/// The returned vector has an arbitrary sign.
pub fn inverse_iteration(diag: &[f64], off: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .map(|x| x.abs())
        .chain(off.iter().map(|x| 2.0 * x.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    // A tiny offset keeps the factorization away from exact singularity.
    let shift = eigenvalue + 4.0 * f64::EPSILON * scale;
    let lu = ShiftedLu::factor(diag, off, shift, scale);

    // Deterministic start vector with no special symmetry.
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        .collect();
    for _ in 0..3 {
        lu.solve(&mut x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

fn check_shape(n: usize, off: &[f64]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    if off.len() + 1 != n {
        return Err(Error::LengthMismatch {
            what: "off-diagonal",
            expected: n - 1,
            found: off.len(),
        });
    }
    Ok(())
}

fn padded_off(off: &[f64], n: usize) -> Vec<f64> {
    let mut e = Vec::with_capacity(n);
    e.extend_from_slice(off);
    e.push(0.0);
    e
}

/// Implicit QL iteration. On return `d` holds the (unsorted) eigenvalues and,
/// when present, column `i` of `z` the matching eigenvector.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::ConvergenceFailure { index: l });
                }

                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(z) = z.as_deref_mut() {
                        let (lo, hi) = z.split_at_mut((i + 1) * n);
                        let col_i = &mut lo[i * n..];
                        let col_ip1 = &mut hi[..n];
                        for (a, b) in col_i.iter_mut().zip(col_ip1.iter_mut()) {
                            let t = *b;
                            *b = s * *a + c * t;
                            *a = c * *a - s * t;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// LU factorization with partial pivoting of `T - shift * I` for tridiagonal `T`.
struct ShiftedLu {
    /// Upper factor: main, first and second super-diagonals.
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    /// Multipliers and whether rows `i`, `i + 1` were swapped at step `i`.
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn factor(diag: &[f64], off: &[f64], shift: f64, scale: f64) -> Self {
        let n = diag.len();
        let tiny = f64::EPSILON * scale;
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];

        // Current pivot row: (a, b, c) at columns (i, i+1, i+2).
        let mut a = diag[0] - shift;
        let mut b = if n > 1 { off[0] } else { 0.0 };
        let mut c = 0.0;
        for i in 0..n - 1 {
            // Next row in its original form: (off[i], diag[i+1]-shift, off[i+1]).
            let na = off[i];
            let nb = diag[i + 1] - shift;
            let nc = if i + 1 < n - 1 { off[i + 1] } else { 0.0 };
            if na.abs() > a.abs() {
                swapped[i] = true;
                let m = a / na;
                mult[i] = m;
                u0[i] = na;
                u1[i] = nb;
                u2[i] = nc;
                a = b - m * nb;
                b = c - m * nc;
            } else {
                let piv = if a == 0.0 { tiny } else { a };
                let m = na / piv;
                mult[i] = m;
                u0[i] = piv;
                u1[i] = b;
                u2[i] = c;
                a = nb - m * b;
                b = nc - m * c;
            }
            c = 0.0;
        }
        u0[n - 1] = if a == 0.0 { tiny } else { a };
        Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, x: &mut [f64]) {
        let n = x.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                x.swap(i, i + 1);
            }
            x[i + 1] -= self.mult[i] * x[i];
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            if i + 1 < n {
                v -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= self.u2[i] * x[i + 2];
            }
            x[i] = v / self.u0[i];
        }
    }
}
