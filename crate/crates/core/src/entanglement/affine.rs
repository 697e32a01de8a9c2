//! Affine approximation `h ≈ α₀ + α₁ T` of the entanglement Hamiltonian.
//!
//! The Gaussian state generated by `α₀ + α₁ T` occupies the `T`-eigenmode
//! `n` with probability `f(α₀ + α₁ t_n)`, `f(x) = 1/(1 + eˣ)`. The two
//! coefficients are fixed by asking that this state has the same particle
//! number and the same entropy as the true reduced state.

use super::heun::{stable_correlation_spectrum, HeunOperator};
use super::{binary_entropy, CorrelationMatrix, HAMILTONIAN_CLAMP};
use crate::error::{Error, Result};
use crate::fit::{fit_line, pearson};

const TARGET_RESIDUAL: f64 = 1e-12;
const MAX_NEWTON_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineFit {
    pub alpha0: f64,
    pub alpha1: f64,
    /// Particle-number and entropy mismatch at the returned coefficients.
    pub residuals: [f64; 2],
    /// `|corr(ε_n, t_n)|` over the modes whose `γ` did not need clamping.
    pub pearson: f64,
    /// RMS of `ε_n − (α₀ + α₁ t_n)` over the same modes.
    pub rms: f64,
    pub t_values: Vec<f64>,
    pub epsilons: Vec<f64>,
}

pub fn fit_affine_approximation(c: &CorrelationMatrix, t: &HeunOperator) -> Result<AffineFit> {
    let s = stable_correlation_spectrum(c, t)?;
    fit_affine_to_spectrum(&s.t_values, &s.gammas)
}

/// Fit given the eigenvalues `t_n` of `T` and the matching occupations `γ_n`.
pub fn fit_affine_to_spectrum(t: &[f64], gammas: &[f64]) -> Result<AffineFit> {
    if t.len() != gammas.len() {
        return Err(Error::LengthMismatch {
            what: "occupations",
            expected: t.len(),
            found: gammas.len(),
        });
    }
    if t.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: t.len(),
        });
    }
    let number: f64 = gammas.iter().sum();
    let entropy: f64 = gammas.iter().map(|&g| binary_entropy(g)).sum();
    let problem = Problem { t, number, entropy };

    let (tu, eu): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(gammas)
        .filter(|(_, &g)| g > HAMILTONIAN_CLAMP && g < 1.0 - HAMILTONIAN_CLAMP)
        .map(|(&tn, &g)| (tn, ((1.0 - g) / g).ln()))
        .unzip();

    let (a0, a1) = initial_guess(&tu, &eu, t);
    let starts = [
        (a0, a1),
        (a0, 2.0 * a1),
        (a0, 0.5 * a1),
        (0.0, a1),
        (-a0, a1),
        (a0, -a1),
        (a0 + 1.0, 1.5 * a1),
        (a0 - 1.0, 0.75 * a1),
    ];
    let mut best: Option<(f64, f64, [f64; 2])> = None;
    for &(s0, s1) in &starts {
        let (x0, x1, r) = problem.newton(s0, s1);
        if x1 == 0.0 || !x0.is_finite() || !x1.is_finite() {
            continue;
        }
        let norm = r[0].abs().max(r[1].abs());
        if best.is_none_or(|(_, _, b)| norm < b[0].abs().max(b[1].abs())) {
            best = Some((x0, x1, r));
        }
        if norm < TARGET_RESIDUAL {
            break;
        }
    }
    let (alpha0, alpha1, residuals) = best.ok_or(Error::NoConvergence {
        residuals: [f64::NAN; 2],
    })?;
    if residuals[0].abs().max(residuals[1].abs()) > 1e-9 {
        return Err(Error::NoConvergence { residuals });
    }

    let (pearson, rms) = if tu.len() >= 2 {
        let rms = (tu
            .iter()
            .zip(&eu)
            .map(|(tn, e)| (e - alpha0 - alpha1 * tn).powi(2))
            .sum::<f64>()
            / tu.len() as f64)
            .sqrt();
        (pearson(&eu, &tu).abs(), rms)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(AffineFit {
        alpha0,
        alpha1,
        residuals,
        pearson,
        rms,
        t_values: t.to_vec(),
        epsilons: gammas
            .iter()
            .map(|&g| {
                let gc = g.clamp(HAMILTONIAN_CLAMP, 1.0 - HAMILTONIAN_CLAMP);
                ((1.0 - gc) / gc).ln()
            })
            .collect(),
    })
}

/// Least squares of `ε` against `t` over the middle half of the unclamped
/// modes; a unit-slope guess when too few are available.
fn initial_guess(tu: &[f64], eu: &[f64], t: &[f64]) -> (f64, f64) {
    let n = tu.len();
    let (lo, hi) = if n >= 8 { (n / 4, n - n / 4) } else { (0, n) };
    match fit_line(&tu[lo..hi], &eu[lo..hi], 2) {
        Ok(f) if f.slope != 0.0 && f.slope.is_finite() => (f.intercept, f.slope),
        _ => {
            let spread = t.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
            (0.0, 10.0 / spread)
        }
    }
}

/// `f(x) = 1/(1 + eˣ)`.
fn fermi(x: f64) -> f64 {
    if x > 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `H₂(f(x))`, symmetric in `x`.
fn entropy_of(x: f64) -> f64 {
    let a = x.abs();
    (-a).exp().ln_1p() + a * fermi(a)
}

struct Problem<'a> {
    t: &'a [f64],
    number: f64,
    entropy: f64,
}

impl Problem<'_> {
    fn residuals(&self, a0: f64, a1: f64) -> [f64; 2] {
        let (mut n, mut s) = (0.0, 0.0);
        for &tn in self.t {
            let x = a0 + a1 * tn;
            n += fermi(x);
            s += entropy_of(x);
        }
        [n - self.number, s - self.entropy]
    }

    /// Rows: particle number, entropy. Uses `f' = −f(1−f)` and
    /// `d H₂(f(x))/dx = −x f(1−f)`.
    fn jacobian(&self, a0: f64, a1: f64) -> [[f64; 2]; 2] {
        let mut jac = [[0.0; 2]; 2];
        for &tn in self.t {
            let x = a0 + a1 * tn;
            let f = fermi(x);
            let w = f * (1.0 - f);
            jac[0][0] -= w;
            jac[0][1] -= w * tn;
            jac[1][0] -= x * w;
            jac[1][1] -= x * w * tn;
        }
        jac
    }

    fn newton(&self, mut a0: f64, mut a1: f64) -> (f64, f64, [f64; 2]) {
        let norm = |r: [f64; 2]| r[0].hypot(r[1]);
        let mut r = self.residuals(a0, a1);
        for _ in 0..MAX_NEWTON_STEPS {
            let j = self.jacobian(a0, a1);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let d0 = (j[1][1] * r[0] - j[0][1] * r[1]) / det;
            let d1 = (j[0][0] * r[1] - j[1][0] * r[0]) / det;
            let mut step = 1.0;
            let mut accepted = false;
            while step > 1e-10 {
                let (n0, n1) = (a0 - step * d0, a1 - step * d1);
                let nr = self.residuals(n0, n1);
                if norm(nr) < norm(r) {
                    a0 = n0;
                    a1 = n1;
                    r = nr;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            let tiny =
                d0.abs() <= 1e-15 * a0.abs().max(1.0) && d1.abs() <= 1e-15 * a1.abs().max(1.0);
            if !accepted || tiny {
                break;
            }
        }
        (a0, a1, r)
    }
}
