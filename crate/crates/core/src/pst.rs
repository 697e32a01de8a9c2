//! Perfect state transfer: checks on a given chain and the inverse spectral
//! construction of a mirror-symmetric chain with a prescribed spectrum.

use num_complex::Complex64;

use crate::chain::{diagonalize, Chain, SpectralData};
use crate::error::{Error, Result};

/// `⟨N| e^{-iΛt} |0⟩ = Σ_k φ_0(ω_k) φ_N(ω_k) e^{-iω_k t}`.
pub fn transfer_amplitude(sd: &SpectralData, t: f64) -> Complex64 {
    let last = sd.len() - 1;
    sd.omegas
        .iter()
        .enumerate()
        .map(|(k, &w)| sd.phi[(0, k)] * sd.phi[(last, k)] * Complex64::from_polar(1.0, -w * t))
        .sum()
}

/// Probability that an excitation injected at site 0 sits on site `N` at time `t`.
pub fn transfer_fidelity(sd: &SpectralData, t: f64) -> f64 {
    transfer_amplitude(sd, t).norm_sqr()
}

/// Largest deviation from `B_{N-n} = B_n`, `J_{N-1-n} = J_n`.
pub fn mirror_symmetry_residual(chain: &Chain) -> f64 {
    fn worst(v: &[f64]) -> f64 {
        v.iter()
            .zip(v.iter().rev())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
    worst(chain.fields()).max(worst(chain.couplings()))
}

/// Outcome of the spectral gap test.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCheck {
    pub ok: bool,
    /// `round(gap · τ / π)` for every consecutive pair.
    pub multiples: Vec<i64>,
}

/// Tests `ω_{k+1} − ω_k = (π/τ) M_k` with every `M_k` a positive odd integer.
pub fn spectral_gap_check(omegas: &[f64], tau: f64, tol: f64) -> GapCheck {
    let mut ok = tau > 0.0;
    let multiples = omegas
        .windows(2)
        .map(|w| {
            let x = (w[1] - w[0]) * tau / std::f64::consts::PI;
            let m = x.round();
            if (x - m).abs() > tol || m < 1.0 || m.rem_euclid(2.0) != 1.0 {
                ok = false;
            }
            m as i64
        })
        .collect();
    GapCheck { ok, multiples }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PstTolerances {
    /// Mirror residual allowed, relative to `max(|B|, |J|)`.
    pub mirror: f64,
    /// Distance of `gap · τ / π` from an odd integer.
    pub gap: f64,
    /// Allowed shortfall of the fidelity from one.
    pub fidelity: f64,
}

impl Default for PstTolerances {
    fn default() -> Self {
        Self {
            mirror: 1e-10,
            gap: 1e-8,
            fidelity: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PstVerdict {
    pub mirror_residual: f64,
    pub gap_condition: bool,
    pub multiples: Vec<i64>,
    pub tau: f64,
    pub fidelity_at_tau: f64,
    /// `arg ⟨N| e^{-iΛτ} |0⟩`.
    pub phase: f64,
    pub verdict: bool,
}

pub fn pst_verdict(chain: &Chain, tau: f64, tol: &PstTolerances) -> Result<PstVerdict> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "transfer time {tau} must be positive"
        )));
    }
    let sd = diagonalize(chain)?;
    let mirror_residual = mirror_symmetry_residual(chain);
    let scale = coefficient_scale(chain);
    let gap = spectral_gap_check(&sd.omegas, tau, tol.gap);
    let amp = transfer_amplitude(&sd, tau);
    let fidelity_at_tau = amp.norm_sqr();
    let verdict =
        mirror_residual <= tol.mirror * scale && gap.ok && fidelity_at_tau >= 1.0 - tol.fidelity;
    Ok(PstVerdict {
        mirror_residual,
        gap_condition: gap.ok,
        multiples: gap.multiples,
        tau,
        fidelity_at_tau,
        phase: amp.arg(),
        verdict,
    })
}

fn coefficient_scale(chain: &Chain) -> f64 {
    chain
        .fields()
        .iter()
        .chain(chain.couplings())
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// How [`synthesize_with`] turns a spectrum into couplings and fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynthesisMethod {
    /// Euclidean division of `P_{N+1}` by `P_N`, repeated down to `P_0`.
    Euclid,
    /// Lanczos tridiagonalization of `diag(ω)` against the weights fixed by
    /// `χ_N(ω_k) = (−1)^{N+k}`. Produces the same matrix as `Euclid` in exact
    /// arithmetic and stays accurate when the division loses digits.
    Lanczos,
    /// `Euclid`, falling back to `Lanczos` if the round-trip check fails.
    #[default]
    Auto,
}

/// Mirror-symmetric chain whose hopping matrix has spectrum `omegas`.
pub fn synthesize_from_spectrum(omegas: &[f64]) -> Result<Chain> {
    synthesize_with(omegas, SynthesisMethod::Auto)
}

pub fn synthesize_with(omegas: &[f64], method: SynthesisMethod) -> Result<Chain> {
    let nodes = ScaledNodes::new(omegas)?;
    match method {
        SynthesisMethod::Euclid => verified(omegas, nodes.euclid()?),
        SynthesisMethod::Lanczos => verified(omegas, nodes.lanczos()?),
        SynthesisMethod::Auto => match nodes.euclid().and_then(|c| verified(omegas, c)) {
            Ok(chain) => Ok(chain),
            Err(_) => verified(omegas, nodes.lanczos()?),
        },
    }
}

/// Accepts a synthesized chain only if it reproduces the spectrum within
/// `1e-8 · max|ω|` and is mirror symmetric to the same relative accuracy.
fn verified(omegas: &[f64], chain: Chain) -> Result<Chain> {
    let scale = omegas
        .iter()
        .map(|w| w.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let sd = diagonalize(&chain)?;
    let spectral = sd
        .omegas
        .iter()
        .zip(omegas)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let residual =
        (spectral / scale).max(mirror_symmetry_residual(&chain) / coefficient_scale(&chain));
    if residual > 1e-8 || !residual.is_finite() {
        return Err(Error::ConditioningFailure { residual });
    }
    Ok(chain)
}

/// Spectrum mapped affinely onto `[-1, 1]`.
struct ScaledNodes {
    center: f64,
    half_width: f64,
    u: Vec<f64>,
}

impl ScaledNodes {
    fn new(omegas: &[f64]) -> Result<Self> {
        if omegas.len() < 2 {
            return Err(Error::InvalidParameter(
                "synthesis needs at least two eigenvalues".into(),
            ));
        }
        if omegas.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidParameter("eigenvalues must be finite".into()));
        }
        for (i, w) in omegas.windows(2).enumerate() {
            if w[1] == w[0] {
                return Err(Error::DegenerateSpectrum { index: i + 1 });
            }
            if w[1] < w[0] {
                return Err(Error::InvalidParameter(
                    "eigenvalues must be given in ascending order".into(),
                ));
            }
        }
        let lo = omegas[0];
        let hi = omegas[omegas.len() - 1];
        let center = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo);
        let u = omegas.iter().map(|w| (w - center) / half_width).collect();
        Ok(Self {
            center,
            half_width,
            u,
        })
    }

    fn to_chain(&self, b: Vec<f64>, j: Vec<f64>) -> Result<Chain> {
        let fields = b
            .iter()
            .map(|x| x * self.half_width + self.center)
            .collect();
        let couplings = j.iter().map(|x| x * self.half_width).collect();
        Chain::new(couplings, fields, None)
    }

    /// `1 / Π_{j≠k}(u_k − u_j)`.
    fn barycentric_weights(&self) -> Vec<f64> {
        let n = self.u.len();
        (0..n)
            .map(|k| {
                let prod: f64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| self.u[k] - self.u[j])
                    .product();
                1.0 / prod
            })
            .collect()
    }

    /// Euclidean algorithm with polynomials held as Chebyshev series on
    /// `[-1, 1]`; the monomial basis loses all accuracy by `N ≈ 20`.
    fn euclid(&self) -> Result<Chain> {
        let big_n = self.u.len() - 1;

        // P_{N+1}(x) = Π (x − u_k), sampled at N + 2 Chebyshev points.
        let pts = chebyshev_points(big_n + 2);
        let vals: Vec<f64> = pts
            .iter()
            .map(|&x| self.u.iter().map(|&uk| x - uk).product())
            .collect();
        let mut upper = monic(chebyshev_coefficients(&vals));

        // P_N interpolates (u_k, (−1)^{N+k}); barycentric second form.
        let weights = self.barycentric_weights();
        let target: Vec<f64> = (0..=big_n)
            .map(|k| if (big_n + k) % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let pts = chebyshev_points(big_n + 1);
        let vals: Vec<f64> = pts
            .iter()
            .map(|&x| barycentric_eval(&self.u, &weights, &target, x))
            .collect();
        let mut lower = monic(chebyshev_coefficients(&vals));

        let mut b = vec![0.0; big_n + 1];
        let mut j = vec![0.0; big_n];
        for l in (0..=big_n).rev() {
            // R = P_{l+1} − x P_l; the T_{l+1} terms cancel.
            let mut rem = upper.clone();
            for (i, v) in times_x(&lower).iter().enumerate() {
                rem[i] -= v;
            }
            let shift = -rem[l] / lower[l];
            for (i, v) in lower.iter().enumerate() {
                rem[i] += shift * v;
            }
            b[l] = shift;
            if l == 0 {
                break;
            }
            rem.truncate(l);
            let j_sq = -leading_monomial_coefficient(&rem);
            if !(j_sq > 0.0) || !j_sq.is_finite() {
                return Err(Error::NegativeJSquared {
                    index: l - 1,
                    value: j_sq * self.half_width * self.half_width,
                });
            }
            j[l - 1] = j_sq.sqrt();
            rem.iter_mut().for_each(|v| *v /= -j_sq);
            upper = std::mem::replace(&mut lower, rem);
        }
        self.to_chain(b, j)
    }

    /// Lanczos on `diag(u)` started from `sqrt(w_k)`, `w_k ∝ |1/P'_{N+1}(u_k)|`,
    /// with full reorthogonalization.
    fn lanczos(&self) -> Result<Chain> {
        let n = self.u.len();
        let log_w: Vec<f64> = (0..n)
            .map(|k| {
                -(0..n)
                    .filter(|&j| j != k)
                    .map(|j| (self.u[k] - self.u[j]).abs().ln())
                    .sum::<f64>()
            })
            .collect();
        let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut q: Vec<f64> = log_w.iter().map(|lw| (0.5 * (lw - top)).exp()).collect();
        normalize(&mut q);

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let mut j = Vec::with_capacity(n - 1);
        basis.push(q);
        for l in 0..n {
            let cur = &basis[l];
            let mut v: Vec<f64> = cur.iter().zip(&self.u).map(|(a, x)| a * x).collect();
            let alpha = dot(cur, &v);
            b.push(alpha);
            if l + 1 == n {
                break;
            }
            for _ in 0..2 {
                for prev in &basis {
                    let c = dot(prev, &v);
                    v.iter_mut().zip(prev).for_each(|(a, p)| *a -= c * p);
                }
            }
            let beta = normalize(&mut v);
            if !(beta > 0.0) {
                return Err(Error::NegativeJSquared {
                    index: l,
                    value: beta * beta,
                });
            }
            j.push(beta);
            basis.push(v);
        }
        self.to_chain(b, j)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn barycentric_eval(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&u, &w), &y) in nodes.iter().zip(weights).zip(values) {
        let d = x - u;
        if d == 0.0 {
            return y;
        }
        num += w * y / d;
        den += w / d;
    }
    num / den
}

/// First-kind Chebyshev points `cos(π(j + ½)/n)`.
fn chebyshev_points(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos())
        .collect()
}

/// Chebyshev coefficients of the degree `n − 1` interpolant through values
/// at the `n` first-kind points.
fn chebyshev_coefficients(vals: &[f64]) -> Vec<f64> {
    let n = vals.len();
    let nf = n as f64;
    let mut c: Vec<f64> = (0..n)
        .map(|m| {
            2.0 / nf
                * vals
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v * (std::f64::consts::PI * m as f64 * (j as f64 + 0.5) / nf).cos()
                    })
                    .sum::<f64>()
        })
        .collect();
    c[0] *= 0.5;
    c
}

/// Monomial leading coefficient of a Chebyshev series: `T_d = 2^{d−1} x^d + …`.
fn leading_monomial_coefficient(c: &[f64]) -> f64 {
    let d = c.len() - 1;
    if d == 0 {
        c[0]
    } else {
        c[d] * 2f64.powi(d as i32 - 1)
    }
}

fn monic(mut c: Vec<f64>) -> Vec<f64> {
    let lc = leading_monomial_coefficient(&c);
    c.iter_mut().for_each(|v| *v /= lc);
    c
}

/// `x · Σ c_n T_n` using `x T_0 = T_1`, `x T_n = (T_{n+1} + T_{n−1}) / 2`.
fn times_x(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    for (n, &v) in c.iter().enumerate() {
        if n == 0 {
            out[1] += v;
        } else {
            out[n + 1] += 0.5 * v;
            out[n - 1] += 0.5 * v;
        }
    }
    out
}
