//! Chain coupled at sites `0` and `N` to two bosonic baths: dissipative rates,
//! the diagonal non-equilibrium steady state, heat currents and conductivity.
//!
//! The smearing functions of both baths are taken as a single constant `h`.
//! Every mode must have positive energy for the Bose–Einstein occupations to
//! make sense; [`shift_to_positive`] moves all fields by a constant to get
//! there, which moves the spectrum and leaves the wavefunctions alone.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::chain::{diagonalize, Chain, SpectralData};
use crate::error::{Error, Result};
use crate::fit::{fit_line, LineFit};
use crate::pst::mirror_symmetry_residual;

/// Lowest mode energy after an automatic shift.
pub const AUTO_SHIFT_MIN_ENERGY: f64 = 0.5;

/// Largest `dT / T` accepted by [`conductivity`].
pub const MAX_RELATIVE_GRADIENT: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathConfig {
    /// Temperature of the bath at site 0.
    pub t0: f64,
    /// Temperature of the bath at site `N`.
    pub tn: f64,
    /// System–bath coupling.
    pub lambda: f64,
    /// Constant value of the smearing functions.
    pub h: f64,
}

impl BathConfig {
    pub fn new(t0: f64, tn: f64, lambda: f64, h: f64) -> Result<Self> {
        for (name, v) in [("T0", t0), ("TN", tn), ("lambda", lambda), ("h", h)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        Ok(Self { t0, tn, lambda, h })
    }
}

/// Bose–Einstein occupation `1 / (e^{ω/T} − 1)`.
pub fn bose_einstein(omega: f64, temperature: f64) -> f64 {
    1.0 / (omega / temperature).exp_m1()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissipatorRates {
    /// Emission rates `d_k`.
    pub d: Vec<f64>,
    /// Absorption rates `d̃_k`.
    pub d_tilde: Vec<f64>,
}

fn require_positive_spectrum(sd: &SpectralData) -> Result<()> {
    match sd.omegas.iter().position(|&w| !(w > 0.0)) {
        Some(index) => Err(Error::NonPositiveSpectrum {
            index,
            omega: sd.omegas[index],
        }),
        None => Ok(()),
    }
}

/// `d_k = Σ_α 2π φ_α(ω_k)² h² (n_α(ω_k) + 1)`, `d̃_k = Σ_α 2π φ_α(ω_k)² h² n_α(ω_k)`,
/// with `α` running over the two end sites.
pub fn dissipator_rates(sd: &SpectralData, bath: &BathConfig) -> Result<DissipatorRates> {
    require_positive_spectrum(sd)?;
    let last = sd.len() - 1;
    let pref = 2.0 * PI * bath.h * bath.h;
    let (d, d_tilde) = sd
        .omegas
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let a0 = sd.phi[(0, k)].powi(2);
            let an = sd.phi[(last, k)].powi(2);
            let n0 = bose_einstein(w, bath.t0);
            let nn = bose_einstein(w, bath.tn);
            (
                pref * (a0 * (n0 + 1.0) + an * (nn + 1.0)),
                pref * (a0 * n0 + an * nn),
            )
        })
        .unzip();
    Ok(DissipatorRates { d, d_tilde })
}

/// Mean occupation `d̃_k / (d_k + d̃_k)` of each mode in the steady state.
pub fn steady_state_occupations(rates: &DissipatorRates) -> Vec<f64> {
    rates
        .d
        .iter()
        .zip(&rates.d_tilde)
        .map(|(d, dt)| dt / (d + dt))
        .collect()
}

/// Steady-state probability of the mode configuration `config`
/// (`config[k]` true when mode `k` is occupied).
pub fn steady_state_weight(config: &[bool], rates: &DissipatorRates) -> Result<f64> {
    if config.len() != rates.d.len() {
        return Err(Error::LengthMismatch {
            what: "mode configuration",
            expected: rates.d.len(),
            found: config.len(),
        });
    }
    Ok(config
        .iter()
        .zip(rates.d.iter().zip(&rates.d_tilde))
        .map(|(&occ, (d, dt))| if occ { dt / (d + dt) } else { d / (d + dt) })
        .product())
}

/// Heat current out of the bath at site 0, valid for any chain.
pub fn heat_current_general(sd: &SpectralData, bath: &BathConfig) -> Result<f64> {
    require_positive_spectrum(sd)?;
    let last = sd.len() - 1;
    let sum: f64 = sd
        .omegas
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            let a0 = sd.phi[(0, k)].powi(2);
            let an = sd.phi[(last, k)].powi(2);
            let n0 = bose_einstein(w, bath.t0);
            let nn = bose_einstein(w, bath.tn);
            let den = a0 * (2.0 * n0 + 1.0) + an * (2.0 * nn + 1.0);
            if den == 0.0 {
                0.0
            } else {
                w * a0 * an * (n0 - nn) / den
            }
        })
        .sum();
    Ok(2.0 * PI * bath.h * bath.h * bath.lambda * bath.lambda * sum)
}

/// `sinh(a) / sinh(b)` for `b > |a|`, without overflow.
fn sinh_ratio(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let x = a.abs();
    a.signum() * (x - b).exp() * (-2.0 * x).exp_m1() / (-2.0 * b).exp_m1()
}

/// Closed form of the heat current for mirror-symmetric chains:
/// `π h² λ² Σ_k ω_k φ_0(ω_k)² sinh((β_N − β_0)ω_k/2) / sinh((β_0 + β_N)ω_k/2)`.
pub fn heat_current_mirror(chain: &Chain, sd: &SpectralData, bath: &BathConfig) -> Result<f64> {
    let scale = chain
        .fields()
        .iter()
        .chain(chain.couplings())
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let residual = mirror_symmetry_residual(chain);
    if residual > 1e-10 * scale {
        return Err(Error::NotMirrorSymmetric { residual });
    }
    require_positive_spectrum(sd)?;
    let (b0, bn) = (1.0 / bath.t0, 1.0 / bath.tn);
    let sum: f64 = sd
        .omegas
        .iter()
        .enumerate()
        .map(|(k, &w)| {
            w * sd.phi[(0, k)].powi(2) * sinh_ratio(0.5 * (bn - b0) * w, 0.5 * (b0 + bn) * w)
        })
        .sum();
    Ok(PI * bath.h * bath.h * bath.lambda * bath.lambda * sum)
}

/// Constant that moves the lowest mode to `min_energy`.
pub fn positive_shift(sd: &SpectralData, min_energy: f64) -> f64 {
    min_energy - sd.omegas[0]
}

/// The chain with all fields shifted so that its lowest mode sits at
/// `min_energy`, together with its spectral data.
pub fn shift_to_positive(chain: &Chain, min_energy: f64) -> Result<(Chain, SpectralData)> {
    let sd = diagonalize(chain)?;
    let c = positive_shift(&sd, min_energy);
    Ok((chain.shifted(c), sd.shifted(c)))
}

/// Fourier-law conductivity `κ = 𝔥_L N / (T_0 − T_N)` with
/// `T_0 = T + dT/2`, `T_N = T − dT/2`.
pub fn conductivity(chain: &Chain, temperature: f64, dt: f64, lambda: f64, h: f64) -> Result<f64> {
    let sd = diagonalize(chain)?;
    conductivity_from_spectrum(&sd, temperature, dt, lambda, h)
}

pub fn conductivity_from_spectrum(
    sd: &SpectralData,
    temperature: f64,
    dt: f64,
    lambda: f64,
    h: f64,
) -> Result<f64> {
    if !(dt > 0.0) || dt > MAX_RELATIVE_GRADIENT * temperature {
        return Err(Error::GradientTooLarge { dt, t: temperature });
    }
    let bath = BathConfig::new(temperature + 0.5 * dt, temperature - 0.5 * dt, lambda, h)?;
    let current = heat_current_general(sd, &bath)?;
    Ok(current * (sd.len() - 1) as f64 / dt)
}

/// Low-temperature reference `π λ² h² N / T² ⟨0|Λ² e^{−Λ/T}|0⟩`.
pub fn low_temperature_conductivity(
    sd: &SpectralData,
    temperature: f64,
    lambda: f64,
    h: f64,
) -> f64 {
    let n = (sd.len() - 1) as f64;
    let expect: f64 = sd
        .omegas
        .iter()
        .enumerate()
        .map(|(k, &w)| w * w * sd.phi[(0, k)].powi(2) * (-w / temperature).exp())
        .sum();
    PI * lambda * lambda * h * h * n / (temperature * temperature) * expect
}

/// High-temperature reference `π λ² h² N B_0 / (2T)` for mirror-symmetric chains.
pub fn high_temperature_conductivity(chain: &Chain, temperature: f64, lambda: f64, h: f64) -> f64 {
    PI * lambda * lambda * h * h * chain.n() as f64 * chain.fields()[0] / (2.0 * temperature)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub r_squared: f64,
    /// `(N, κ, 𝔥_L)` per chain length, in input order.
    pub points: Vec<(usize, f64, f64)>,
}

/// Slope of `ln κ` against `ln N`.
pub fn fit_power_law(ns: &[usize], kappas: &[f64]) -> Result<LineFit> {
    if let Some(k) = kappas.iter().find(|k| !(**k > 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "conductivity {k} is not positive; cannot take its logarithm"
        )));
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = kappas.iter().map(|k| k.ln()).collect();
    fit_line(&x, &y, 4)
}

/// Conductivity scaling exponent of a chain family.
///
/// `family(N)` builds the chain with `N + 1` sites; it must already have a
/// positive spectrum. Lengths are evaluated in parallel.
pub fn transport_exponent<F>(
    family: F,
    temperature: f64,
    dt: f64,
    lambda: f64,
    h: f64,
    ns: &[usize],
) -> Result<ExponentFit>
where
    F: Fn(usize) -> Result<Chain> + Sync,
{
    if ns.len() < 4 {
        return Err(Error::InsufficientPoints {
            needed: 4,
            found: ns.len(),
        });
    }
    let points = ns
        .par_iter()
        .map(|&n| {
            let sd = diagonalize(&family(n)?)?;
            let kappa = conductivity_from_spectrum(&sd, temperature, dt, lambda, h)?;
            Ok((n, kappa, kappa * dt / n as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let kappas: Vec<f64> = points.iter().map(|p| p.1).collect();
    let fit = fit_power_law(ns, &kappas)?;
    Ok(ExponentFit {
        exponent: fit.slope,
        r_squared: fit.r_squared,
        points,
    })
}
