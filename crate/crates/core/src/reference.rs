//! Closed-form spectra and wavefunctions of the two built-in chain families,
//! used to cross-check [`crate::chain::diagonalize`].

use statrs::function::factorial::ln_binomial;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Krawtchouk polynomial `K_n(x; p, N)` by forward recurrence in `n`:
///
/// `-x K_n = p(N-n) K_{n+1} - [p(N-n) + n(1-p)] K_n + n(1-p) K_{n-1}`,
/// with `K_0 = 1`, `K_1 = 1 - x/(pN)`.
///
/// The recurrence loses accuracy once `K_n` passes into the region where the
/// weighted polynomial decays, which happens early when `p` is far from 1/2.
/// [`closed_form_reference`] avoids it.
pub fn krawtchouk(n: usize, x: f64, p: f64, big_n: usize) -> f64 {
    let nf = big_n as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x / (p * nf);
    for m in 1..n {
        let mf = m as f64;
        let a = p * (nf - mf);
        let b = a + mf * (1.0 - p);
        let c = mf * (1.0 - p);
        let next = ((b - x) * cur - c * prev) / a;
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the second kind `U_n(x)`.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(ω_k, φ_n(ω_k))` from the closed forms.
///
/// `k` is the ascending mode index used everywhere in this crate. For the
/// homogeneous chain the textbook formula `ω = 2J cos(π(k'+1)/(N+2)) + B` runs
/// downwards in `k'`, so `k' = N - k` is used internally.
pub fn closed_form_reference(spec: &ChainSpec, site: usize, mode: usize) -> Result<(f64, f64)> {
    let big_n = match *spec {
        ChainSpec::Krawtchouk { n, .. } | ChainSpec::Homogeneous { n, .. } => n,
        ChainSpec::Custom { .. } => {
            return Err(Error::InvalidParameter(
                "closed forms exist only for krawtchouk and homogeneous chains".into(),
            ))
        }
    };
    for idx in [site, mode] {
        if idx > big_n {
            return Err(Error::IndexOutOfRange {
                index: idx,
                max: big_n,
            });
        }
    }

    match *spec {
        ChainSpec::Krawtchouk { p, .. } => {
            let phi = krawtchouk_amplitude(site, mode, p, big_n);
            Ok((mode as f64, phi))
        }
        ChainSpec::Homogeneous {
            coupling, field, ..
        } => {
            let kp = (big_n - mode) as f64;
            let theta = std::f64::consts::PI * (kp + 1.0) / (big_n as f64 + 2.0);
            let omega = field + 2.0 * coupling * theta.cos();
            let norm = (2.0 / (big_n as f64 + 2.0)).sqrt();
            let phi = norm * theta.sin() * chebyshev_u(site, theta.cos());
            Ok((omega, phi))
        }
        ChainSpec::Custom { .. } => unreachable!(),
    }
}

/// `φ_n(ω_k)` for the Krawtchouk chain.
///
/// Both end values are closed forms: `K_0 = 1` and `K_N(k) = (−(1−p)/p)^k`.
/// The amplitude recurrence is run forward from the left end and backward from
/// the right end, and the two are joined where they agree best, so each side is
/// only used in the direction in which it is stable.
fn krawtchouk_amplitude(site: usize, mode: usize, p: f64, big_n: usize) -> f64 {
    let nf = big_n as f64;
    let k = mode as f64;
    let omega = k;
    let field = |n: usize| p * (nf - n as f64) + (1.0 - p) * n as f64;
    let coupling = |n: usize| (p * (1.0 - p) * ((n + 1) as f64) * (nf - n as f64)).sqrt();
    let binom = ln_binomial(big_n as u64, mode as u64);

    let left = (0.5 * (binom + k * p.ln() + (nf - k) * (1.0 - p).ln())).exp();
    let right_sign = if (big_n + mode) % 2 == 0 { 1.0 } else { -1.0 };
    let right = right_sign * (0.5 * (binom + (nf - k) * p.ln() + k * (1.0 - p).ln())).exp();

    let mut fwd = vec![0.0; big_n + 1];
    fwd[0] = left;
    for n in 0..big_n {
        let prev = if n == 0 { 0.0 } else { coupling(n - 1) * fwd[n - 1] };
        fwd[n + 1] = ((omega - field(n)) * fwd[n] - prev) / coupling(n);
    }
    let mut bwd = vec![0.0; big_n + 1];
    bwd[big_n] = right;
    for n in (1..=big_n).rev() {
        let next = if n == big_n { 0.0 } else { coupling(n) * bwd[n + 1] };
        bwd[n - 1] = ((omega - field(n)) * bwd[n] - next) / coupling(n - 1);
    }

    let split = (0..=big_n)
        .filter(|&n| fwd[n] != 0.0 || bwd[n] != 0.0)
        .min_by(|&a, &b| {
            let rel = |n: usize| (fwd[n] - bwd[n]).abs() / fwd[n].abs().max(bwd[n].abs());
            rel(a).total_cmp(&rel(b))
        })
        .unwrap_or(0);
    if site <= split {
        fwd[site]
    } else {
        bwd[site]
    }
}
