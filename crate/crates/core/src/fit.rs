//! Ordinary least-squares line fits used by the scaling analyses.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Fits `y ≈ slope * x + intercept`.
pub fn fit_line(x: &[f64], y: &[f64], min_points: usize) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "fit ordinates",
            expected: x.len(),
            found: y.len(),
        });
    }
    let n = x.len();
    if n < min_points.max(2) {
        return Err(Error::InsufficientPoints {
            needed: min_points.max(2),
            found: n,
        });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - slope * a - intercept).powi(2))
            .sum();
        1.0 - ss_res / syy
    };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.5 * v - 1.0).collect();
        let f = fit_line(&x, &y, 4).unwrap();
        assert!((f.slope - 2.5).abs() < 1e-14);
        assert!((f.intercept + 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!((pearson(&x, &y) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn too_few_points() {
        assert!(matches!(
            fit_line(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], 4),
            Err(Error::InsufficientPoints {
                needed: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn constant_data_has_zero_slope() {
        let f = fit_line(&[1.0, 2.0, 3.0, 5.0], &[7.0; 4], 4).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.r_squared, 1.0);
    }
}
