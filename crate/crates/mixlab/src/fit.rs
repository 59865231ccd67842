//! Log-log least squares for tail/decay exponents.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PowerLawFit {
    /// Slope of ln(y) against ln(x).
    pub exponent: f64,
    pub stderr: f64,
    /// Intercept on the ln scale, i.e. y ~ exp(intercept) * x^exponent.
    pub intercept: f64,
    /// Weighted RMS of the ln-scale residuals.
    pub residual_rms: f64,
    pub points: usize,
}

/// Weighted least squares of `ln y` on `ln x`.
///
/// All `x`, `y` must be strictly positive and at least 4 points are
/// required; `weights` default to 1.
pub fn fit_power_law(xs: &[f64], ys: &[f64], weights: Option<&[f64]>) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} points, need at least 4",
            xs.len()
        )));
    }
    if let Some(w) = weights {
        if w.len() != xs.len() {
            return Err(Error::LengthMismatch(w.len(), xs.len()));
        }
        if w.iter().any(|&wi| !(wi > 0.0)) {
            return Err(Error::DegenerateFit("nonpositive weight".into()));
        }
    }
    if xs.iter().chain(ys.iter()).any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateFit(
            "nonpositive or nonfinite data point".into(),
        ));
    }

    let n = xs.len();
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let lx: Vec<f64> = xs.iter().map(|&x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|&y| y.ln()).collect();

    let wsum: f64 = (0..n).map(w).sum();
    let mx: f64 = (0..n).map(|i| w(i) * lx[i]).sum::<f64>() / wsum;
    let my: f64 = (0..n).map(|i| w(i) * ly[i]).sum::<f64>() / wsum;
    let sxx: f64 = (0..n).map(|i| w(i) * (lx[i] - mx) * (lx[i] - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all x identical".into()));
    }
    let sxy: f64 = (0..n).map(|i| w(i) * (lx[i] - mx) * (ly[i] - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let ssr: f64 = (0..n)
        .map(|i| {
            let r = ly[i] - intercept - slope * lx[i];
            w(i) * r * r
        })
        .sum();
    let dof = (n as f64 - 2.0).max(1.0);
    let sigma2 = ssr / dof;
    let stderr = (sigma2 / sxx).sqrt();
    let residual_rms = (ssr / wsum).sqrt();

    Ok(PowerLawFit {
        exponent: slope,
        stderr,
        intercept,
        residual_rms,
        points: n,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExponentialFit {
    /// y ~ exp(intercept) * rate^x, rate = exp(slope).
    pub rate: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

/// Ordinary least squares of `ln y` on `x`; used to recognize geometric
/// decay where a power law does not apply.
pub fn fit_exponential(xs: &[f64], ys: &[f64]) -> Result<ExponentialFit> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} points, need at least 4",
            xs.len()
        )));
    }
    if ys.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::DegenerateFit("nonpositive data point".into()));
    }
    let n = xs.len() as f64;
    let ly: Vec<f64> = ys.iter().map(|&y| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all x identical".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ly.iter())
        .map(|(&x, &y)| (x - mx) * (y - my))
        .sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs
        .iter()
        .zip(ly.iter())
        .map(|(&x, &y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let dof = (xs.len() as f64 - 2.0).max(1.0);
    Ok(ExponentialFit {
        rate: slope.exp(),
        stderr: (ssr / dof / sxx).sqrt(),
        intercept,
        residual_rms: (ssr / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law_recovered() {
        let xs: Vec<f64> = (1..=16).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.powi(-2)).collect();
        let fit = fit_power_law(&xs, &ys, None).unwrap();
        assert!((fit.exponent + 2.0).abs() < 1e-12);
        assert!(fit.stderr < 1e-12);
    }

    #[test]
    fn noisy_cubic_within_band() {
        // y = 5 x^-3 (1 + 1% deterministic wobble)
        let xs: Vec<f64> = (0..40).map(|i| 10.0_f64 * 1.2f64.powi(i)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| 5.0 * x.powi(-3) * (1.0 + 0.01 * ((i * 2654435761) % 200) as f64 / 100.0 - 0.01))
            .collect();
        let fit = fit_power_law(&xs, &ys, None).unwrap();
        assert!(fit.exponent > -3.1 && fit.exponent < -2.9, "{}", fit.exponent);
    }

    #[test]
    fn two_points_rejected() {
        let err = fit_power_law(&[1.0, 2.0], &[1.0, 0.5], None).unwrap_err();
        assert!(matches!(err, Error::DegenerateFit(_)));
    }

    #[test]
    fn nonpositive_rejected() {
        let err = fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0, 0.5, 0.0, 0.1], None).unwrap_err();
        assert!(matches!(err, Error::DegenerateFit(_)));
    }

    #[test]
    fn exponential_fit_recovers_rate() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 * 0.5f64.powf(x)).collect();
        let fit = fit_exponential(&xs, &ys).unwrap();
        assert!((fit.rate - 0.5).abs() < 1e-12);
    }
}
