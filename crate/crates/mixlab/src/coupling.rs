//! Scalar bookkeeping of the coupling scheme.
//!
//! Two families of mass arrive at a reference set: `a_k^i` is the mass of
//! family `i` that first becomes available for matching at step `k`. At
//! every step a fraction `d_k^i = c0 * min(s_k^1, s_k^2) / s_k^i` of the
//! available mass `s_k^i` is matched against the other family, and the
//! unmatched remainder re-enters the queue with a return-time law `p` whose
//! conditional probabilities are only known up to a distortion band
//! `[1 - eps_d, 1 + eps_d]`:
//!
//! ```text
//!     s_k^i = a_k^i + sum_{j<k} (1 - d_j^i) * p~_{k-j,j} * s_j^i,
//! ```
//!
//! with `p~` equal to `p_{k-j}` times a band factor chosen by the
//! perturbation mode. The matched mass at step `k` is
//! `eta_k^i = d_k^i s_k^i` (equal across families by construction) and the
//! still-unmatched mass after step `n` is the tail `sum_{k>n} eta_k`.

use crate::error::{Error, Result};
use crate::fit::{fit_exponential, fit_power_law, PowerLawFit};
use crate::numeric::CompensatedSum;
use rand::Rng as _;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BandMode {
    /// No distortion: factors pinned at 1.
    Exact,
    /// Worst-case low: every factor is 1 - eps_d.
    Low,
    /// Worst-case high: every factor is 1 + eps_d.
    High,
    /// Independent uniform draws in [1 - eps_d, 1 + eps_d].
    Random { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct CouplingBudget {
    /// Proper-return-time law, `p[k]` for `k = 1..=n_max` (`p[0]` unused).
    pub p: Vec<f64>,
    /// First-arrival masses per family, indexed from 0.
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    /// Distortion half-width of the conditional return probabilities.
    pub eps_d: f64,
    /// Matching fraction.
    pub c0: f64,
}

impl CouplingBudget {
    pub fn new(p: Vec<f64>, a1: Vec<f64>, a2: Vec<f64>, eps_d: f64, c0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps_d) {
            return Err(Error::InvalidBand(eps_d));
        }
        if !(c0 > 0.0 && c0 < 1.0) {
            return Err(Error::InvalidInput(format!("c0 = {c0} must lie in (0,1)")));
        }
        if a1.len() != p.len() || a2.len() != p.len() {
            return Err(Error::LengthMismatch(p.len(), a1.len().min(a2.len())));
        }
        if p.iter().chain(a1.iter()).chain(a2.iter()).any(|&x| x < 0.0) {
            return Err(Error::InvalidInput("sequences must be nonnegative".into()));
        }
        if a1[0] <= 0.0 || a2[0] <= 0.0 {
            return Err(Error::InvalidInput("a_0 must be positive for both families".into()));
        }
        Ok(Self { p, a1, a2, eps_d, c0 })
    }

    pub fn n_max(&self) -> usize {
        self.p.len() - 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingTrace {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    /// Matched mass per step; `eta1[k] == eta2[k]` up to rounding.
    pub eta1: Vec<f64>,
    pub eta2: Vec<f64>,
    /// `uncoupled_tail[n] = sum_{k>n} eta1[k]` (suffix sums, nonincreasing).
    pub uncoupled_tail: Vec<f64>,
    pub mode: BandMode,
}

pub fn simulate_coupling(budget: &CouplingBudget, mode: BandMode) -> Result<CouplingTrace> {
    if budget.eps_d >= 1.0 {
        return Err(Error::InvalidBand(budget.eps_d));
    }
    let n = budget.n_max();
    let mut rng = match mode {
        BandMode::Random { seed } => Some(crate::rng::stream(seed, 0)),
        _ => None,
    };
    let eps = budget.eps_d;

    let mut s = [vec![0.0f64; n + 1], vec![0.0f64; n + 1]];
    let mut d = [vec![0.0f64; n + 1], vec![0.0f64; n + 1]];
    let mut eta = [vec![0.0f64; n + 1], vec![0.0f64; n + 1]];
    let a = [&budget.a1, &budget.a2];

    for k in 0..=n {
        for i in 0..2 {
            let mut conv = CompensatedSum::new();
            for j in 0..k {
                let pk = budget.p[k - j];
                if pk == 0.0 || s[i][j] == 0.0 {
                    // dead terms contribute nothing; skip them
                    continue;
                }
                let factor = match mode {
                    BandMode::Exact => 1.0,
                    BandMode::Low => 1.0 - eps,
                    BandMode::High => 1.0 + eps,
                    BandMode::Random { .. } => {
                        let u: f64 = rng.as_mut().unwrap().gen();
                        1.0 - eps + 2.0 * eps * u
                    }
                };
                conv.add((1.0 - d[i][j]) * pk * factor * s[i][j]);
            }
            s[i][k] = a[i][k] + conv.total();
        }
        let smin = s[0][k].min(s[1][k]);
        for i in 0..2 {
            d[i][k] = if s[i][k] > 0.0 { budget.c0 * smin / s[i][k] } else { 0.0 };
            eta[i][k] = d[i][k] * s[i][k];
        }
    }

    // suffix sums of the matched mass
    let mut tail = vec![0.0f64; n + 1];
    let mut run = CompensatedSum::new();
    for k in (0..=n).rev() {
        if k < n {
            run.add(eta[0][k + 1]);
        }
        tail[k] = run.total();
    }

    let [s1, s2] = s;
    let [d1, d2] = d;
    let [eta1, eta2] = eta;
    Ok(CouplingTrace {
        s1,
        s2,
        d1,
        d2,
        eta1,
        eta2,
        uncoupled_tail: tail,
        mode,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailShape {
    PowerLaw,
    /// Geometric decay; the power-law fit is flagged inapplicable.
    Exponential,
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingReport {
    pub s_fit: PowerLawFit,
    /// Envelope constants of `s_k * k^alpha0` over the fit window.
    pub c1: f64,
    pub c2: f64,
    /// `c0 c1 (1 - eps_d) / (2 c2)` with the fitted constants.
    pub fitted_d: f64,
    pub min_d: f64,
    pub min_d_ok: bool,
    pub tail_fit: Option<PowerLawFit>,
    pub tail_rate: Option<f64>,
    pub tail_shape: TailShape,
    /// Whether eps_d < c0 c1 (1 - eps_d) / (4 c2) holds with fitted constants.
    pub band_condition_ok: bool,
    pub pass: bool,
}

/// Fit the decay of `s_k`, check the uniform lower bound on the matched
/// fractions against the fitted `d`, and fit the uncoupled-tail exponent.
pub fn verify_coupling_bounds(
    trace: &CouplingTrace,
    budget: &CouplingBudget,
    alpha0: f64,
) -> Result<CouplingReport> {
    let n = trace.s1.len() - 1;
    let lo = (n / 100).max(2);
    let grid = crate::numeric::geometric_grid(lo as u64, n as u64, 8);
    let xs: Vec<f64> = grid.iter().map(|&k| k as f64).collect();
    let ys: Vec<f64> = grid.iter().map(|&k| trace.s1[k as usize]).collect();
    let s_fit = fit_power_law(&xs, &ys, None)?;

    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for k in lo..=n {
        let scaled = trace.s1[k] * (k as f64).powf(alpha0);
        c1 = c1.min(scaled);
        c2 = c2.max(scaled);
    }
    let fitted_d = budget.c0 * c1 * (1.0 - budget.eps_d) / (2.0 * c2);
    let mut min_d = f64::INFINITY;
    for k in 1..=n {
        min_d = min_d.min(trace.d1[k].min(trace.d2[k]));
    }
    let min_d_ok = min_d >= 0.9 * fitted_d;

    // uncoupled tail: decide between power-law and geometric shape on the
    // tail window, then fit the appropriate model
    let tail_xs: Vec<f64> = grid
        .iter()
        .filter(|&&k| (k as usize) < n && trace.uncoupled_tail[k as usize] > 0.0)
        .map(|&k| k as f64)
        .collect();
    let tail_ys: Vec<f64> = grid
        .iter()
        .filter(|&&k| (k as usize) < n && trace.uncoupled_tail[k as usize] > 0.0)
        .map(|&k| trace.uncoupled_tail[k as usize])
        .collect();
    let (tail_fit, tail_rate, tail_shape) = if tail_xs.len() >= 4 {
        let pw = fit_power_law(&tail_xs, &tail_ys, None)?;
        let ex = fit_exponential(&tail_xs, &tail_ys)?;
        if ex.residual_rms < 0.5 * pw.residual_rms {
            (None, Some(ex.rate), TailShape::Exponential)
        } else {
            (Some(pw), None, TailShape::PowerLaw)
        }
    } else {
        (None, None, TailShape::Exponential)
    };

    let band_condition_ok = budget.eps_d < budget.c0 * c1 * (1.0 - budget.eps_d) / (4.0 * c2);
    let pass = min_d_ok && tail_shape == TailShape::PowerLaw;
    Ok(CouplingReport {
        s_fit,
        c1,
        c2,
        fitted_d,
        min_d,
        min_d_ok,
        tail_fit,
        tail_rate,
        tail_shape,
        band_condition_ok,
        pass,
    })
}
