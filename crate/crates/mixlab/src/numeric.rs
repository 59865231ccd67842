//! Small numeric helpers shared across the estimators.

/// Neumaier compensated summation. Used for the O(N^2) series convolutions,
/// where plain accumulation would eat several digits of the 1e-12 identity
/// budgets.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_total(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sample Kolmogorov-Smirnov distance between `sorted` draws and the
/// standard normal distribution.
pub fn ks_distance_to_normal(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "KS distance of an empty sample");
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = normal_cdf(x);
        d = d.max((cdf - i as f64 / nf).abs());
        d = d.max(((i + 1) as f64 / nf - cdf).abs());
    }
    d
}

/// Two-sample Kolmogorov-Smirnov distance (both inputs sorted).
pub fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let (mut i, mut j) = (0usize, 0usize);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Sample mean and (unbiased) standard deviation.
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = compensated_total(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_total(xs.iter().map(|&x| (x - mean) * (x - mean)));
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Geometrically spaced integer grid from `lo` to `hi` inclusive, roughly
/// `per_octave` points per doubling, deduplicated.
pub fn geometric_grid(lo: u64, hi: u64, per_octave: u32) -> Vec<u64> {
    assert!(lo >= 1 && hi >= lo && per_octave >= 1);
    let ratio = 2f64.powf(1.0 / per_octave as f64);
    let mut out = Vec::new();
    let mut x = lo as f64;
    while x <= hi as f64 + 0.5 {
        let v = x.round() as u64;
        if out.last() != Some(&v) {
            out.push(v);
        }
        x *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

/// Hybrid exact/Euler-Maclaurin evaluation of `sum_{k=a}^{b} k^-gamma`.
///
/// Terms below the crossover are summed directly; the remainder uses the
/// Euler-Maclaurin expansion to second order, which is accurate to well
/// below 1e-12 relative once the lower limit exceeds ~40.
pub fn power_sum(gamma: f64, a: u64, b: u64) -> f64 {
    if a > b {
        return 0.0;
    }
    const CROSSOVER: u64 = 64;
    let em_start = if a > CROSSOVER { a } else { CROSSOVER + 1 };
    let mut acc = CompensatedSum::new();
    for k in a..=b.min(em_start - 1) {
        acc.add((k as f64).powf(-gamma));
    }
    if em_start > b {
        return acc.total();
    }
    // Euler-Maclaurin over [em_start, b]
    let (lo, hi) = (em_start as f64, b as f64);
    let integral = if (gamma - 1.0).abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(1.0 - gamma) - lo.powf(1.0 - gamma)) / (1.0 - gamma)
    };
    let boundary = 0.5 * (lo.powf(-gamma) + hi.powf(-gamma));
    let deriv = gamma / 12.0 * (lo.powf(-gamma - 1.0) - hi.powf(-gamma - 1.0));
    acc.add(integral + boundary + deriv);
    acc.total()
}

/// Same scheme for `sum_{k=a}^{b} ln(k) * k^-gamma`.
pub fn log_power_sum(gamma: f64, a: u64, b: u64) -> f64 {
    if a > b {
        return 0.0;
    }
    const CROSSOVER: u64 = 64;
    let em_start = if a > CROSSOVER { a } else { CROSSOVER + 1 };
    let mut acc = CompensatedSum::new();
    for k in a..=b.min(em_start - 1) {
        let kf = k as f64;
        acc.add(kf.ln() * kf.powf(-gamma));
    }
    if em_start > b {
        return acc.total();
    }
    let (lo, hi) = (em_start as f64, b as f64);
    let antideriv = |u: f64| -> f64 {
        if (gamma - 1.0).abs() < 1e-12 {
            0.5 * u.ln() * u.ln()
        } else {
            let p = 1.0 - gamma;
            u.powf(p) * (p * u.ln() - 1.0) / (p * p)
        }
    };
    let f = |u: f64| u.ln() * u.powf(-gamma);
    let fp = |u: f64| u.powf(-gamma - 1.0) * (1.0 - gamma * u.ln());
    let integral = antideriv(hi) - antideriv(lo);
    let boundary = 0.5 * (f(lo) + f(hi));
    let deriv = (fp(hi) - fp(lo)) / 12.0;
    acc.add(integral + boundary - deriv);
    acc.total()
}
