use serde::{Deserialize, Serialize};

use super::SampleSet;
use crate::error::{Error, Result};

const SERIES_EPS: f64 = 1e-12;
const MAX_TERMS: usize = 100_000;

/// Survival function `Q(x) = 1 - K(x) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2 k² x²)` of
/// the Kolmogorov distribution.
///
/// The alternating series is summed until a term drops below `1e-12`. For
/// small `x`, where it converges slowly and cancels badly, the Jacobi theta
/// form of `K` is used instead.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.0 {
        return 1.0 - kolmogorov_cdf_theta(x);
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * x * x).exp();
        sum += sign * term;
        if term < SERIES_EPS {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `K(x) = √(2π)/x Σ_{k≥1} exp(-(2k-1)² π² / (8x²))`.
fn kolmogorov_cdf_theta(x: f64) -> f64 {
    use std::f64::consts::PI;
    let c = PI * PI / (8.0 * x * x);
    let mut sum = 0.0;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let term = (-odd * odd * c).exp();
        sum += term;
        if term < SERIES_EPS * sum.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    ((2.0 * PI).sqrt() / x * sum).clamp(0.0, 1.0)
}

/// Kolmogorov distribution CDF `K(x)`.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < 1.0 {
        kolmogorov_cdf_theta(x)
    } else {
        1.0 - kolmogorov_sf(x)
    }
}

/// `c(α)` with `Q(c) = α`, found by bisection.
pub fn kolmogorov_critical_value(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    let (mut lo, mut hi) = (0.05, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_sf(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Two-sample critical distance `c(α) √((n1 + n2) / (n1 n2))`.
pub fn ks_critical_distance(alpha: f64, n1: usize, n2: usize) -> Result<f64> {
    let c = kolmogorov_critical_value(alpha)?;
    let (a, b) = (n1 as f64, n2 as f64);
    Ok(c * ((a + b) / (a * b)).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub alpha: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n1: usize,
    pub n2: Option<usize>,
    pub decision: Option<Decision>,
}

impl KsResult {
    /// Records the decision at significance `alpha` (reject when `p < alpha`).
    pub fn at_level(mut self, alpha: f64) -> Self {
        self.decision = Some(Decision {
            alpha,
            reject: self.p_value < alpha,
        });
        self
    }

    pub fn effective_size(&self) -> f64 {
        match self.n2 {
            None => self.n1 as f64,
            Some(n2) => {
                let (a, b) = (self.n1 as f64, n2 as f64);
                a * b / (a + b)
            }
        }
    }
}

/// One-sample KS test of `set` against a continuous CDF.
pub fn ks_one_sample(set: &SampleSet, cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let sorted = set.sorted();
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev_f = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::Input(format!("cdf({x}) = {f} lies outside [0, 1]")));
        }
        if f < prev_f {
            return Err(Error::Input(format!("cdf decreases at {x}: {prev_f} -> {f}")));
        }
        prev_f = f;
        let upper = (i + 1) as f64 / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper.abs()).max(lower.abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf(n.sqrt() * d),
        n1: sorted.len(),
        n2: None,
        decision: None,
    })
}

/// Two-sample KS test; the statistic is evaluated at every pooled sample point.
pub fn ks_two_sample(a: &SampleSet, b: &SampleSet) -> KsResult {
    let (xs, ys) = (a.sorted(), b.sorted());
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n1 - j as f64 / n2).abs());
    }
    let en = n1 * n2 / (n1 + n2);
    KsResult {
        statistic: d,
        p_value: kolmogorov_sf(en.sqrt() * d),
        n1: xs.len(),
        n2: Some(ys.len()),
        decision: None,
    }
}
