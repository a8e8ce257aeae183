//! Tracy–Widom GUE distribution function as the Fredholm determinant
//! `det(I - K_Airy)` on `L²(r, ∞)`, discretised by the Nyström method.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::airy::airy_pair;
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `(-1, 1)`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Quadrature settings for [`tracy_widom_gue_cdf`].
///
/// Outside `[left, right]` from [`TwEvaluator::cutoffs`] the tails
/// `F(r) ≈ exp(-|r|³/12)` and `1 - F(r) ≈ exp(-4 r^{3/2} / 3)` are below
/// `tolerance * e^{-20}`, and 0 or 1 is returned without quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwEvaluator {
    pub quadrature_order: usize,
    pub tolerance: f64,
    pub max_order: usize,
}

impl Default for TwEvaluator {
    fn default() -> Self {
        TwEvaluator {
            quadrature_order: 40,
            tolerance: 1e-8,
            max_order: 320,
        }
    }
}

const TAIL_MARGIN: f64 = 20.0;

impl TwEvaluator {
    pub fn new(quadrature_order: usize, tolerance: f64, max_order: usize) -> Result<Self> {
        if quadrature_order == 0 {
            return Err(Error::param("quadrature_order", "must be positive"));
        }
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::param("tolerance", format!("must be positive, got {tolerance}")));
        }
        if max_order < quadrature_order {
            return Err(Error::param("max_order", "must be at least quadrature_order"));
        }
        Ok(TwEvaluator {
            quadrature_order,
            tolerance,
            max_order,
        })
    }

    /// `(left, right)` truncation points of the tails.
    pub fn cutoffs(&self) -> (f64, f64) {
        let l = (1.0 / self.tolerance).ln() + TAIL_MARGIN;
        (-(12.0 * l).cbrt(), (0.75 * l).powf(2.0 / 3.0))
    }

    /// Determinant at one fixed order, clamped to `[0, 1]`.
    pub fn fredholm_det(&self, r: f64, order: usize) -> f64 {
        let (t, w) = gauss_legendre(order);
        let mut x = Vec::with_capacity(order);
        let mut sw = Vec::with_capacity(order);
        for (&t, &w) in t.iter().zip(&w) {
            // x = r + s/(1-s) for s = (t+1)/2 in (0, 1).
            let s = 0.5 * (t + 1.0);
            let inv = 1.0 / (1.0 - s);
            x.push(r + s * inv);
            sw.push((0.5 * w * inv * inv).sqrt());
        }
        let ai: Vec<(f64, f64)> = x.iter().map(|&x| airy_pair(x)).collect();
        let m = DMatrix::from_fn(order, order, |i, j| {
            let (a, ap) = ai[i];
            let k = if (x[i] - x[j]).abs() < 1e-6 {
                ap * ap - x[i] * a * a
            } else {
                let (b, bp) = ai[j];
                (a * bp - ap * b) / (x[i] - x[j])
            };
            let delta = if i == j { 1.0 } else { 0.0 };
            delta - sw[i] * k * sw[j]
        });
        m.determinant().clamp(0.0, 1.0)
    }

    /// `F_GUE(r)`, doubling the order until two successive values agree
    /// within `tolerance`.
    pub fn cdf(&self, r: f64) -> Result<f64> {
        if !r.is_finite() {
            return Err(Error::Domain {
                function: "tracy_widom_gue_cdf",
                x: r,
            });
        }
        let (left, right) = self.cutoffs();
        if r <= left {
            return Ok(0.0);
        }
        if r >= right {
            return Ok(1.0);
        }
        let mut order = self.quadrature_order;
        let mut prev = self.fredholm_det(r, order);
        while order * 2 <= self.max_order {
            order *= 2;
            let next = self.fredholm_det(r, order);
            if (next - prev).abs() < self.tolerance {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Convergence(format!(
            "F_GUE({r}) did not settle to {} by order {}",
            self.tolerance, self.max_order
        )))
    }

    /// Writes `r,F_GUE` rows for each `r` in `grid`.
    pub fn write_table(&self, grid: &[f64], path: &Path) -> Result<()> {
        let mut out = String::from("r,F_GUE\n");
        for &r in grid {
            out.push_str(&format!("{r},{}\n", self.cdf(r)?));
        }
        std::fs::File::create(path)
            .and_then(|mut f| f.write_all(out.as_bytes()))
            .map_err(|e| Error::io(path, e))
    }
}

/// `F_GUE(r)` with the given evaluator.
pub fn tracy_widom_gue_cdf(r: f64, evaluator: &TwEvaluator) -> Result<f64> {
    evaluator.cdf(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::integrate;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 40, 81] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * n).min(30) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn tails() {
        let ev = TwEvaluator::default();
        assert!(ev.cdf(-10.0).unwrap() < 1e-4);
        assert!(ev.cdf(6.0).unwrap() > 1.0 - 1e-6);
        assert!(ev.cdf(f64::NAN).is_err());
    }

    #[test]
    fn known_values() {
        // Published values F_GUE(-2) = 0.41322414..., F_GUE(0) = 0.96937282...
        let ev = TwEvaluator::default();
        assert!((ev.cdf(-2.0).unwrap() - 0.413_224_142).abs() < 1e-8);
        assert!((ev.cdf(0.0).unwrap() - 0.969_372_828).abs() < 1e-8);
    }

    #[test]
    fn monotone_and_stable_under_doubling() {
        let ev = TwEvaluator::default();
        let mut prev = 0.0;
        for k in 0..=100 {
            let r = -6.0 + 0.1 * k as f64;
            let f = ev.cdf(r).unwrap();
            assert!(f >= prev, "decrease at {r}");
            prev = f;
            let (a, b) = (ev.fredholm_det(r, 80), ev.fredholm_det(r, 160));
            assert!((a - b).abs() < 1e-8, "r = {r}");
        }
    }

    #[test]
    fn mean_of_the_distribution() {
        let ev = TwEvaluator::new(80, 1e-10, 320).unwrap();
        let f = |r: f64| ev.cdf(r).unwrap();
        let mean = integrate(|r| 1.0 - f(r), 0.0, 8.0, 400) - integrate(f, -9.0, 0.0, 600);
        assert!((mean + 1.771_086_8).abs() < 1e-6, "mean = {mean}");
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        let ev = TwEvaluator::new(4, 1e-15, 8).unwrap();
        assert!(matches!(ev.cdf(-3.0), Err(Error::Convergence(_))));
    }

    #[test]
    fn table_export() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tw.csv");
        TwEvaluator::default().write_table(&[-2.0, 0.0], &path).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.starts_with("r,F_GUE\n-2,0.41322"));
        assert_eq!(text.lines().count(), 3);
    }
}
