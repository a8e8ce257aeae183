//! Digamma and trigamma-derivative on the positive axis.

use crate::error::{Error, Result};

pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// `Ψ(x) = Γ'(x) / Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain { function: "digamma", x });
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let r = 1.0 / (y * y);
    // Bernoulli terms B_{2k} / (2k y^{2k}), k = 1..7.
    let series = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0 - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    Ok(acc + y.ln() - 0.5 / y - series)
}

/// `Ψ''(x) = -2 Σ_{k≥0} (x + k)^{-3}` for `x > 0`.
pub fn polygamma2(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::Domain { function: "polygamma2", x });
    }
    let mut head = 0.0;
    let mut y = x;
    while y < 20.0 {
        head += 1.0 / (y * y * y);
        y += 1.0;
    }
    // Euler–Maclaurin remainder of Σ_{k≥0} (y + k)^{-3}.
    let r = 1.0 / y;
    let r2 = r * r;
    let tail = r2 * (0.5 + r * (0.5 + r * (0.25 + r2 * (-1.0 / 12.0 + r2 * (1.0 / 12.0 - r2 * 0.15)))));
    Ok(-2.0 * (head + tail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::EULER_GAMMA;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    // Plain partial sums with an integral tail, no asymptotic series.
    fn polygamma2_oracle(x: f64) -> f64 {
        let k_max = 2_000_000;
        let mut s = 0.0;
        for k in (0..k_max).rev() {
            let t = x + k as f64;
            s += 1.0 / (t * t * t);
        }
        let t = x + k_max as f64 - 0.5;
        -2.0 * (s + 0.5 / (t * t))
    }

    #[test]
    fn digamma_classical_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-14);
        let half = digamma(0.5).unwrap();
        assert!((half - (-EULER_GAMMA - 2.0 * LN_2)).abs() < 1e-14);
        assert!((half + 1.963_510_026_0).abs() < 1e-10);
        // Ψ(n) = H_{n-1} - γ.
        let mut h = 0.0;
        for n in 1..60 {
            let got = digamma(n as f64).unwrap();
            assert!((got - (h - EULER_GAMMA)).abs() < 1e-13, "n = {n}");
            h += 1.0 / n as f64;
        }
    }

    #[test]
    fn polygamma2_matches_partial_sums() {
        for &x in &[0.1, 0.5, 1.0, 2.3, 7.0, 19.5, 40.0, 100.0] {
            let (a, b) = (polygamma2(x).unwrap(), polygamma2_oracle(x));
            assert!((a - b).abs() < 1e-12, "x = {x}: {a} vs {b}");
        }
        let half = polygamma2(0.5).unwrap();
        assert!((half + 14.0 * ZETA_3).abs() < 1e-12);
        assert!((half + 16.828_796_6).abs() < 1e-7);
    }

    #[test]
    fn nonpositive_arguments_are_rejected() {
        for x in [0.0, -1.5, f64::NAN] {
            assert!(matches!(digamma(x), Err(Error::Domain { .. })));
            assert!(matches!(polygamma2(x), Err(Error::Domain { .. })));
        }
    }

    proptest! {
        #[test]
        fn digamma_recurrence(x in 0.1f64..100.0) {
            let lhs = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            prop_assert!((lhs - 1.0 / x).abs() < 1e-12);
        }

        #[test]
        fn digamma_duplication(x in 0.1f64..50.0) {
            let lhs = digamma(2.0 * x).unwrap();
            let rhs = 0.5 * digamma(x).unwrap() + 0.5 * digamma(x + 0.5).unwrap() + LN_2;
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn polygamma2_recurrence(x in 0.1f64..100.0) {
            let lhs = polygamma2(x + 1.0).unwrap() - polygamma2(x).unwrap();
            prop_assert!((lhs - 2.0 / (x * x * x)).abs() < 1e-12 * (1.0 + 2.0 / (x * x * x)));
        }
    }
}
