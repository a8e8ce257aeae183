//! The Airy function `Ai` and its derivative.
//!
//! A Maclaurin series is used on `[NEG_SWITCH, POS_SWITCH]` and the
//! asymptotic expansions outside. The switch points sit where both methods
//! agree to about `1e-12`; closer to the origin the asymptotic series is too
//! short, and further out the Maclaurin series loses digits to cancellation.

use std::f64::consts::{FRAC_PI_4, PI};

pub(crate) const POS_SWITCH: f64 = 5.5;
pub(crate) const NEG_SWITCH: f64 = -7.25;
/// Beyond this `Ai` and `Ai'` are below `1e-100` and returned as zero.
pub const SATURATION: f64 = 50.0;

/// `Ai(0)` and `-Ai'(0)`.
const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = 0.258_819_403_792_806_8;

const MAX_TERMS: usize = 40;

pub fn airy_ai(x: f64) -> f64 {
    airy_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_pair(x).1
}

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        (f64::NAN, f64::NAN)
    } else if x > SATURATION {
        (0.0, 0.0)
    } else if x > POS_SWITCH {
        asymptotic_positive(x)
    } else if x < NEG_SWITCH {
        asymptotic_negative(x)
    } else {
        maclaurin(x)
    }
}

pub(crate) fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut fs, mut gs) = (f, g);
    let (mut fp, mut gp) = (0.5 * x * x, 1.0);
    let (mut fps, mut gps) = (fp, gp);
    for k in 0..200 {
        let k3 = 3.0 * k as f64;
        f *= x3 / ((k3 + 2.0) * (k3 + 3.0));
        g *= x3 / ((k3 + 3.0) * (k3 + 4.0));
        fp *= x3 / ((k3 + 3.0) * (k3 + 5.0));
        gp *= x3 / ((k3 + 1.0) * (k3 + 3.0));
        fs += f;
        gs += g;
        fps += fp;
        gps += gp;
        let small = |t: f64, s: f64| t.abs() <= 1e-18 * s.abs();
        if small(f, fs) && small(g, gs) && small(fp, fps) && small(gp, gps) {
            break;
        }
    }
    (AI0 * fs - AIP0 * gs, AI0 * fps - AIP0 * gps)
}

/// Coefficients `u_k` and `v_k` of the asymptotic expansions.
fn coefficients() -> &'static ([f64; MAX_TERMS], [f64; MAX_TERMS]) {
    static C: std::sync::OnceLock<([f64; MAX_TERMS], [f64; MAX_TERMS])> = std::sync::OnceLock::new();
    C.get_or_init(|| {
        let mut u = [1.0; MAX_TERMS];
        let mut v = [1.0; MAX_TERMS];
        for k in 1..MAX_TERMS {
            let kf = k as f64;
            u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            v[k] = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k];
        }
        (u, v)
    })
}

pub(crate) fn asymptotic_positive(x: f64) -> (f64, f64) {
    let (u, v) = coefficients();
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (mut s, mut sv) = (0.0, 0.0);
    let mut p = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let t = u[k] * p;
        // Stop before the divergent tail of the series.
        if t > last {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * t;
        sv += sign * v[k] * p;
        if t < 1e-17 {
            break;
        }
        last = t;
        p /= zeta;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.sqrt().sqrt();
    (e * s / q, -e * q * sv)
}

pub(crate) fn asymptotic_negative(x: f64) -> (f64, f64) {
    let (u, v) = coefficients();
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (mut even, mut odd, mut even_v, mut odd_v) = (0.0, 0.0, 0.0, 0.0);
    let mut p = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let t = u[k] * p;
        if t > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            even += sign * t;
            even_v += sign * v[k] * p;
        } else {
            odd += sign * t;
            odd_v += sign * v[k] * p;
        }
        if t < 1e-17 {
            break;
        }
        last = t;
        p /= zeta;
    }
    let (sin, cos) = (zeta - FRAC_PI_4).sin_cos();
    let q = z.sqrt().sqrt();
    let ai = (cos * even + sin * odd) / (PI.sqrt() * q);
    let aip = q / PI.sqrt() * (sin * even_v - cos * odd_v);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit evaluation, rounded to 12 digits.
    const REFERENCE: &[(f64, f64, f64)] = &[
        (-12.0, -0.066_555_175_054_4, 1.023_110_453_37),
        (-7.0, 0.184_280_835_251, -0.771_008_168_41),
        (-2.5, -0.112_325_067_693, 0.678_852_734_265),
        (0.0, 0.355_028_053_888, -0.258_819_403_793),
        (1.0, 0.135_292_416_313, -0.159_147_441_297),
        (3.0, 0.006_591_139_357_46, -0.011_912_976_706),
        (6.0, 9.947_694_360_25e-6, -2.476_520_039_7e-5),
    ];

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300) || (a - b).abs() < 1e-12
    }

    #[test]
    fn reference_values() {
        for &(x, ai, aip) in REFERENCE {
            let (a, ap) = airy_pair(x);
            assert!(close(a, ai, 1e-9), "Ai({x}) = {a}, want {ai}");
            assert!(close(ap, aip, 1e-9), "Ai'({x}) = {ap}, want {aip}");
        }
    }

    #[test]
    fn origin_matches_gamma_closed_form() {
        // 3^{-2/3} / Γ(2/3) with Γ(2/3) = 1.3541179394264004169...
        let closed = 3f64.powf(-2.0 / 3.0) / 1.354_117_939_426_400_4;
        assert!((airy_ai(0.0) - closed).abs() < 1e-15);
        assert!((airy_ai(0.0) - 0.355_028_053_9).abs() < 1e-10);
    }

    #[test]
    fn decays_on_the_right() {
        let a = airy_ai(10.0);
        assert!(a > 0.0 && a < 1e-9);
        let zeta = 2.0 / 3.0 * 10f64.powf(1.5);
        assert!(a < (-zeta).exp());
        assert_eq!(airy_pair(60.0), (0.0, 0.0));
    }

    #[test]
    fn methods_agree_at_the_switch_points() {
        let (s, a) = (maclaurin(4.5), asymptotic_positive(4.5));
        assert!((s.0 - a.0).abs() < 1e-10);
        for x in [POS_SWITCH, POS_SWITCH + 0.25] {
            let (s, a) = (maclaurin(x), asymptotic_positive(x));
            assert!((s.0 - a.0).abs() < 1e-12, "Ai at {x}");
            assert!((s.1 - a.1).abs() < 5e-12, "Ai' at {x}");
        }
        for x in [NEG_SWITCH, NEG_SWITCH + 0.25] {
            let (s, a) = (maclaurin(x), asymptotic_negative(x));
            assert!((s.0 - a.0).abs() < 5e-12, "Ai at {x}");
            assert!((s.1 - a.1).abs() < 1e-11, "Ai' at {x}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // Ai solves y'' = x y; check with centred differences of Ai'.
        for &x in &[-9.0, -7.3, -3.0, 0.7, 4.0, 5.6, 8.0] {
            let h = 1e-4;
            let d2 = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2.0 * h);
            assert!((d2 - x * airy_ai(x)).abs() < 1e-7, "x = {x}");
        }
    }
}
