//! Centering and scaling constants for the Gumbel LPP corner value, the
//! Tracy–Widom GUE distribution function, and extreme-value normalizers of
//! the multi-edge weights.

mod airy;
mod special;
mod tracy_widom;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, SATURATION as AIRY_SATURATION};
pub use special::{digamma, polygamma2, ZETA_3};
pub use tracy_widom::{gauss_legendre, tracy_widom_gue_cdf, TwEvaluator};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{DistributionSpec, EULER_GAMMA};

/// `T(n, n) ≈ C n + σ n^{1/3} χ` with `χ ~ F_GUE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Corollary1Constants {
    /// `-2 Ψ(1/2) = 2γ + 4 ln 2`.
    pub c: f64,
    /// `(-Ψ''(1/2))^{1/3} = (14 ζ(3))^{1/3}`.
    pub sigma: f64,
}

pub fn corollary1_constants() -> Corollary1Constants {
    Corollary1Constants {
        c: 2.0 * EULER_GAMMA + 4.0 * std::f64::consts::LN_2,
        sigma: (14.0 * ZETA_3).cbrt(),
    }
}

impl Corollary1Constants {
    /// `(t - C n) / (σ n^{1/3})`.
    pub fn scale(&self, t: f64, n: usize) -> f64 {
        let n = n as f64;
        (t - self.c * n) / (self.sigma * n.cbrt())
    }
}

/// `(max of N i.i.d. draws from D - c_n) / sigma_n` converges to a Gumbel law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GumbelNormalizers {
    pub c_n: f64,
    pub sigma_n: f64,
    pub law: DistributionSpec,
    pub copies: usize,
}

pub fn gumbel_normalizers(law: DistributionSpec, copies: usize) -> Result<GumbelNormalizers> {
    if copies == 0 {
        return Err(Error::param("N", "must be at least 1"));
    }
    match law {
        DistributionSpec::Exponential => Ok(GumbelNormalizers {
            c_n: (copies as f64).ln(),
            sigma_n: 1.0,
            law,
            copies,
        }),
        other => Err(Error::Unsupported(format!(
            "no Gumbel-domain-of-attraction normalizers tabulated for {}; only the exponential law is implemented",
            other.name()
        ))),
    }
}
