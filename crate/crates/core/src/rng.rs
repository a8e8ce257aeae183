//! Seeded, splittable random streams and the four weight laws used by the
//! lattice models: Exp(1), standard Gumbel, Gamma(γ, 1) and inverse gamma.
//!
//! Streams are addressed by a `(master_seed, lane)` pair. The lane is hashed
//! into a seed, so stream `i` never requires generating streams `0..i`, and
//! two streams can be consumed concurrently from different workers.

use rand::Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stafford's "mix13" finalizer (the SplitMix64 output function). Bijective on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const MASTER_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
const LANE_SALT: u64 = 0xd1b5_4a32_d192_ed03;

/// Address of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamKey {
    pub master_seed: u64,
    pub lane: u64,
}

impl StreamKey {
    pub const fn new(master_seed: u64, lane: u64) -> Self {
        StreamKey { master_seed, lane }
    }

    /// Key of a sub-stream attached to lattice site `(i, j)` with a role tag.
    ///
    /// For a fixed parent key the map `(i, j, tag) -> lane` is injective for
    /// `i, j < 2^28`, so two weights of the same sample never share a stream.
    #[inline]
    pub fn site(self, i: usize, j: usize, tag: u8) -> StreamKey {
        debug_assert!(i < (1 << 28) && j < (1 << 28));
        let packed = (i as u64) | ((j as u64) << 28) | ((tag as u64) << 56);
        StreamKey {
            master_seed: self.master_seed,
            lane: mix64(self.lane ^ mix64(packed.wrapping_add(LANE_SALT))),
        }
    }

    /// 64-bit seed of the stream. Injective in `lane` for a fixed master seed.
    #[inline]
    fn seed(self) -> u64 {
        let m = mix64(self.master_seed ^ MASTER_SALT);
        mix64(m ^ mix64(self.lane.wrapping_add(LANE_SALT)))
    }
}

/// Builds the stream for `(master_seed, lane)`. Pure; safe to call from any thread.
pub fn derive_stream(master_seed: u64, lane: u64) -> Stream {
    Stream::new(StreamKey::new(master_seed, lane))
}

/// Single-consumer random stream.
#[derive(Debug, Clone)]
pub struct Stream {
    rng: Xoshiro256PlusPlus,
}

const INV_2_POW_52: f64 = 1.0 / (1u64 << 52) as f64;

impl Stream {
    #[inline]
    pub fn new(key: StreamKey) -> Self {
        Stream {
            rng: Xoshiro256PlusPlus::seed_from_u64(key.seed()),
        }
    }

    /// Uniform draw on the open interval (0, 1): the 52-bit lattice shifted by
    /// half a step, so the extremes are `2^-53` and `1 - 2^-53`.
    #[inline]
    pub fn open_uniform(&mut self) -> f64 {
        uniform_from_bits(self.rng.next_u64())
    }

    #[inline]
    pub fn exponential(&mut self) -> f64 {
        exponential_from_uniform(self.open_uniform())
    }

    /// Standard Gumbel, computed as `-ln` of the exponential draw it consumes.
    #[inline]
    pub fn gumbel(&mut self) -> f64 {
        -self.exponential().ln()
    }

    pub fn gamma(&mut self, shape: f64) -> Result<f64> {
        Ok(self.gamma_with(GammaShape::new(shape)?))
    }

    pub fn inverse_gamma(&mut self, shape: f64) -> Result<f64> {
        Ok(1.0 / self.gamma_with(GammaShape::new(shape)?))
    }

    /// Gamma(shape, 1). Shape 1 is exactly the exponential sampler; shape > 1
    /// uses the Marsaglia–Tsang squeeze/rejection method and shape < 1 the
    /// boost `G(shape + 1) * U^(1/shape)`.
    pub fn gamma_with(&mut self, shape: GammaShape) -> f64 {
        let a = shape.get();
        if a == 1.0 {
            return self.exponential();
        }
        if a < 1.0 {
            let boosted = self.marsaglia_tsang(a + 1.0);
            return boosted * self.open_uniform().powf(1.0 / a);
        }
        self.marsaglia_tsang(a)
    }

    /// `ln(1 / G)` for `G ~ Gamma(shape)`, i.e. the log of an inverse-gamma draw.
    /// At shape 1 this is bit-identical to [`Stream::gumbel`].
    #[inline]
    pub fn log_inverse_gamma(&mut self, shape: GammaShape) -> f64 {
        -self.gamma_with(shape).ln()
    }

    fn marsaglia_tsang(&mut self, a: f64) -> f64 {
        debug_assert!(a >= 1.0);
        let d = a - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x: f64 = self.rng.sample(StandardNormal);
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.open_uniform();
            let x2 = x * x;
            // squeeze
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}

impl RngCore for Stream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

#[inline]
pub fn uniform_from_bits(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * INV_2_POW_52
}

/// Inverse-transform map from an open uniform to Exp(1).
#[inline]
pub fn exponential_from_uniform(u: f64) -> f64 {
    -u.ln()
}

/// Validated gamma shape parameter (strictly positive and finite).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GammaShape(f64);

impl GammaShape {
    pub const ONE: GammaShape = GammaShape(1.0);

    pub fn new(shape: f64) -> Result<Self> {
        if shape.is_finite() && shape > 0.0 {
            Ok(GammaShape(shape))
        } else {
            Err(Error::param("gamma", format!("shape must be positive and finite, got {shape}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for GammaShape {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        GammaShape::new(v)
    }
}

impl From<GammaShape> for f64 {
    fn from(s: GammaShape) -> f64 {
        s.0
    }
}

/// The weight laws used by the models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "shape", rename_all = "snake_case")]
pub enum DistributionSpec {
    Exponential,
    Gumbel,
    Gamma(GammaShape),
    InverseGamma(GammaShape),
}

impl DistributionSpec {
    #[inline]
    pub fn sample(&self, stream: &mut Stream) -> f64 {
        match *self {
            DistributionSpec::Exponential => stream.exponential(),
            DistributionSpec::Gumbel => stream.gumbel(),
            DistributionSpec::Gamma(s) => stream.gamma_with(s),
            DistributionSpec::InverseGamma(s) => 1.0 / stream.gamma_with(s),
        }
    }

    /// Maximum of `copies` i.i.d. draws from one stream.
    ///
    /// Exponential and Gumbel draws are monotone images of a single uniform,
    /// so only the extreme uniform is transformed; the result equals the max
    /// of the individually transformed draws.
    pub fn sample_max(&self, stream: &mut Stream, copies: usize) -> f64 {
        assert!(copies >= 1, "need at least one copy");
        match *self {
            DistributionSpec::Exponential => {
                let mut lo = f64::INFINITY;
                for _ in 0..copies {
                    lo = lo.min(stream.open_uniform());
                }
                exponential_from_uniform(lo)
            }
            DistributionSpec::Gumbel => {
                let mut hi = 0.0f64;
                for _ in 0..copies {
                    hi = hi.max(stream.open_uniform());
                }
                -exponential_from_uniform(hi).ln()
            }
            _ => (0..copies)
                .map(|_| self.sample(stream))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn name(&self) -> String {
        match self {
            DistributionSpec::Exponential => "exponential".into(),
            DistributionSpec::Gumbel => "gumbel".into(),
            DistributionSpec::Gamma(s) => format!("gamma({})", s.get()),
            DistributionSpec::InverseGamma(s) => format!("inverse_gamma({})", s.get()),
        }
    }
}

/// Standard Gumbel CDF `exp(-exp(-y))`.
pub fn gumbel_cdf(y: f64) -> f64 {
    (-(-y).exp()).exp()
}

/// CDF of Exp(rate).
pub fn exponential_cdf(x: f64, rate: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-rate * x).exp_m1()
    }
}

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
