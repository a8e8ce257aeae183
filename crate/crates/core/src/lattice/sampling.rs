use rayon::prelude::*;

use super::{check_dims, model_corner, Model, WeightField};
use crate::error::{Error, Result};
use crate::rng::{Stream, StreamKey};
use crate::stats::{Provenance, SampleSet};

const ONE_STEP_LPP_TAG: u8 = 8;
const ONE_STEP_POLYMER_TAG: u8 = 9;

/// `count` i.i.d. realizations of `value(m, n)`; sample `k` uses lane `k`.
///
/// Results are collected in lane order, so the set is identical for any
/// number of worker threads.
pub fn sample_statistic(model: &Model, m: usize, n: usize, master_seed: u64, count: usize) -> Result<SampleSet> {
    sample_statistic_with(model, m, n, master_seed, count, |v| v)
}

/// As [`sample_statistic`], with `map` applied to each corner value.
pub fn sample_statistic_with(
    model: &Model,
    m: usize,
    n: usize,
    master_seed: u64,
    count: usize,
    map: impl Fn(f64) -> f64 + Sync,
) -> Result<SampleSet> {
    check_dims(m, n)?;
    if count == 0 {
        return Err(Error::param("count", "need at least one sample"));
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|lane| {
            let field = WeightField::Sampled(StreamKey::new(master_seed, lane));
            model_corner(model, m, n, &field).map(&map)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut prov = Provenance::new(model.tag(), master_seed)
        .with("m", m)
        .with("n", n);
    prov.params.extend(model.params());
    SampleSet::new(values, prov)
}

/// Exponentiated one-step updates of the two models from predecessors
/// `z1, z2`: the first set holds `max(z1/E1, z2/E2)` (Gumbel LPP), the second
/// `(z1 + z2)/E3` (polymer at shape 1). Reciprocals of both are Exp(z1 + z2).
pub fn one_step_laws(z1: f64, z2: f64, count: usize, master_seed: u64) -> Result<(SampleSet, SampleSet)> {
    for (name, z) in [("z1", z1), ("z2", z2)] {
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::param(name, format!("must be positive, got {z}")));
        }
    }
    if count == 0 {
        return Err(Error::param("count", "need at least one sample"));
    }
    let pairs: Vec<(f64, f64)> = (0..count as u64)
        .into_par_iter()
        .map(|lane| {
            let key = StreamKey::new(master_seed, lane);
            let mut s = Stream::new(key.site(0, 0, ONE_STEP_LPP_TAG));
            let (e1, e2) = (s.exponential(), s.exponential());
            let lpp = (z1 / e1).max(z2 / e2);
            let e3 = Stream::new(key.site(0, 0, ONE_STEP_POLYMER_TAG)).exponential();
            (lpp, (z1 + z2) / e3)
        })
        .collect();
    let prov = |model: &str| {
        Provenance::new(model, master_seed)
            .with("z1", z1)
            .with("z2", z2)
    };
    let (lpp, poly): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok((
        SampleSet::new(lpp, prov("one_step_lpp"))?,
        SampleSet::new(poly, prov("one_step_polymer"))?,
    ))
}
