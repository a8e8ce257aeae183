//! Markovian corner growth with `N`-stage counters on the origin and on
//! every lattice edge.
//!
//! Each counter climbs from 0 to N one unit at a time once its driving
//! condition holds: the origin counter from time 0, an edge counter from the
//! moment its tail vertex is completed. A vertex is completed when both of
//! its incoming edge counters read N (edges entering the first row or column
//! from outside the quadrant are fixed at N).
//!
//! Holding times are sampled directly, so the simulation is causal-recursive:
//! the completion time of an edge is the completion time of its tail plus the
//! sum of its N holding times. No event queue or time discretization is used.
//!
//! Two rate conventions are available. With [`RateConvention::RateNMinusI`]
//! the `i -> i+1` step has rate `N - i` and the full 0 -> N delay has the law
//! of the maximum of N i.i.d. Exp(1) clocks, which makes the completion times
//! equal in law to exponential N multi-edge passage times.
//! [`RateConvention::RateInverseNMinusI`] uses rate `1 / (N - i)` instead;
//! the two agree only for `N = 1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{GridSemantics, PassageGrid};
use crate::lattice::recursion::{eval_corner, eval_grid, EdgeWeights, LppCell};
use crate::rng::{Stream, StreamKey};
use crate::stats::{Provenance, SampleSet};

const ORIGIN_TAG: u8 = 10;
const HORIZONTAL_TAG: u8 = 11;
const VERTICAL_TAG: u8 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateConvention {
    /// `i -> i+1` at rate `N - i`.
    #[default]
    #[serde(rename = "rate_N_minus_i")]
    RateNMinusI,
    /// `i -> i+1` at rate `1 / (N - i)`.
    #[serde(rename = "rate_inverse_N_minus_i")]
    RateInverseNMinusI,
}

impl RateConvention {
    pub fn rate(self, i: usize, n: usize) -> f64 {
        let gap = (n - i) as f64;
        match self {
            RateConvention::RateNMinusI => gap,
            RateConvention::RateInverseNMinusI => 1.0 / gap,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RateConvention::RateNMinusI => "rate_N_minus_i",
            RateConvention::RateInverseNMinusI => "rate_inverse_N_minus_i",
        }
    }
}

impl std::str::FromStr for RateConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate_N_minus_i" => Ok(RateConvention::RateNMinusI),
            "rate_inverse_N_minus_i" => Ok(RateConvention::RateInverseNMinusI),
            other => Err(Error::Input(format!("unknown rate convention `{other}`"))),
        }
    }
}

/// Holding time of the `i -> i+1` step of a counter with ceiling `n`.
pub fn increment_time_sampler(i: usize, n: usize, convention: RateConvention, stream: &mut Stream) -> Result<f64> {
    if i >= n {
        return Err(Error::State(format!("counter at {i} cannot increase past N = {n}")));
    }
    Ok(holding_time(i, n, convention, stream))
}

#[inline]
fn holding_time(i: usize, n: usize, convention: RateConvention, stream: &mut Stream) -> f64 {
    let e = stream.exponential();
    match convention {
        RateConvention::RateNMinusI => e / (n - i) as f64,
        RateConvention::RateInverseNMinusI => e * (n - i) as f64,
    }
}

fn check(m_max: usize, n_max: usize, ceiling: usize) -> Result<()> {
    if m_max == 0 || n_max == 0 {
        return Err(Error::param("m,n", "growth rectangle must be at least 1x1"));
    }
    if ceiling == 0 {
        return Err(Error::param("N", "counter ceiling must be at least 1"));
    }
    Ok(())
}

/// Delay of each counter from the moment it starts to the moment it reads N.
struct CounterDelays {
    key: StreamKey,
    ceiling: usize,
    convention: RateConvention,
}

impl CounterDelays {
    /// Offsets of the N increments from the counter's start time; the last
    /// entry is the total delay.
    fn offsets(&self, i: usize, j: usize, tag: u8, out: &mut Vec<f64>) {
        let mut s = Stream::new(self.key.site(i, j, tag));
        let mut acc = 0.0;
        out.clear();
        for step in 0..self.ceiling {
            acc += holding_time(step, self.ceiling, self.convention, &mut s);
            out.push(acc);
        }
    }

    #[inline]
    fn delay(&self, i: usize, j: usize, tag: u8) -> f64 {
        let mut s = Stream::new(self.key.site(i, j, tag));
        let mut acc = 0.0;
        for step in 0..self.ceiling {
            acc += holding_time(step, self.ceiling, self.convention, &mut s);
        }
        acc
    }
}

impl EdgeWeights for CounterDelays {
    #[inline]
    fn origin(&self) -> Result<f64> {
        Ok(self.delay(1, 1, ORIGIN_TAG))
    }
    #[inline]
    fn horizontal(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.delay(i, j, HORIZONTAL_TAG))
    }
    #[inline]
    fn vertical(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.delay(i, j, VERTICAL_TAG))
    }
}

/// Counter configuration at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthState {
    pub ceiling: usize,
    pub time: f64,
    pub origin: usize,
    m: usize,
    n: usize,
    horizontal: Vec<usize>,
    vertical: Vec<usize>,
    completed: Vec<bool>,
}

impl GrowthState {
    fn idx(&self, i: usize, j: usize) -> usize {
        assert!((1..=self.m).contains(&i) && (1..=self.n).contains(&j));
        (i - 1) * self.n + (j - 1)
    }

    /// `B(i, j)`: counter on the edge from `(i-1, j)`; `N` on the first column.
    pub fn horizontal(&self, i: usize, j: usize) -> usize {
        self.horizontal[self.idx(i, j)]
    }

    /// `C(i, j)`: counter on the edge from `(i, j-1)`; `N` on the first row.
    pub fn vertical(&self, i: usize, j: usize) -> usize {
        self.vertical[self.idx(i, j)]
    }

    pub fn completed(&self, i: usize, j: usize) -> bool {
        self.completed[self.idx(i, j)]
    }
}

/// One simulated trajectory on an `m x n` rectangle with every increment time kept.
#[derive(Debug, Clone)]
pub struct GrowthRun {
    pub ceiling: usize,
    pub convention: RateConvention,
    first_passage: PassageGrid,
    origin_times: Vec<f64>,
    horizontal_times: Vec<Vec<f64>>,
    vertical_times: Vec<Vec<f64>>,
}

impl GrowthRun {
    /// `τ(i, j)`, the time vertex `(i, j)` is completed.
    pub fn first_passage(&self) -> &PassageGrid {
        &self.first_passage
    }

    /// Absolute times of the N increments of `B(i, j)` (`i >= 2`).
    pub fn horizontal_increments(&self, i: usize, j: usize) -> &[f64] {
        let (_, n) = self.first_passage.dims();
        &self.horizontal_times[(i - 1) * n + (j - 1)]
    }

    /// Absolute times of the N increments of `C(i, j)` (`j >= 2`).
    pub fn vertical_increments(&self, i: usize, j: usize) -> &[f64] {
        let (_, n) = self.first_passage.dims();
        &self.vertical_times[(i - 1) * n + (j - 1)]
    }

    pub fn origin_increments(&self) -> &[f64] {
        &self.origin_times
    }

    /// Reconstructs the counters at time `t` from the recorded increments.
    pub fn state_at(&self, t: f64) -> GrowthState {
        let (m, n) = self.first_passage.dims();
        let big_n = self.ceiling;
        let count = |times: &[f64]| times.partition_point(|&x| x <= t);
        let mut horizontal = vec![big_n; m * n];
        let mut vertical = vec![big_n; m * n];
        let mut completed = vec![false; m * n];
        let origin = count(&self.origin_times);
        for i in 1..=m {
            for j in 1..=n {
                let k = (i - 1) * n + (j - 1);
                if i >= 2 {
                    horizontal[k] = count(&self.horizontal_times[k]);
                }
                if j >= 2 {
                    vertical[k] = count(&self.vertical_times[k]);
                }
                completed[k] = if (i, j) == (1, 1) {
                    origin == big_n
                } else {
                    horizontal[k] == big_n && vertical[k] == big_n
                };
            }
        }
        GrowthState {
            ceiling: big_n,
            time: t,
            origin,
            m,
            n,
            horizontal,
            vertical,
            completed,
        }
    }
}

/// Simulates the process on `[1, m_max] x [1, n_max]` and returns the
/// first-passage grid together with every counter increment time.
pub fn simulate_growth(
    m_max: usize,
    n_max: usize,
    ceiling: usize,
    convention: RateConvention,
    key: StreamKey,
) -> Result<GrowthRun> {
    check(m_max, n_max, ceiling)?;
    let delays = CounterDelays {
        key,
        ceiling,
        convention,
    };
    let tau = eval_grid(m_max, n_max, &LppCell(&delays))?;
    let at = |i: usize, j: usize| tau[(i - 1) * n_max + (j - 1)];
    let mut origin_times = Vec::new();
    delays.offsets(1, 1, ORIGIN_TAG, &mut origin_times);
    let mut horizontal_times = vec![Vec::new(); m_max * n_max];
    let mut vertical_times = vec![Vec::new(); m_max * n_max];
    let mut buf = Vec::with_capacity(ceiling);
    for i in 1..=m_max {
        for j in 1..=n_max {
            let k = (i - 1) * n_max + (j - 1);
            if i >= 2 {
                let start = at(i - 1, j);
                delays.offsets(i, j, HORIZONTAL_TAG, &mut buf);
                horizontal_times[k] = buf.iter().map(|o| start + o).collect();
            }
            if j >= 2 {
                let start = at(i, j - 1);
                delays.offsets(i, j, VERTICAL_TAG, &mut buf);
                vertical_times[k] = buf.iter().map(|o| start + o).collect();
            }
        }
    }
    let mut params = std::collections::BTreeMap::new();
    params.insert("N".to_string(), ceiling.to_string());
    params.insert("convention".to_string(), convention.name().to_string());
    Ok(GrowthRun {
        ceiling,
        convention,
        first_passage: PassageGrid::from_parts(m_max, n_max, tau, GridSemantics::GrowthFirstPassage, params),
        origin_times,
        horizontal_times,
        vertical_times,
    })
}

/// i.i.d. realizations of `τ(m, n)`; sample `k` uses lane `k`.
pub fn first_passage_samples(
    m: usize,
    n: usize,
    ceiling: usize,
    convention: RateConvention,
    count: usize,
    master_seed: u64,
) -> Result<SampleSet> {
    check(m, n, ceiling)?;
    if count == 0 {
        return Err(Error::param("count", "need at least one sample"));
    }
    let values = (0..count as u64)
        .into_par_iter()
        .map(|lane| {
            let delays = CounterDelays {
                key: StreamKey::new(master_seed, lane),
                ceiling,
                convention,
            };
            eval_corner(m, n, &LppCell(&delays))
        })
        .collect::<Result<Vec<_>>>()?;
    let prov = Provenance::new("growth_first_passage", master_seed)
        .with("m", m)
        .with("n", n)
        .with("N", ceiling)
        .with("convention", convention.name());
    SampleSet::new(values, prov)
}

/// Delay of a single counter from start to N, one per lane.
pub fn counter_delay_samples(ceiling: usize, convention: RateConvention, count: usize, master_seed: u64) -> Result<SampleSet> {
    check(1, 1, ceiling)?;
    let values: Vec<f64> = (0..count as u64)
        .into_par_iter()
        .map(|lane| {
            CounterDelays {
                key: StreamKey::new(master_seed, lane),
                ceiling,
                convention,
            }
            .delay(2, 1, HORIZONTAL_TAG)
        })
        .collect();
    SampleSet::new(
        values,
        Provenance::new("growth_edge_delay", master_seed)
            .with("N", ceiling)
            .with("convention", convention.name()),
    )
}
