//! Empirical distributions: sample sets, ECDFs, Kolmogorov–Smirnov tests,
//! moments and histograms.

mod ks;

pub use ks::{
    kolmogorov_cdf, kolmogorov_critical_value, kolmogorov_sf, ks_critical_distance,
    ks_one_sample, ks_two_sample, Decision, KsResult,
};

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a sample set came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub model: String,
    pub params: BTreeMap<String, String>,
    pub master_seed: u64,
    pub count: usize,
}

impl Provenance {
    pub fn new(model: impl Into<String>, master_seed: u64) -> Self {
        Provenance {
            model: model.into(),
            master_seed,
            ..Default::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// Finite i.i.d. scalar statistics plus provenance. The sorted copy is built
/// on first use and shared by every later test on the same set.
#[derive(Debug)]
pub struct SampleSet {
    values: Vec<f64>,
    provenance: Provenance,
    sorted: OnceLock<Vec<f64>>,
}

impl Clone for SampleSet {
    fn clone(&self) -> Self {
        SampleSet {
            values: self.values.clone(),
            provenance: self.provenance.clone(),
            sorted: self.sorted.clone(),
        }
    }
}

impl SampleSet {
    pub fn new(values: Vec<f64>, mut provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("sample set is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("sample {i} is not finite ({})", values[i])));
        }
        provenance.count = values.len();
        Ok(SampleSet {
            values,
            provenance,
            sorted: OnceLock::new(),
        })
    }

    /// Untagged set, mostly for tests and ad-hoc comparisons.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        SampleSet::new(values, Provenance::default())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        self.sorted.get_or_init(|| {
            let mut v = self.values.clone();
            v.sort_unstable_by(f64::total_cmp);
            v
        })
    }

    /// New set with `f` applied to every value; provenance is kept.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<SampleSet> {
        SampleSet::new(self.values.iter().map(|&v| f(v)).collect(), self.provenance.clone())
    }

    pub fn ecdf(&self) -> Ecdf<'_> {
        Ecdf {
            sorted: self.sorted(),
        }
    }

    /// Empirical quantile (type 1: inverse of the ECDF).
    pub fn quantile(&self, p: f64) -> f64 {
        let s = self.sorted();
        let k = ((p.clamp(0.0, 1.0) * s.len() as f64).ceil() as usize).clamp(1, s.len());
        s[k - 1]
    }
}

/// Right-continuous empirical CDF.
#[derive(Debug, Clone, Copy)]
pub struct Ecdf<'a> {
    sorted: &'a [f64],
}

impl Ecdf<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        let k = self.sorted.partition_point(|&v| v <= x);
        k as f64 / self.sorted.len() as f64
    }
}

pub fn empirical_cdf(set: &SampleSet) -> Ecdf<'_> {
    set.ecdf()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub se_skewness: f64,
}

/// Mean, unbiased variance and sample skewness `m3 / m2^(3/2)`, with
/// large-sample standard errors.
pub fn moments(set: &SampleSet) -> Result<Moments> {
    let n = set.len();
    if n < 2 {
        return Err(Error::Input(format!("moments need at least 2 samples, got {n}")));
    }
    let nf = n as f64;
    let mean = set.values().iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in set.values() {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let variance = m2 * nf / (nf - 1.0);
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    let se_variance = ((m4 - m2 * m2 * (nf - 3.0) / (nf - 1.0)).max(0.0) / nf).sqrt();
    let se_skewness = if n > 2 {
        (6.0 * nf * (nf - 1.0) / ((nf - 2.0) * (nf + 1.0) * (nf + 3.0))).sqrt()
    } else {
        f64::NAN
    };
    Ok(Moments {
        count: n,
        mean,
        variance,
        skewness,
        se_mean: (variance / nf).sqrt(),
        se_variance,
        se_skewness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinSpec {
    Count(usize),
    Width(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRow {
    pub center: f64,
    pub count: usize,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub width: f64,
    pub rows: Vec<HistogramRow>,
}

impl Histogram {
    pub fn mode_center(&self) -> f64 {
        self.rows
            .iter()
            .max_by_key(|r| r.count)
            .map(|r| r.center)
            .unwrap_or(f64::NAN)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "bin_center,count,density")?;
        for r in &self.rows {
            writeln!(out, "{:e},{},{:e}", r.center, r.count, r.density)?;
        }
        Ok(())
    }
}

/// Equal-width histogram normalized to a probability density.
///
/// With `Count(k)` the bins span `[min, max]`; a degenerate range gets unit
/// width centred on the value. With `Width(w)` bin edges sit on multiples of `w`.
pub fn histogram(set: &SampleSet, bins: BinSpec) -> Result<Histogram> {
    let s = set.sorted();
    let (lo, hi) = (s[0], s[s.len() - 1]);
    let (start, width, k) = match bins {
        BinSpec::Count(0) => return Err(Error::Input("histogram needs at least one bin".into())),
        BinSpec::Count(k) => {
            if hi > lo {
                (lo, (hi - lo) / k as f64, k)
            } else {
                (lo - 0.5 * k as f64, 1.0, k)
            }
        }
        BinSpec::Width(w) => {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::Input(format!("bin width must be positive, got {w}")));
            }
            let start = (lo / w).floor() * w;
            let k = (((hi - start) / w).floor() as usize + 1).max(1);
            (start, w, k)
        }
    };
    let mut counts = vec![0usize; k];
    for &v in s {
        let b = (((v - start) / width).floor() as isize).clamp(0, k as isize - 1) as usize;
        counts[b] += 1;
    }
    let norm = 1.0 / (s.len() as f64 * width);
    let rows = counts
        .into_iter()
        .enumerate()
        .map(|(b, count)| HistogramRow {
            center: start + (b as f64 + 0.5) * width,
            count,
            density: count as f64 * norm,
        })
        .collect();
    Ok(Histogram { width, rows })
}
