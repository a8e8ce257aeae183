//! Brute-force evaluation over every up-right path. Independent of the
//! recursions and only meant for small rectangles.

use super::recursion::{
    EdgeWeights, SampledEdges, SampledVertices, TableEdges, TableVertices, VertexWeights, LPP_TAGS,
};
use super::{check_dims, WeightField};
use crate::error::{Error, Result};
use crate::rng::{DistributionSpec, GammaShape};

/// Largest number of paths the oracles will enumerate.
pub const MAX_ORACLE_PATHS: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub paths: u64,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, t| acc * (n - t) / (t + 1))
}

fn guard(m: usize, n: usize) -> Result<()> {
    check_dims(m, n)?;
    let paths = binomial((m + n - 2) as u128, (m - 1) as u128);
    if paths > MAX_ORACLE_PATHS {
        return Err(Error::Capacity {
            m,
            n,
            paths,
            limit: MAX_ORACLE_PATHS,
        });
    }
    Ok(())
}

/// Calls `visit(acc)` at `(m, n)` for every up-right path from `(i, j)`,
/// where `acc` accumulates `step(i, j, horizontal)` along the path.
fn walk<F, V>(i: usize, j: usize, m: usize, n: usize, acc: f64, step: &F, visit: &mut V) -> Result<()>
where
    F: Fn(usize, usize, bool) -> Result<f64>,
    V: FnMut(f64),
{
    if i == m && j == n {
        visit(acc);
        return Ok(());
    }
    if i < m {
        walk(i + 1, j, m, n, acc + step(i + 1, j, true)?, step, visit)?;
    }
    if j < n {
        walk(i, j + 1, m, n, acc + step(i, j + 1, false)?, step, visit)?;
    }
    Ok(())
}

/// `max` over up-right paths `(1,1) -> (m,n)` of `T_{1,1}` plus the edge
/// weights on the path.
pub fn lpp_path_oracle(m: usize, n: usize, weights: &WeightField) -> Result<OracleValue> {
    guard(m, n)?;
    match weights {
        WeightField::Injected(t) => lpp_max(m, n, &TableEdges { table: t, copies: 1 }),
        WeightField::Sampled(key) => lpp_max(
            m,
            n,
            &SampledEdges {
                key: *key,
                law: DistributionSpec::Gumbel,
                copies: 1,
                tags: LPP_TAGS,
            },
        ),
    }
}

fn lpp_max<W: EdgeWeights>(m: usize, n: usize, w: &W) -> Result<OracleValue> {
    let step = |i: usize, j: usize, horizontal: bool| {
        if horizontal {
            w.horizontal(i, j)
        } else {
            w.vertical(i, j)
        }
    };
    let mut best = f64::NEG_INFINITY;
    let mut paths = 0u64;
    walk(1, 1, m, n, w.origin()?, &step, &mut |v| {
        paths += 1;
        best = best.max(v);
    })?;
    Ok(OracleValue { value: best, paths })
}

/// `log Σ_π Π_{(i,j) ∈ π} w_{i,j}`. Path log-weights are exponentiated
/// relative to their maximum and summed with Neumaier compensation.
/// `gamma` is only used for sampled fields.
pub fn polymer_path_oracle(m: usize, n: usize, gamma: f64, weights: &WeightField) -> Result<OracleValue> {
    guard(m, n)?;
    let shape = GammaShape::new(gamma)?;
    match weights {
        WeightField::Injected(t) => polymer_sum(m, n, &TableVertices(t)),
        WeightField::Sampled(key) => polymer_sum(m, n, &SampledVertices { key: *key, shape }),
    }
}

fn polymer_sum<W: VertexWeights>(m: usize, n: usize, w: &W) -> Result<OracleValue> {
    let step = |i: usize, j: usize, _: bool| w.log_weight(i, j);
    let mut logs = Vec::new();
    walk(1, 1, m, n, w.log_weight(1, 1)?, &step, &mut |v| logs.push(v))?;
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &l in &logs {
        let x = (l - top).exp();
        let t = sum + x;
        comp += if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        sum = t;
    }
    Ok(OracleValue {
        value: top + (sum + comp).ln(),
        paths: logs.len() as u64,
    })
}
