//! Passage-time and free-energy grids for Gumbel LPP, the log-gamma polymer
//! and N multi-edge LPP, together with brute-force path oracles.
//!
//! Coordinates are 1-based; `i` runs along the horizontal axis (edges `U`)
//! and `j` along the vertical axis (edges `V`).
//!
//! When a maximum is tied the horizontal predecessor `(i-1, j)` is preferred.
//! Ties only arise for hand-made tables and never change a grid value.

mod oracle;
pub(crate) mod recursion;
mod sampling;
mod weights;

pub use oracle::{lpp_path_oracle, polymer_path_oracle, OracleValue, MAX_ORACLE_PATHS};
pub use recursion::logaddexp;
pub use sampling::{one_step_laws, sample_statistic, sample_statistic_with};
pub use weights::{Role, WeightField, WeightTable};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{DistributionSpec, GammaShape};
use recursion::{
    eval_corner, eval_grid, eval_wavefront, Cell, LppCell, PolymerCell, SampledEdges,
    SampledVertices, TableEdges, TableVertices, LPP_TAGS, MULTI_EDGE_TAGS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSemantics {
    GumbelLppT,
    LogGammaLogZ,
    MultiEdgeT,
    /// `(T^{(N)} - C_N (i + j - 1)) / σ_N`.
    NormalizedMultiEdgeT,
    /// Completion times `τ(i, j)` of the corner-growth process.
    GrowthFirstPassage,
}

/// `N` parallel edges with i.i.d. weights of law `law` between neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiEdgeConfig {
    pub copies: usize,
    pub law: DistributionSpec,
}

impl MultiEdgeConfig {
    pub fn new(copies: usize, law: DistributionSpec) -> Result<Self> {
        if copies == 0 {
            return Err(Error::param("N", "multi-edge multiplicity must be at least 1"));
        }
        Ok(MultiEdgeConfig { copies, law })
    }
}

/// The three lattice models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    GumbelLpp,
    LogGamma { gamma: GammaShape },
    MultiEdge(MultiEdgeConfig),
}

impl Model {
    pub fn tag(&self) -> &'static str {
        match self {
            Model::GumbelLpp => "gumbel_lpp",
            Model::LogGamma { .. } => "log_gamma",
            Model::MultiEdge(_) => "multi_edge_lpp",
        }
    }

    pub fn semantics(&self) -> GridSemantics {
        match self {
            Model::GumbelLpp => GridSemantics::GumbelLppT,
            Model::LogGamma { .. } => GridSemantics::LogGammaLogZ,
            Model::MultiEdge(_) => GridSemantics::MultiEdgeT,
        }
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        match self {
            Model::GumbelLpp => {}
            Model::LogGamma { gamma } => {
                p.insert("gamma".into(), gamma.get().to_string());
            }
            Model::MultiEdge(cfg) => {
                p.insert("N".into(), cfg.copies.to_string());
                p.insert("D".into(), cfg.law.name());
            }
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    #[default]
    Sequential,
    /// Anti-diagonals in parallel; bit-identical to `Sequential`.
    Wavefront,
}

/// `m x n` grid of passage times or log partition functions.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageGrid {
    m: usize,
    n: usize,
    values: Vec<f64>,
    semantics: GridSemantics,
    pub params: BTreeMap<String, String>,
}

impl PassageGrid {
    pub(crate) fn from_parts(
        m: usize,
        n: usize,
        values: Vec<f64>,
        semantics: GridSemantics,
        params: BTreeMap<String, String>,
    ) -> Self {
        debug_assert_eq!(values.len(), m * n);
        PassageGrid {
            m,
            n,
            values,
            semantics,
            params,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn semantics(&self) -> GridSemantics {
        self.semantics
    }

    /// Value at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!((1..=self.m).contains(&i) && (1..=self.n).contains(&j), "({i},{j}) out of grid");
        self.values[(i - 1) * self.n + (j - 1)]
    }

    pub fn corner(&self) -> f64 {
        self.get(self.m, self.n)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::param("m,n", format!("grid {m}x{n} must be at least 1x1")));
    }
    if m >= 1 << 28 || n >= 1 << 28 {
        return Err(Error::param("m,n", "grid side must stay below 2^28"));
    }
    Ok(())
}

fn run<C: Cell>(m: usize, n: usize, cell: &C, mode: EvalMode) -> Result<Vec<f64>> {
    match mode {
        EvalMode::Sequential => eval_grid(m, n, cell),
        EvalMode::Wavefront => eval_wavefront(m, n, cell),
    }
}

/// Evaluates `model` on the full `m x n` rectangle.
pub fn model_grid(model: &Model, m: usize, n: usize, weights: &WeightField, mode: EvalMode) -> Result<PassageGrid> {
    check_dims(m, n)?;
    let values = match (model, weights) {
        (Model::GumbelLpp, WeightField::Sampled(key)) => run(
            m,
            n,
            &LppCell(SampledEdges {
                key: *key,
                law: DistributionSpec::Gumbel,
                copies: 1,
                tags: LPP_TAGS,
            }),
            mode,
        )?,
        (Model::GumbelLpp, WeightField::Injected(t)) => {
            run(m, n, &LppCell(TableEdges { table: t, copies: 1 }), mode)?
        }
        (Model::LogGamma { gamma }, WeightField::Sampled(key)) => run(
            m,
            n,
            &PolymerCell(SampledVertices {
                key: *key,
                shape: *gamma,
            }),
            mode,
        )?,
        (Model::LogGamma { .. }, WeightField::Injected(t)) => run(m, n, &PolymerCell(TableVertices(t)), mode)?,
        (Model::MultiEdge(cfg), WeightField::Sampled(key)) => run(
            m,
            n,
            &LppCell(SampledEdges {
                key: *key,
                law: cfg.law,
                copies: cfg.copies,
                tags: MULTI_EDGE_TAGS,
            }),
            mode,
        )?,
        (Model::MultiEdge(cfg), WeightField::Injected(t)) => run(
            m,
            n,
            &LppCell(TableEdges {
                table: t,
                copies: cfg.copies,
            }),
            mode,
        )?,
    };
    Ok(PassageGrid {
        m,
        n,
        values,
        semantics: model.semantics(),
        params: model.params(),
    })
}

/// Only the corner value `value(m, n)`, evaluated with a rolling buffer.
pub fn model_corner(model: &Model, m: usize, n: usize, weights: &WeightField) -> Result<f64> {
    check_dims(m, n)?;
    match (model, weights) {
        (Model::GumbelLpp, WeightField::Sampled(key)) => eval_corner(
            m,
            n,
            &LppCell(SampledEdges {
                key: *key,
                law: DistributionSpec::Gumbel,
                copies: 1,
                tags: LPP_TAGS,
            }),
        ),
        (Model::GumbelLpp, WeightField::Injected(t)) => eval_corner(m, n, &LppCell(TableEdges { table: t, copies: 1 })),
        (Model::LogGamma { gamma }, WeightField::Sampled(key)) => eval_corner(
            m,
            n,
            &PolymerCell(SampledVertices {
                key: *key,
                shape: *gamma,
            }),
        ),
        (Model::LogGamma { .. }, WeightField::Injected(t)) => eval_corner(m, n, &PolymerCell(TableVertices(t))),
        (Model::MultiEdge(cfg), WeightField::Sampled(key)) => eval_corner(
            m,
            n,
            &LppCell(SampledEdges {
                key: *key,
                law: cfg.law,
                copies: cfg.copies,
                tags: MULTI_EDGE_TAGS,
            }),
        ),
        (Model::MultiEdge(cfg), WeightField::Injected(t)) => eval_corner(
            m,
            n,
            &LppCell(TableEdges {
                table: t,
                copies: cfg.copies,
            }),
        ),
    }
}

/// Gumbel LPP passage times `T(i, j)`.
pub fn gumbel_lpp_grid(m: usize, n: usize, weights: &WeightField) -> Result<PassageGrid> {
    model_grid(&Model::GumbelLpp, m, n, weights, EvalMode::Sequential)
}

/// Log-gamma polymer free energies `log Z(i, j)`, computed in log space.
pub fn log_gamma_grid(m: usize, n: usize, gamma: f64, weights: &WeightField) -> Result<PassageGrid> {
    let gamma = GammaShape::new(gamma)?;
    model_grid(&Model::LogGamma { gamma }, m, n, weights, EvalMode::Sequential)
}

/// N multi-edge passage times. Each multi-edge enters the recursion through
/// the maximum of its `N` weights, since `max_k (a + U_k) = a + max_k U_k`.
pub fn multi_edge_lpp_grid(m: usize, n: usize, cfg: &MultiEdgeConfig, weights: &WeightField) -> Result<PassageGrid> {
    model_grid(&Model::MultiEdge(*cfg), m, n, weights, EvalMode::Sequential)
}

/// Maps each entry to `(value - c_n (i + j - 1)) / sigma_n`.
pub fn normalize_multi_edge(grid: &PassageGrid, c_n: f64, sigma_n: f64) -> Result<PassageGrid> {
    if grid.semantics != GridSemantics::MultiEdgeT {
        return Err(Error::Input(format!(
            "normalization needs a multi-edge grid, got {:?}",
            grid.semantics
        )));
    }
    if !(sigma_n.is_finite() && sigma_n > 0.0) {
        return Err(Error::param("sigma_N", format!("must be positive, got {sigma_n}")));
    }
    let mut out = grid.clone();
    for i in 1..=grid.m {
        for j in 1..=grid.n {
            let k = (i - 1) * grid.n + (j - 1);
            out.values[k] = normalize_value(grid.values[k], i + j - 1, c_n, sigma_n);
        }
    }
    out.semantics = GridSemantics::NormalizedMultiEdgeT;
    out.params.insert("C_N".into(), c_n.to_string());
    out.params.insert("sigma_N".into(), sigma_n.to_string());
    Ok(out)
}

#[inline]
pub(crate) fn normalize_value(value: f64, steps: usize, c_n: f64, sigma_n: f64) -> f64 {
    (value - c_n * steps as f64) / sigma_n
}

#[cfg(test)]
mod tests;
