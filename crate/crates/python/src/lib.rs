//! Python bindings: `import gumbel_lpp`.

use std::cell::RefCell;
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use gumbel_lpp::asymptotics::{self, TwEvaluator};
use gumbel_lpp::experiments::{self, ExperimentConfig};
use gumbel_lpp::growth::{self, RateConvention};
use gumbel_lpp::lattice::{self, EvalMode, Model, MultiEdgeConfig, WeightField, WeightTable};
use gumbel_lpp::rng::{DistributionSpec, GammaShape, StreamKey};
use gumbel_lpp::stats::{self, KsResult, SampleSet};
use gumbel_lpp::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::Convergence(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for gumbel_lpp::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn law(name: &str, shape: f64) -> PyResult<DistributionSpec> {
    Ok(match name {
        "exponential" => DistributionSpec::Exponential,
        "gumbel" => DistributionSpec::Gumbel,
        "gamma" => DistributionSpec::Gamma(GammaShape::new(shape).py()?),
        "inverse_gamma" => DistributionSpec::InverseGamma(GammaShape::new(shape).py()?),
        other => return Err(PyValueError::new_err(format!("unknown law `{other}`"))),
    })
}

fn model(name: &str, gamma: f64, copies: usize, law_name: &str) -> PyResult<Model> {
    Ok(match name {
        "gumbel_lpp" => Model::GumbelLpp,
        "log_gamma" => Model::LogGamma {
            gamma: GammaShape::new(gamma).py()?,
        },
        "multi_edge_lpp" => Model::MultiEdge(MultiEdgeConfig::new(copies, law(law_name, gamma)?).py()?),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown model `{other}`; expected gumbel_lpp, log_gamma or multi_edge_lpp"
            )))
        }
    })
}

/// Samples of one statistic with their provenance.
#[pyclass(name = "SampleSet", module = "gumbel_lpp", frozen)]
struct PySampleSet(SampleSet);

#[pymethods]
impl PySampleSet {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(PySampleSet(SampleSet::from_values(values).py()?))
    }

    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn quantile(&self, p: f64) -> f64 {
        self.0.quantile(p)
    }

    fn ecdf(&self, x: f64) -> f64 {
        self.0.ecdf().eval(x)
    }

    fn moments<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let m = stats::moments(&self.0).py()?;
        let d = PyDict::new(py);
        d.set_item("count", m.count)?;
        d.set_item("mean", m.mean)?;
        d.set_item("variance", m.variance)?;
        d.set_item("skewness", m.skewness)?;
        d.set_item("se_mean", m.se_mean)?;
        d.set_item("se_variance", m.se_variance)?;
        d.set_item("se_skewness", m.se_skewness)?;
        Ok(d)
    }

    /// Model name, parameters and seed that produced the samples.
    fn provenance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.0.provenance();
        let d = PyDict::new(py);
        d.set_item("model", &p.model)?;
        d.set_item("master_seed", p.master_seed)?;
        d.set_item("params", p.params.clone())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("SampleSet({} values, model={})", self.0.len(), self.0.provenance().model)
    }
}

fn ks_dict<'py>(py: Python<'py>, ks: &KsResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("statistic", ks.statistic)?;
    d.set_item("p_value", ks.p_value)?;
    d.set_item("n1", ks.n1)?;
    d.set_item("n2", ks.n2)?;
    Ok(d)
}

/// i.i.d. corner values `value(m, n)` of a model; sample `k` uses lane `k`.
#[pyfunction]
#[pyo3(signature = (model_name, m, n, count, seed, gamma=1.0, copies=1, law_name="exponential"))]
#[allow(clippy::too_many_arguments)]
fn sample_statistic(
    py: Python<'_>,
    model_name: &str,
    m: usize,
    n: usize,
    count: usize,
    seed: u64,
    gamma: f64,
    copies: usize,
    law_name: &str,
) -> PyResult<PySampleSet> {
    let model = model(model_name, gamma, copies, law_name)?;
    let set = py.detach(|| lattice::sample_statistic(&model, m, n, seed, count)).py()?;
    Ok(PySampleSet(set))
}

/// Full `m x n` grid as a list of rows `i = 1..m`, each holding `j = 1..n`.
/// Weights come from `(seed, lane)` or, if given, from a weight-table file.
#[pyfunction]
#[pyo3(signature = (model_name, m, n, seed=0, lane=0, gamma=1.0, copies=1, law_name="exponential", weights_file=None))]
#[allow(clippy::too_many_arguments)]
fn grid(
    model_name: &str,
    m: usize,
    n: usize,
    seed: u64,
    lane: u64,
    gamma: f64,
    copies: usize,
    law_name: &str,
    weights_file: Option<PathBuf>,
) -> PyResult<Vec<Vec<f64>>> {
    let model = model(model_name, gamma, copies, law_name)?;
    let field = match weights_file {
        Some(path) => WeightField::Injected(WeightTable::load(&path).py()?),
        None => WeightField::Sampled(StreamKey::new(seed, lane)),
    };
    let g = lattice::model_grid(&model, m, n, &field, EvalMode::Sequential).py()?;
    Ok(g.values().chunks(n).map(<[f64]>::to_vec).collect())
}

/// `(max(z1/E1, z2/E2), (z1+z2)/E3)` sample sets.
#[pyfunction]
fn one_step_laws(z1: f64, z2: f64, count: usize, seed: u64) -> PyResult<(PySampleSet, PySampleSet)> {
    let (a, b) = lattice::one_step_laws(z1, z2, count, seed).py()?;
    Ok((PySampleSet(a), PySampleSet(b)))
}

/// Completion times `τ(m, n)` of the counter growth process.
#[pyfunction]
#[pyo3(signature = (m, n, copies, count, seed, convention="rate_N_minus_i"))]
fn first_passage_samples(
    py: Python<'_>,
    m: usize,
    n: usize,
    copies: usize,
    count: usize,
    seed: u64,
    convention: &str,
) -> PyResult<PySampleSet> {
    let conv: RateConvention = convention.parse().py()?;
    let set = py
        .detach(|| growth::first_passage_samples(m, n, copies, conv, count, seed))
        .py()?;
    Ok(PySampleSet(set))
}

/// One-sample KS test of `samples` against a Python callable CDF.
#[pyfunction]
fn ks_one_sample<'py>(py: Python<'py>, samples: &PySampleSet, cdf: Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let eval = |x: f64| match cdf.call1((x,)).and_then(|v| v.extract::<f64>()) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let result = stats::ks_one_sample(&samples.0, eval);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    ks_dict(py, &result.py()?)
}

#[pyfunction]
fn ks_two_sample<'py>(py: Python<'py>, a: &PySampleSet, b: &PySampleSet) -> PyResult<Bound<'py, PyDict>> {
    ks_dict(py, &stats::ks_two_sample(&a.0, &b.0))
}

#[pyfunction]
fn ks_critical_distance(alpha: f64, n1: usize, n2: usize) -> PyResult<f64> {
    stats::ks_critical_distance(alpha, n1, n2).py()
}

#[pyfunction]
#[pyo3(signature = (r, quadrature_order=40, tolerance=1e-8, max_order=320))]
fn tracy_widom_gue_cdf(r: f64, quadrature_order: usize, tolerance: f64, max_order: usize) -> PyResult<f64> {
    let ev = TwEvaluator::new(quadrature_order, tolerance, max_order).py()?;
    ev.cdf(r).py()
}

#[pyfunction]
fn airy_ai(x: f64) -> f64 {
    asymptotics::airy_ai(x)
}

#[pyfunction]
fn digamma(x: f64) -> PyResult<f64> {
    asymptotics::digamma(x).py()
}

#[pyfunction]
fn polygamma2(x: f64) -> PyResult<f64> {
    asymptotics::polygamma2(x).py()
}

/// `(C, sigma)` of the `n` and `n^{1/3}` scaling of `T(n, n)`.
#[pyfunction]
fn corollary1_constants() -> (f64, f64) {
    let k = asymptotics::corollary1_constants();
    (k.c, k.sigma)
}

/// Runs a TOML experiment config and returns the report as JSON text.
/// When `output_dir` is given the report files are written there as well.
#[pyfunction]
#[pyo3(signature = (config_toml, threads=None, output_dir=None))]
fn run_experiment(
    py: Python<'_>,
    config_toml: &str,
    threads: Option<usize>,
    output_dir: Option<PathBuf>,
) -> PyResult<String> {
    let cfg: ExperimentConfig = experiments::parse_config(config_toml).py()?;
    let report = py
        .detach(|| match threads {
            Some(t) => experiments::run_with_threads(&cfg, t),
            None => experiments::run(&cfg),
        })
        .py()?;
    if let Some(dir) = output_dir {
        experiments::emit_report(std::slice::from_ref(&report), &dir).py()?;
    }
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
#[pyo3(name = "gumbel_lpp")]
pub fn gumbel_lpp_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySampleSet>()?;
    m.add_function(wrap_pyfunction!(sample_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(grid, m)?)?;
    m.add_function(wrap_pyfunction!(one_step_laws, m)?)?;
    m.add_function(wrap_pyfunction!(first_passage_samples, m)?)?;
    m.add_function(wrap_pyfunction!(ks_one_sample, m)?)?;
    m.add_function(wrap_pyfunction!(ks_two_sample, m)?)?;
    m.add_function(wrap_pyfunction!(ks_critical_distance, m)?)?;
    m.add_function(wrap_pyfunction!(tracy_widom_gue_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(airy_ai, m)?)?;
    m.add_function(wrap_pyfunction!(digamma, m)?)?;
    m.add_function(wrap_pyfunction!(polygamma2, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_constants, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    Ok(())
}
