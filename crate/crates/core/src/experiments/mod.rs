//! Config-driven experiments and their reports.
//!
//! Every experiment draws its samples from lanes `0..samples` of the
//! configured master seed, so a report is reproduced exactly by its config.
//! Different models drawn under one seed use disjoint stream tags and are
//! therefore independent.

mod config;
mod report;

pub use config::{load_config, parse_config, ExperimentConfig, ExperimentKind, ExperimentSection, ModelSection, OneOrMany};
pub use report::{emit_report, DataTable, MANIFEST_FILE};

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::{corollary1_constants, gumbel_normalizers, TwEvaluator};
use crate::error::{Error, Result};
use crate::growth::{counter_delay_samples, first_passage_samples, RateConvention};
use crate::lattice::{normalize_value, one_step_laws, sample_statistic, sample_statistic_with, Model, MultiEdgeConfig};
use crate::rng::{exponential_cdf, DistributionSpec, GammaShape};
use crate::stats::{
    histogram, ks_critical_distance, ks_one_sample, ks_two_sample, moments, BinSpec, KsResult, Moments, SampleSet,
};
use config::Plan;

const HISTOGRAM_BINS: usize = 60;
const CDF_GRID: usize = 99;

/// One KS comparison inside a case.
#[derive(Debug, Clone, Serialize)]
pub struct TestRecord {
    pub name: String,
    pub ks: KsResult,
    /// `D_crit(alpha)` for two-sample tests.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical_distance: Option<f64>,
    /// `None` for comparisons reported as data only.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub tests: Vec<TestRecord>,
    pub moments: BTreeMap<String, Moments>,
    #[serde(skip)]
    pub tables: Vec<DataTable>,
}

impl CaseReport {
    fn new(label: String) -> Self {
        CaseReport {
            label,
            params: BTreeMap::new(),
            tests: Vec::new(),
            moments: BTreeMap::new(),
            tables: Vec::new(),
        }
    }

    pub fn test(&self, name: &str) -> Option<&TestRecord> {
        self.tests.iter().find(|t| t.name == name)
    }
}

/// A property spanning several cases, such as a decreasing KS distance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub constants: BTreeMap<String, f64>,
    pub cases: Vec<CaseReport>,
    pub checks: Vec<Check>,
    /// Summary tables spanning all cases.
    #[serde(skip)]
    pub tables: Vec<DataTable>,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    /// False when any test or check with a verdict failed.
    pub fn all_pass(&self) -> bool {
        let tests = self.cases.iter().flat_map(|c| &c.tests).all(|t| t.pass != Some(false));
        tests && self.checks.iter().all(|c| c.pass)
    }

    pub fn case(&self, label: &str) -> Option<&CaseReport> {
        self.cases.iter().find(|c| c.label == label)
    }
}

/// Runs the configured experiment on the current rayon pool.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let plan = config.plan()?;
    let start = Instant::now();
    let mut report = ExperimentReport {
        experiment: config.experiment.name,
        config: config.clone(),
        constants: BTreeMap::new(),
        cases: Vec::new(),
        checks: Vec::new(),
        tables: Vec::new(),
        wall_clock_seconds: 0.0,
    };
    let ctx = Ctx {
        samples: config.experiment.samples,
        seed: config.experiment.master_seed,
        alpha: config.experiment.alpha,
    };
    match config.experiment.name {
        ExperimentKind::IdentityEq1 => identity_eq1(&ctx, &plan, &mut report)?,
        ExperimentKind::Theorem1Match => theorem1_match(&ctx, &plan, &mut report)?,
        ExperimentKind::Corollary1Fluctuations => corollary1(&ctx, &plan, &mut report)?,
        ExperimentKind::MultiedgeConvergence => multiedge(&ctx, &plan, &mut report)?,
        ExperimentKind::GrowthEquivalence => growth(&ctx, &plan, config.model.convention, &mut report)?,
        ExperimentKind::ConjectureSchedule => conjecture(&ctx, &plan, &mut report)?,
    }
    report.wall_clock_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

/// As [`run`], on a dedicated pool of `threads` workers.
pub fn run_with_threads(config: &ExperimentConfig, threads: usize) -> Result<ExperimentReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Input(format!("cannot build a pool of {threads} threads: {e}")))?;
    pool.install(|| run(config))
}

struct Ctx {
    samples: usize,
    seed: u64,
    alpha: f64,
}

impl Ctx {
    fn one_sample(&self, name: &str, set: &SampleSet, cdf: impl Fn(f64) -> f64, verdict: bool) -> Result<TestRecord> {
        let ks = ks_one_sample(set, cdf)?.at_level(self.alpha);
        Ok(record(name, ks, None, verdict))
    }

    fn two_sample(&self, name: &str, a: &SampleSet, b: &SampleSet, verdict: bool) -> Result<TestRecord> {
        let ks = ks_two_sample(a, b).at_level(self.alpha);
        let crit = ks_critical_distance(self.alpha, a.len(), b.len())?;
        let mut r = record(name, ks, Some(crit), false);
        if verdict {
            r.pass = Some(ks.statistic < crit);
        }
        Ok(r)
    }
}

fn record(name: &str, ks: KsResult, critical_distance: Option<f64>, verdict: bool) -> TestRecord {
    let pass = verdict.then(|| !ks.decision.is_some_and(|d| d.reject));
    TestRecord {
        name: name.to_string(),
        ks,
        critical_distance,
        pass,
    }
}

fn hist_table(name: String, set: &SampleSet) -> Result<DataTable> {
    let h = histogram(set, BinSpec::Count(HISTOGRAM_BINS))?;
    Ok(DataTable {
        name,
        header: vec!["bin_center".into(), "count".into(), "density".into()],
        rows: h.rows.iter().map(|r| vec![r.center, r.count as f64, r.density]).collect(),
    })
}

fn quantile_levels() -> impl Iterator<Item = f64> {
    (1..=CDF_GRID).map(|k| k as f64 / (CDF_GRID + 1) as f64)
}

/// ECDF of `set` at its own quantile grid next to a reference CDF.
fn reference_cdf_table(
    name: String,
    set: &SampleSet,
    column: &str,
    reference: impl Fn(f64) -> Result<f64>,
) -> Result<DataTable> {
    let ecdf = set.ecdf();
    let rows = quantile_levels()
        .map(|p| {
            let x = set.quantile(p);
            Ok(vec![p, x, ecdf.eval(x), reference(x)?])
        })
        .collect::<Result<_>>()?;
    Ok(DataTable {
        name,
        header: vec!["level".into(), "x".into(), "empirical_cdf".into(), column.into()],
        rows,
    })
}

/// Both ECDFs on the pooled quantile grid.
fn two_sample_cdf_table(name: String, a: &SampleSet, a_name: &str, b: &SampleSet, b_name: &str) -> DataTable {
    let pooled: Vec<f64> = a.values().iter().chain(b.values()).copied().collect();
    let pooled = SampleSet::from_values(pooled).expect("finite samples");
    let (ea, eb) = (a.ecdf(), b.ecdf());
    DataTable {
        name,
        header: vec!["x".into(), format!("ecdf_{a_name}"), format!("ecdf_{b_name}")],
        rows: quantile_levels()
            .map(|p| {
                let x = pooled.quantile(p);
                vec![x, ea.eval(x), eb.eval(x)]
            })
            .collect(),
    }
}

fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.5}")).collect::<Vec<_>>().join(" > ")
}

fn identity_eq1(ctx: &Ctx, plan: &Plan, report: &mut ExperimentReport) -> Result<()> {
    for &(z1, z2) in &plan.z {
        let (lpp, poly) = one_step_laws(z1, z2, ctx.samples, ctx.seed)?;
        let (lpp_r, poly_r) = (lpp.map(|v| 1.0 / v)?, poly.map(|v| 1.0 / v)?);
        let rate = z1 + z2;
        let cdf = |x: f64| exponential_cdf(x, rate);
        let mut case = CaseReport::new(format!("z_{z1}_{z2}"));
        case.params.insert("z1".into(), z1);
        case.params.insert("z2".into(), z2);
        case.tests.push(ctx.one_sample("lpp_reciprocal_vs_exponential", &lpp_r, cdf, true)?);
        case.tests.push(ctx.one_sample("polymer_reciprocal_vs_exponential", &poly_r, cdf, true)?);
        case.tables.push(hist_table(format!("{}_lpp_reciprocal_hist", case.label), &lpp_r)?);
        case.tables.push(hist_table(format!("{}_polymer_reciprocal_hist", case.label), &poly_r)?);
        case.tables.push(reference_cdf_table(
            format!("{}_lpp_reciprocal_cdf", case.label),
            &lpp_r,
            "exponential_cdf",
            |x| Ok(cdf(x)),
        )?);
        case.tables.push(reference_cdf_table(
            format!("{}_polymer_reciprocal_cdf", case.label),
            &poly_r,
            "exponential_cdf",
            |x| Ok(cdf(x)),
        )?);
        report.cases.push(case);
    }
    Ok(())
}

fn theorem1_match(ctx: &Ctx, plan: &Plan, report: &mut ExperimentReport) -> Result<()> {
    let polymer = Model::LogGamma {
        gamma: GammaShape::ONE,
    };
    for &(m, n) in &plan.dims {
        let t = sample_statistic(&Model::GumbelLpp, m, n, ctx.seed, ctx.samples)?;
        let z = sample_statistic(&polymer, m, n, ctx.seed, ctx.samples)?;
        let mut case = CaseReport::new(format!("m{m}_n{n}"));
        case.params.insert("m".into(), m as f64);
        case.params.insert("n".into(), n as f64);
        case.tests.push(ctx.two_sample("lpp_vs_polymer", &t, &z, true)?);
        case.moments.insert("lpp".into(), moments(&t)?);
        case.moments.insert("polymer".into(), moments(&z)?);
        case.tables.push(hist_table(format!("{}_lpp_hist", case.label), &t)?);
        case.tables.push(hist_table(format!("{}_polymer_hist", case.label), &z)?);
        case.tables.push(two_sample_cdf_table(format!("{}_cdf", case.label), &t, "lpp", &z, "polymer"));
        report.cases.push(case);
    }
    Ok(())
}

/// KS test against `F_GUE`; the CDF is evaluated once per sample point.
fn ks_vs_gue(name: &str, set: &SampleSet, ev: &TwEvaluator) -> Result<TestRecord> {
    let sorted = set.sorted();
    let f: Vec<f64> = sorted.par_iter().map(|&x| ev.cdf(x)).collect::<Result<_>>()?;
    let lookup = |x: f64| f[sorted.partition_point(|&s| s < x)];
    let ks = ks_one_sample(set, lookup)?;
    let mut r = record(name, ks, None, false);
    r.ks.decision = None;
    Ok(r)
}

fn moments_row(m: &Moments) -> [f64; 6] {
    [m.mean, m.variance, m.skewness, m.se_mean, m.se_variance, m.se_skewness]
}

const MOMENT_COLUMNS: [&str; 6] = ["mean", "variance", "skewness", "se_mean", "se_variance", "se_skewness"];

fn corollary1(ctx: &Ctx, plan: &Plan, report: &mut ExperimentReport) -> Result<()> {
    let k = corollary1_constants();
    let ev = TwEvaluator::default();
    report.constants.insert("C".into(), k.c);
    report.constants.insert("sigma".into(), k.sigma);
    let mut summary = DataTable {
        name: "moments".into(),
        header: ["n"].into_iter().chain(MOMENT_COLUMNS).chain(["ks_distance"]).map(String::from).collect(),
        rows: Vec::new(),
    };
    let mut distances = Vec::new();
    for &(_, n) in &plan.dims {
        let set = sample_statistic_with(&Model::GumbelLpp, n, n, ctx.seed, ctx.samples, |t| k.scale(t, n))?;
        let mut case = CaseReport::new(format!("n{n}"));
        case.params.insert("n".into(), n as f64);
        let test = ks_vs_gue("scaled_lpp_vs_tracy_widom", &set, &ev)?;
        let mom = moments(&set)?;
        distances.push(test.ks.statistic);
        summary.rows.push(
            [n as f64]
                .into_iter()
                .chain(moments_row(&mom))
                .chain([test.ks.statistic])
                .collect(),
        );
        case.tests.push(test);
        case.moments.insert("scaled_lpp".into(), mom);
        case.tables.push(hist_table(format!("{}_hist", case.label), &set)?);
        case.tables.push(reference_cdf_table(format!("{}_cdf", case.label), &set, "F_GUE", |x| ev.cdf(x))?);
        report.cases.push(case);
    }
    if distances.len() > 1 {
        report.checks.push(Check {
            name: "ks_distance_decreasing_in_n".into(),
            pass: strictly_decreasing(&distances),
            detail: fmt_list(&distances),
        });
    }
    report.tables.push(summary);
    Ok(())
}

fn multiedge(ctx: &Ctx, plan: &Plan, report: &mut ExperimentReport) -> Result<()> {
    let mut summary = DataTable {
        name: "ks_by_N".into(),
        header: ["m", "n", "N", "C_N", "sigma_N", "ks_distance", "p_value"].map(String::from).to_vec(),
        rows: Vec::new(),
    };
    for &(m, n) in &plan.dims {
        let reference = sample_statistic(&Model::GumbelLpp, m, n, ctx.seed, ctx.samples)?;
        let mut distances = Vec::new();
        let mut last_reject = false;
        for &copies in &plan.copies {
            let norm = gumbel_normalizers(DistributionSpec::Exponential, copies)?;
            let model = Model::MultiEdge(MultiEdgeConfig::new(copies, DistributionSpec::Exponential)?);
            let set = sample_statistic_with(&model, m, n, ctx.seed, ctx.samples, |t| {
                normalize_value(t, m + n - 1, norm.c_n, norm.sigma_n)
            })?;
            let mut case = CaseReport::new(format!("m{m}_n{n}_N{copies}"));
            case.params.insert("m".into(), m as f64);
            case.params.insert("n".into(), n as f64);
            case.params.insert("N".into(), copies as f64);
            case.params.insert("C_N".into(), norm.c_n);
            case.params.insert("sigma_N".into(), norm.sigma_n);
            let test = ctx.two_sample("normalized_multi_edge_vs_lpp", &set, &reference, false)?;
            distances.push(test.ks.statistic);
            last_reject = test.ks.decision.is_some_and(|d| d.reject);
            summary.rows.push(vec![
                m as f64,
                n as f64,
                copies as f64,
                norm.c_n,
                norm.sigma_n,
                test.ks.statistic,
                test.ks.p_value,
            ]);
            case.tests.push(test);
            case.moments.insert("normalized_multi_edge".into(), moments(&set)?);
            case.tables.push(hist_table(format!("{}_hist", case.label), &set)?);
            case.tables.push(two_sample_cdf_table(
                format!("{}_cdf", case.label),
                &set,
                "multi_edge",
                &reference,
                "lpp",
            ));
            report.cases.push(case);
        }
        if distances.len() > 1 {
            report.checks.push(Check {
                name: format!("m{m}_n{n}_ks_distance_decreasing_in_N"),
                pass: strictly_decreasing(&distances),
                detail: fmt_list(&distances),
            });
        }
        report.checks.push(Check {
            name: format!("m{m}_n{n}_largest_N_consistent"),
            pass: !last_reject,
            detail: format!("two-sample KS at alpha = {}", ctx.alpha),
        });
    }
    report.tables.push(summary);
    Ok(())
}

fn growth(ctx: &Ctx, plan: &Plan, convention: RateConvention, report: &mut ExperimentReport) -> Result<()> {
    for &copies in &plan.copies {
        let delays = counter_delay_samples(copies, convention, plan.delay_samples, ctx.seed)?;
        let max_cdf = |x: f64| exponential_cdf(x, 1.0).powi(copies as i32);
        let mut case = CaseReport::new(format!("N{copies}_delay"));
        case.params.insert("N".into(), copies as f64);
        case.tests.push(ctx.one_sample("delay_vs_max_of_exponentials", &delays, max_cdf, true)?);
        case.moments.insert("delay".into(), moments(&delays)?);
        case.tables.push(hist_table(format!("{}_hist", case.label), &delays)?);
        case.tables.push(reference_cdf_table(
            format!("{}_cdf", case.label),
            &delays,
            "max_exponential_cdf",
            |x| Ok(max_cdf(x)),
        )?);
        report.cases.push(case);

        let model = Model::MultiEdge(MultiEdgeConfig::new(copies, DistributionSpec::Exponential)?);
        for &(m, n) in &plan.dims {
            let tau = first_passage_samples(m, n, copies, convention, ctx.samples, ctx.seed)?;
            let t = sample_statistic(&model, m, n, ctx.seed, ctx.samples)?;
            let mut case = CaseReport::new(format!("m{m}_n{n}_N{copies}"));
            case.params.insert("m".into(), m as f64);
            case.params.insert("n".into(), n as f64);
            case.params.insert("N".into(), copies as f64);
            case.tests.push(ctx.two_sample("first_passage_vs_multi_edge", &tau, &t, true)?);
            case.moments.insert("first_passage".into(), moments(&tau)?);
            case.moments.insert("multi_edge".into(), moments(&t)?);
            case.tables.push(hist_table(format!("{}_first_passage_hist", case.label), &tau)?);
            case.tables.push(hist_table(format!("{}_multi_edge_hist", case.label), &t)?);
            case.tables.push(two_sample_cdf_table(
                format!("{}_cdf", case.label),
                &tau,
                "first_passage",
                &t,
                "multi_edge",
            ));
            report.cases.push(case);
        }
    }
    Ok(())
}

fn conjecture(ctx: &Ctx, plan: &Plan, report: &mut ExperimentReport) -> Result<()> {
    let k = corollary1_constants();
    let ev = TwEvaluator::default();
    report.constants.insert("C".into(), k.c);
    report.constants.insert("sigma".into(), k.sigma);
    let mut summary = DataTable {
        name: "schedule".into(),
        header: ["n", "N", "C_N"]
            .into_iter()
            .chain(MOMENT_COLUMNS)
            .chain(["ks_distance_gue"])
            .map(String::from)
            .collect(),
        rows: Vec::new(),
    };
    for &(n, copies) in &plan.schedule {
        let norm = gumbel_normalizers(DistributionSpec::Exponential, copies)?;
        let model = Model::MultiEdge(MultiEdgeConfig::new(copies, DistributionSpec::Exponential)?);
        let set = sample_statistic_with(&model, n, n, ctx.seed, ctx.samples, |t| {
            k.scale(normalize_value(t, 2 * n - 1, norm.c_n, norm.sigma_n), n)
        })?;
        let mut case = CaseReport::new(format!("n{n}_N{copies}"));
        case.params.insert("n".into(), n as f64);
        case.params.insert("N".into(), copies as f64);
        case.params.insert("C_N".into(), norm.c_n);
        let test = ks_vs_gue("scaled_multi_edge_vs_tracy_widom", &set, &ev)?;
        let mom = moments(&set)?;
        summary.rows.push(
            [n as f64, copies as f64, norm.c_n]
                .into_iter()
                .chain(moments_row(&mom))
                .chain([test.ks.statistic])
                .collect(),
        );
        case.tests.push(test);
        case.moments.insert("scaled_multi_edge".into(), mom);
        case.tables.push(hist_table(format!("{}_hist", case.label), &set)?);
        case.tables.push(reference_cdf_table(format!("{}_cdf", case.label), &set, "F_GUE", |x| ev.cdf(x))?);
        report.cases.push(case);
    }
    report.tables.push(summary);
    Ok(())
}
