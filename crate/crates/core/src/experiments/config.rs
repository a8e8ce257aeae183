//! TOML experiment configuration.
//!
//! ```toml
//! [experiment]
//! name = "theorem1_match"
//! samples = 50000
//! master_seed = 20240611
//! alpha = 0.001          # optional
//! output_dir = "out"     # optional
//!
//! [model]
//! m = [2, 5, 10]         # integer or list; n defaults to m
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::RateConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ExperimentKind {
    IdentityEq1,
    Theorem1Match,
    Corollary1Fluctuations,
    MultiedgeConvergence,
    GrowthEquivalence,
    ConjectureSchedule,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::IdentityEq1,
        ExperimentKind::Theorem1Match,
        ExperimentKind::Corollary1Fluctuations,
        ExperimentKind::MultiedgeConvergence,
        ExperimentKind::GrowthEquivalence,
        ExperimentKind::ConjectureSchedule,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::IdentityEq1 => "identity_eq1",
            ExperimentKind::Theorem1Match => "theorem1_match",
            ExperimentKind::Corollary1Fluctuations => "corollary1_fluctuations",
            ExperimentKind::MultiedgeConvergence => "multiedge_convergence",
            ExperimentKind::GrowthEquivalence => "growth_equivalence",
            ExperimentKind::ConjectureSchedule => "conjecture_schedule",
        }
    }
}

/// An integer or a list of integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(i64),
    Many(Vec<i64>),
}

impl OneOrMany {
    pub fn to_vec(&self) -> Vec<i64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

impl From<Vec<usize>> for OneOrMany {
    fn from(v: Vec<usize>) -> Self {
        OneOrMany::Many(v.into_iter().map(|x| x as i64).collect())
    }
}

fn default_alpha() -> f64 {
    0.001
}

fn default_gamma() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: ExperimentKind,
    pub samples: usize,
    pub master_seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OneOrMany>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub copies: Option<OneOrMany>,
    #[serde(default)]
    pub convention: RateConvention,
    /// `(z1, z2)` pairs for the one-step identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<[f64; 2]>>,
    /// `(n, N)` pairs for the schedule experiment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<[i64; 2]>>,
    /// Counter-delay draws in the growth experiment; defaults to `samples`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay_samples: Option<usize>,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            m: None,
            n: None,
            gamma: default_gamma(),
            copies: None,
            convention: RateConvention::default(),
            z: None,
            schedule: None,
            delay_samples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub model: ModelSection,
}

/// Parsed and checked case lists of a config.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Plan {
    pub dims: Vec<(usize, usize)>,
    pub copies: Vec<usize>,
    pub z: Vec<(f64, f64)>,
    pub schedule: Vec<(usize, usize)>,
    pub delay_samples: usize,
}

/// Parses TOML text. Syntax errors, unknown or duplicate keys and missing
/// fields are reported with their line numbers.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    cfg.plan()?;
    Ok(cfg)
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn positive_list(field: &str, v: &Option<OneOrMany>, problems: &mut Vec<String>) -> Vec<usize> {
    let Some(v) = v else { return Vec::new() };
    let v = v.to_vec();
    if v.is_empty() {
        problems.push(format!("model.{field}: list is empty"));
    }
    v.into_iter()
        .filter_map(|x| {
            if x >= 1 {
                Some(x as usize)
            } else {
                problems.push(format!("model.{field}: {x} is not a positive integer"));
                None
            }
        })
        .collect()
}

impl ExperimentConfig {
    /// Smallest config for `kind` with everything else at its default.
    pub fn new(kind: ExperimentKind, samples: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            experiment: ExperimentSection {
                name: kind,
                samples,
                master_seed,
                alpha: default_alpha(),
                output_dir: None,
            },
            model: ModelSection::default(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every field and expands the case lists. All problems are
    /// collected into one error.
    pub(crate) fn plan(&self) -> Result<Plan> {
        use ExperimentKind::*;
        let kind = self.experiment.name;
        let model = &self.model;
        let mut problems = Vec::new();

        if self.experiment.samples < 2 {
            problems.push(format!("experiment.samples: need at least 2, got {}", self.experiment.samples));
        }
        let alpha = self.experiment.alpha;
        if !(alpha > 0.0 && alpha < 1.0) {
            problems.push(format!("experiment.alpha: must lie in (0, 1), got {alpha}"));
        }
        if !(model.gamma.is_finite() && model.gamma > 0.0) {
            problems.push(format!("model.gamma: must be positive, got {}", model.gamma));
        } else if model.gamma != 1.0 && kind == Theorem1Match {
            problems.push("model.gamma: the identity holds only at gamma = 1".into());
        }

        let ms = positive_list("m", &model.m, &mut problems);
        let ns = positive_list("n", &model.n, &mut problems);
        let copies = positive_list("N", &model.copies, &mut problems);

        let needs_dims = matches!(
            kind,
            Theorem1Match | Corollary1Fluctuations | MultiedgeConvergence | GrowthEquivalence
        );
        let mut dims = Vec::new();
        if needs_dims {
            let (ms, ns) = match (ms.is_empty(), ns.is_empty()) {
                (true, true) => {
                    if model.m.is_none() && model.n.is_none() {
                        problems.push("model.m / model.n: at least one is required".into());
                    }
                    (vec![], vec![])
                }
                (false, true) => (ms.clone(), ms),
                (true, false) => (ns.clone(), ns),
                (false, false) => (ms, ns),
            };
            let len = ms.len().max(ns.len());
            if ms.len() != ns.len() && ms.len() != 1 && ns.len() != 1 {
                problems.push(format!("model.m / model.n: lengths {} and {} cannot be paired", ms.len(), ns.len()));
            } else if !ms.is_empty() {
                for k in 0..len {
                    dims.push((ms[k.min(ms.len() - 1)], ns[k.min(ns.len() - 1)]));
                }
            }
        }
        if kind == Corollary1Fluctuations {
            for &(m, n) in &dims {
                if m != n {
                    problems.push(format!("model.m / model.n: fluctuations need square grids, got {m}x{n}"));
                } else if n < 8 {
                    problems.push(format!("model.n: {n} is below 8, too small for the n^(1/3) scaling"));
                }
            }
        }

        let needs_copies = matches!(kind, MultiedgeConvergence | GrowthEquivalence);
        if needs_copies && model.copies.is_none() {
            problems.push("model.N: required".into());
        }

        let mut z = Vec::new();
        if kind == IdentityEq1 {
            match &model.z {
                None => problems.push("model.z: required, a list of [z1, z2] pairs".into()),
                Some(pairs) if pairs.is_empty() => problems.push("model.z: list is empty".into()),
                Some(pairs) => {
                    for &[a, b] in pairs {
                        if a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0 {
                            z.push((a, b));
                        } else {
                            problems.push(format!("model.z: [{a}, {b}] must be positive"));
                        }
                    }
                }
            }
        }

        let mut schedule = Vec::new();
        if kind == ConjectureSchedule {
            match &model.schedule {
                None => problems.push("model.schedule: required, a list of [n, N] pairs".into()),
                Some(pairs) if pairs.is_empty() => problems.push("model.schedule: list is empty".into()),
                Some(pairs) => {
                    for &[n, c] in pairs {
                        if n >= 1 && c >= 1 {
                            schedule.push((n as usize, c as usize));
                        } else {
                            problems.push(format!("model.schedule: [{n}, {c}] must be positive"));
                        }
                    }
                }
            }
        }

        let delay_samples = model.delay_samples.unwrap_or(self.experiment.samples);
        if kind == GrowthEquivalence && delay_samples < 2 {
            problems.push(format!("model.delay_samples: need at least 2, got {delay_samples}"));
        }

        if problems.is_empty() {
            Ok(Plan {
                dims,
                copies,
                z,
                schedule,
                delay_samples,
            })
        } else {
            Err(Error::Config(format!(
                "invalid {} config:\n  {}",
                kind.name(),
                problems.join("\n  ")
            )))
        }
    }
}
