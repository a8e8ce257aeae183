//! Writing reports to disk.
//!
//! Layout under the output directory:
//!
//! ```text
//! manifest.json                 seeds, versions, configs and the file list
//! <experiment>/config.toml      config echo
//! <experiment>/report.json      tests, moments, checks and wall-clock time
//! <experiment>/data/*.csv       histograms, CDF tables and summaries
//! ```
//!
//! Everything except `report.json` (which records the wall-clock time) is a
//! pure function of the configs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::ExperimentReport;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Comma-separated table written to `data/<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataTable {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DataTable {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_number(&mut out, *v);
            }
            out.push('\n');
        }
        out
    }
}

fn write_number(out: &mut String, v: f64) {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) {
        write!(out, "{v}").unwrap();
    } else {
        write!(out, "{v:e}").unwrap();
    }
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    experiment: &'a str,
    master_seed: u64,
    samples: usize,
    alpha: f64,
    config: String,
    files: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    package: &'static str,
    version: &'static str,
    experiments: Vec<ManifestEntry<'a>>,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a ExperimentReport,
    all_pass: bool,
    files: &'a [String],
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn mkdir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Writes all reports below `dir` and returns the written paths, manifest last.
pub fn emit_report(reports: &[ExperimentReport], dir: &Path) -> Result<Vec<PathBuf>> {
    mkdir(dir)?;
    let mut written = Vec::new();
    let mut entries = Vec::new();
    for report in reports {
        let name = report.experiment.name();
        let base = dir.join(name);
        mkdir(&base.join("data"))?;

        let mut files = Vec::new();
        let config = report.config.to_toml();
        write(&base.join("config.toml"), &config)?;
        files.push(format!("{name}/config.toml"));

        let tables = report.tables.iter().chain(report.cases.iter().flat_map(|c| &c.tables));
        for table in tables {
            let rel = format!("{name}/data/{}.csv", table.name);
            write(&dir.join(&rel), &table.to_csv())?;
            files.push(rel);
        }

        let rel = format!("{name}/report.json");
        let body = ReportFile {
            report,
            all_pass: report.all_pass(),
            files: &files,
        };
        let json = serde_json::to_string_pretty(&body).map_err(|e| Error::Input(e.to_string()))?;
        write(&dir.join(&rel), &json)?;
        files.push(rel);

        written.extend(files.iter().map(|f| dir.join(f)));
        entries.push(ManifestEntry {
            experiment: name,
            master_seed: report.config.experiment.master_seed,
            samples: report.config.experiment.samples,
            alpha: report.config.experiment.alpha,
            config,
            files,
        });
    }
    let manifest = Manifest {
        package: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiments: entries,
    };
    let path = dir.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Input(e.to_string()))?;
    write(&path, &(json + "\n"))?;
    written.push(path);
    Ok(written)
}
