use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gumbel_lpp::asymptotics::TwEvaluator;
use gumbel_lpp::experiments::{
    emit_report, load_config, run, run_with_threads, ExperimentConfig, ExperimentKind, ExperimentReport, OneOrMany,
};
use gumbel_lpp::growth::RateConvention;
use gumbel_lpp::Result;

/// Gumbel LPP, log-gamma polymer and multi-edge LPP experiments.
///
/// Exit status: 0 when every verdict passes, 1 on a statistical rejection,
/// 2 on errors.
#[derive(Parser)]
#[command(name = "gumbel-lpp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per case.
    #[arg(long)]
    samples: Option<usize>,
    /// Directory for report, tables and manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long)]
    threads: Option<usize>,
    /// Significance level.
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct ModelArgs {
    /// Grid widths, comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Vec<i64>,
    /// Grid heights, comma separated; default to the widths and vice versa.
    #[arg(long, value_delimiter = ',')]
    n: Vec<i64>,
    /// Multi-edge multiplicities N, comma separated.
    #[arg(long = "copies", short = 'N', value_delimiter = ',')]
    copies: Vec<i64>,
    /// Counter rate convention.
    #[arg(long)]
    convention: Option<String>,
    /// `z1:z2` pair for the one-step identity; repeatable.
    #[arg(long)]
    z: Vec<String>,
    /// `n:N` schedule point; repeatable.
    #[arg(long)]
    schedule: Vec<String>,
    /// Counter-delay draws for the growth experiment.
    #[arg(long)]
    delay_samples: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// One-step identity: reciprocals of both updates are Exp(z1 + z2).
    IdentityEq1(Preset),
    /// T(m, n) against log Z(m, n) at gamma = 1.
    Theorem1Match(Preset),
    /// Scaled T(n, n) against Tracy-Widom GUE.
    Corollary1Fluctuations(Preset),
    /// Normalized multi-edge corner values against Gumbel LPP.
    MultiedgeConvergence(Preset),
    /// Counter growth first-passage times against multi-edge LPP.
    GrowthEquivalence(Preset),
    /// Scaled multi-edge statistics along (n, N) schedules, data only.
    ConjectureSchedule(Preset),
    /// Write a table of F_GUE(r).
    TwTable {
        #[arg(long, default_value_t = -8.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct Preset {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    model: ModelArgs,
}

fn preset(kind: ExperimentKind) -> ExperimentConfig {
    let (samples, mut cfg) = match kind {
        ExperimentKind::IdentityEq1 => (100_000, None),
        ExperimentKind::Theorem1Match => (50_000, Some(vec![2, 5, 10])),
        ExperimentKind::Corollary1Fluctuations => (10_000, None),
        ExperimentKind::MultiedgeConvergence => (50_000, Some(vec![3])),
        ExperimentKind::GrowthEquivalence => (20_000, Some(vec![4])),
        ExperimentKind::ConjectureSchedule => (10_000, None),
    };
    let mut c = ExperimentConfig::new(kind, samples, 1);
    c.model.m = cfg.take().map(OneOrMany::from);
    match kind {
        ExperimentKind::IdentityEq1 => c.model.z = Some(vec![[1.0, 1.0], [0.3, 2.7]]),
        ExperimentKind::Corollary1Fluctuations => c.model.n = Some(vec![64, 128, 256].into()),
        ExperimentKind::MultiedgeConvergence => c.model.copies = Some(vec![10, 100, 1000].into()),
        ExperimentKind::GrowthEquivalence => {
            c.model.copies = Some(OneOrMany::One(5));
            c.model.delay_samples = Some(100_000);
        }
        ExperimentKind::ConjectureSchedule => c.model.schedule = Some(vec![[16, 10], [32, 100], [64, 1000]]),
        _ => {}
    }
    c
}

fn pair<T: std::str::FromStr>(s: &str, what: &str) -> Result<[T; 2]> {
    let bad = || gumbel_lpp::Error::Input(format!("{what} `{s}` must look like a:b"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok([a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?])
}

fn apply_model(cfg: &mut ExperimentConfig, args: &ModelArgs) -> Result<()> {
    let list = |v: &Vec<i64>| (!v.is_empty()).then(|| OneOrMany::Many(v.clone()));
    if !(args.m.is_empty() && args.n.is_empty()) {
        cfg.model.m = list(&args.m);
        cfg.model.n = list(&args.n);
    }
    if let Some(c) = list(&args.copies) {
        cfg.model.copies = Some(c);
    }
    if let Some(c) = &args.convention {
        cfg.model.convention = c.parse::<RateConvention>()?;
    }
    if !args.z.is_empty() {
        cfg.model.z = Some(args.z.iter().map(|s| pair(s, "z")).collect::<Result<_>>()?);
    }
    if !args.schedule.is_empty() {
        cfg.model.schedule = Some(args.schedule.iter().map(|s| pair(s, "schedule")).collect::<Result<_>>()?);
    }
    if args.delay_samples.is_some() {
        cfg.model.delay_samples = args.delay_samples;
    }
    Ok(())
}

fn apply_common(cfg: &mut ExperimentConfig, c: &Common) {
    if let Some(s) = c.seed {
        cfg.experiment.master_seed = s;
    }
    if let Some(s) = c.samples {
        cfg.experiment.samples = s;
    }
    if let Some(a) = c.alpha {
        cfg.experiment.alpha = a;
    }
    if c.out.is_some() {
        cfg.experiment.output_dir = c.out.clone();
    }
}

fn print_report(r: &ExperimentReport) {
    println!("{} (seed {}, {} samples)", r.experiment.name(), r.config.experiment.master_seed, r.config.experiment.samples);
    for case in &r.cases {
        for t in &case.tests {
            let verdict = match t.pass {
                Some(true) => "pass",
                Some(false) => "REJECT",
                None => "-",
            };
            println!(
                "  {:<16} {:<36} D = {:.5}  p = {:.4}  {verdict}",
                case.label, t.name, t.ks.statistic, t.ks.p_value
            );
        }
    }
    for c in &r.checks {
        println!("  check {:<40} {}  ({})", c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
    }
    println!("  wall clock {:.2} s", r.wall_clock_seconds);
}

fn execute(cfg: ExperimentConfig, threads: Option<usize>) -> Result<bool> {
    let report = match threads {
        Some(t) => run_with_threads(&cfg, t)?,
        None => run(&cfg)?,
    };
    print_report(&report);
    if let Some(dir) = &cfg.experiment.output_dir {
        let files = emit_report(std::slice::from_ref(&report), dir)?;
        println!("  wrote {} files to {}", files.len(), dir.display());
    }
    Ok(report.all_pass())
}

fn main_inner(cli: Cli) -> Result<bool> {
    let (kind, preset_args) = match cli.command {
        Command::Run { config, common } => {
            let mut cfg = load_config(&config)?;
            apply_common(&mut cfg, &common);
            return execute(cfg, common.threads);
        }
        Command::TwTable { from, to, step, out } => {
            if !(step > 0.0 && to >= from) {
                return Err(gumbel_lpp::Error::Input("need from <= to and step > 0".into()));
            }
            let count = ((to - from) / step + 1e-9).floor() as usize + 1;
            let grid: Vec<f64> = (0..count).map(|k| from + k as f64 * step).collect();
            TwEvaluator::default().write_table(&grid, &out)?;
            println!("wrote {} rows to {}", grid.len(), out.display());
            return Ok(true);
        }
        Command::IdentityEq1(p) => (ExperimentKind::IdentityEq1, p),
        Command::Theorem1Match(p) => (ExperimentKind::Theorem1Match, p),
        Command::Corollary1Fluctuations(p) => (ExperimentKind::Corollary1Fluctuations, p),
        Command::MultiedgeConvergence(p) => (ExperimentKind::MultiedgeConvergence, p),
        Command::GrowthEquivalence(p) => (ExperimentKind::GrowthEquivalence, p),
        Command::ConjectureSchedule(p) => (ExperimentKind::ConjectureSchedule, p),
    };
    let mut cfg = preset(kind);
    apply_model(&mut cfg, &preset_args.model)?;
    apply_common(&mut cfg, &preset_args.common);
    execute(cfg, preset_args.common.threads)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
