use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gumbel-lpp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const THEOREM1: &str = "\
[experiment]
name = \"theorem1_match\"
samples = 3000
master_seed = 42

[model]
m = [2, 4]
";

#[test]
fn run_config_writes_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), THEOREM1);
    let out_dir = dir.path().join("out");
    let out = cli(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("m4_n4"));
    for f in ["manifest.json", "theorem1_match/report.json", "theorem1_match/config.toml", "theorem1_match/data/m2_n2_cdf.csv"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("theorem1_match/report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["experiment"]["master_seed"], 42);
    assert_eq!(report["cases"].as_array().unwrap().len(), 2);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), THEOREM1);
    let out = cli(&["run", &cfg, "--seed", "7", "--samples", "500"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("seed 7, 500 samples"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &THEOREM1.replace("samples", "samles"));
    let out = cli(&["run", &cfg]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("samles") && err.contains("line 3"), "{err}");

    let out = cli(&["corollary1-fluctuations", "--n", "1", "--samples", "10"]);
    assert_eq!(code(&out), 2);
    assert!(cli(&["run", "/nonexistent/x.toml"]).status.code() == Some(2));
}

#[test]
fn rejection_exits_with_one() {
    // Under the 1/(N-i) rates the counter delay is far from the max of N
    // exponentials, so the growth comparison must reject.
    let out = cli(&[
        "growth-equivalence",
        "--samples",
        "2000",
        "--convention",
        "rate_inverse_N_minus_i",
        "-N",
        "4",
        "--m",
        "2",
    ]);
    assert_eq!(code(&out), 1, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("REJECT"));
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let mut dirs = Vec::new();
    for threads in ["1", "3"] {
        let out_dir = dir.path().join(format!("t{threads}"));
        let out = cli(&[
            "multiedge-convergence",
            "--samples",
            "3000",
            "-N",
            "10,100",
            "--threads",
            threads,
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(matches!(code(&out), 0 | 1));
        dirs.push(out_dir);
    }
    let data = Path::new("multiedge_convergence/data");
    let mut names: Vec<_> = std::fs::read_dir(dirs[0].join(data))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 5);
    for name in names {
        let a = std::fs::read(dirs[0].join(data).join(&name)).unwrap();
        let b = std::fs::read(dirs[1].join(data).join(&name)).unwrap();
        assert_eq!(a, b, "{name:?}");
    }
    // The manifest embeds the config, including its own output directory.
    let manifest = |d: &Path| {
        std::fs::read_to_string(d.join("manifest.json"))
            .unwrap()
            .replace(d.to_str().unwrap(), "OUT")
    };
    assert_eq!(manifest(&dirs[0]), manifest(&dirs[1]));
}

#[test]
fn tracy_widom_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tw.csv");
    let out = cli(&["tw-table", "--from", "-4", "--to", "2", "--step", "0.5", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 14);
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last > 0.99);
}
