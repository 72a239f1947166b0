use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn polygen(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polygen"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

fn data_rows(path: PathBuf) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn simulate_preset_1a_reports_period_15() {
    let dir = TempDir::new().unwrap();
    let out = polygen(dir.path(), &["--preset", "1a", "--steps", "45", "--out", "o", "simulate"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path().join("o/report.json"));
    assert_eq!(report["period"]["set"]["verdict"], "exact-periodic");
    assert_eq!(report["period"]["set"]["period"], 15);
    assert_eq!(report["tolerances"]["period"], 1e-9);
    assert_eq!(report["classification"]["label"], "isochronous");
    let csv = fs::read_to_string(dir.path().join("o/trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# generation 0: unordered zero sets"));
    assert_eq!(lines.next().unwrap(), "ell,t,flag_nongeneric,flag_ambiguous,re_x1,im_x1,re_x2,im_x2");
    assert_eq!(lines.count(), 46);
}

#[test]
fn identity_seed_is_constant() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "id.json",
        r#"{"schema": 1, "seed": {"kind": "affine", "a": [1, 1], "b": [0, 0]},
            "initial": [[[0.3, 0.1], -1]], "steps": 30}"#,
    );
    assert_eq!(code(&polygen(dir.path(), &["--config", &cfg, "--out", "o", "simulate"])), 0);
    let report = json(dir.path().join("o/report.json"));
    assert_eq!(report["period"]["set"]["period"], 1);
    let rows = data_rows(dir.path().join("o/trajectory.csv"));
    assert!(rows.iter().all(|r| r[4..] == rows[0][4..]));
}

#[test]
fn simulate_preset_2b_is_asymptotically_7_periodic() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--preset", "2b", "--steps", "200", "--out", "o", "simulate"])), 0);
    let report = json(dir.path().join("o/report.json"));
    assert_eq!(report["period"]["set"]["verdict"], "asymptotically-periodic");
    assert_eq!(report["period"]["set"]["period"], 7);
    assert_eq!(report["depth"], 1);
}

#[test]
fn verify_presets_pass_and_perturbation_fails() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--preset", "1a", "--out", "a", "verify"])), 0);
    let report = json(dir.path().join("a/verify.json"));
    for check in report["checks"].as_array().unwrap() {
        assert!(check["max_residual"].as_f64().unwrap() <= 1e-9, "{check}");
    }
    assert_eq!(code(&polygen(dir.path(), &["--preset", "4", "--steps", "32", "--out", "b", "verify"])), 0);
    let cfg = write(dir.path(), "neg.json", r#"{"schema": 1, "preset": "1a", "verify": {"perturb_closed_form": 1e-6}}"#);
    let out = polygen(dir.path(), &["--config", &cfg, "--out", "c", "verify"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("mode_equivalence"));
    assert_eq!(json(dir.path().join("c/verify.json"))["passed"], false);
}

#[test]
fn verify_all_presets() {
    let dir = TempDir::new().unwrap();
    let out = polygen(dir.path(), &["--out", "o", "verify", "--all-presets"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(dir.path().join("o/verify.json")).as_array().unwrap().len(), 8);
}

#[test]
fn exit_codes_for_config_and_numerical_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--config", "missing.json", "simulate"])), 2);
    let bad = write(dir.path(), "bad.json", r#"{"schema": 1, "seed": {"kind": "affine", "a": [1], "b": [0, 0]}, "initial": [[1]]}"#);
    assert_eq!(code(&polygen(dir.path(), &["--config", &bad, "simulate"])), 2);
    let version = write(dir.path(), "v.json", r#"{"schema": 7, "preset": "1a"}"#);
    assert_eq!(code(&polygen(dir.path(), &["--config", &version, "simulate"])), 2);
    assert_eq!(code(&polygen(dir.path(), &["reproduce", "9z"])), 2);
    assert_eq!(code(&polygen(dir.path(), &["simulate"])), 2);
    // sigma_2 of x(0) = {0, 1} vanishes: the second-order recursion divides by it.
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"schema": 1, "seed": {"kind": "second-order", "a": [1, 1], "b": [0, 0]},
            "initial": [[0, 1], [2, 3]], "steps": 10}"#,
    );
    let out = polygen(dir.path(), &["--config", &zero, "simulate"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure"));
}

#[test]
fn flags_are_warned_on_stderr() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "double.json",
        r#"{"schema": 1, "seed": {"kind": "affine", "a": [1, 1], "b": [0, 0]}, "initial": [[1, 1]], "steps": 6}"#,
    );
    let out = polygen(dir.path(), &["--config", &cfg, "--out", "o", "simulate"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: non-generic zero set at steps 0"));
    let rows = data_rows(dir.path().join("o/trajectory.csv"));
    assert!(rows.iter().all(|r| r[2] == "1"));
}

fn svg_values(svg: &str, component: usize) -> Vec<(usize, String, String)> {
    let key = format!(r#"data-component="{component}""#);
    let attr = |tag: &str, name: &str| -> String {
        let start = tag.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
        tag[start..].split('"').next().unwrap().to_string()
    };
    svg.lines()
        .filter(|l| l.contains(&key))
        .map(|l| (attr(l, "data-ell").parse().unwrap(), attr(l, "data-re"), attr(l, "data-im")))
        .collect()
}

#[test]
fn reproduce_1a_figures_match_the_data_files() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--out", "o", "reproduce", "1a"])), 0);
    let o = dir.path().join("o");
    for f in ["trajectory.csv", "re.csv", "im.csv", "plane.svg", "reim.svg", "report.json"] {
        assert!(o.join(f).exists(), "{f}");
    }
    let rows = data_rows(o.join("trajectory.csv"));
    assert_eq!(rows.len(), 16);
    let re = data_rows(o.join("re.csv"));
    let im = data_rows(o.join("im.csv"));
    let plane = fs::read_to_string(o.join("plane.svg")).unwrap();
    assert!(plane.contains("<circle") && plane.contains("<polygon"));
    for component in 1..=2 {
        let points = svg_values(&plane, component);
        assert_eq!(points.len(), 16);
        for (ell, x, y) in points {
            assert_eq!(rows[ell][2 + 2 * component], x);
            assert_eq!(rows[ell][3 + 2 * component], y);
            assert_eq!(re[ell][component], x);
            assert_eq!(im[ell][component], y);
        }
    }
    assert_eq!(svg_values(&fs::read_to_string(o.join("reim.svg")).unwrap(), 1).len(), 32);
}

#[test]
fn reproduce_1c_is_contiguity_ordered_and_4_shows_period_8() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--out", "c", "reproduce", "1c"])), 0);
    let csv = fs::read_to_string(dir.path().join("c/trajectory.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("contiguity order"));
    assert_eq!(data_rows(dir.path().join("c/trajectory.csv")).len(), 26);

    assert_eq!(code(&polygen(dir.path(), &["--out", "f", "reproduce", "4"])), 0);
    assert!(!dir.path().join("f/plane.svg").exists());
    let report = json(dir.path().join("f/report.json"));
    assert_eq!(report["detected"]["period"], 8);
    let rows = data_rows(dir.path().join("f/re.csv"));
    assert_eq!(rows.len(), 33);
    for ell in 0..=24 {
        let a: f64 = rows[ell][1].parse().unwrap();
        let b: f64 = rows[ell + 8][1].parse().unwrap();
        assert!((a - b).abs() <= 1e-8, "ell {ell}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "r.json",
        r#"{"schema": 1, "seed": {"kind": "affine", "a": [{"rotation": [1, 3]}, {"rotation": [2, 5]}], "b": [1, 2]},
            "initial": [[[-1, -1], 1]], "ordering": [{"random": 99}, "contiguity"], "steps": 60}"#,
    );
    for out in ["a", "b"] {
        assert_eq!(code(&polygen(dir.path(), &["--config", &cfg, "--out", out, "simulate"])), 0);
        assert_eq!(code(&polygen(dir.path(), &["--config", &cfg, "--out", out, "--format", "json", "simulate"])), 0);
    }
    for f in ["trajectory.csv", "trajectory.json", "report.json"] {
        assert_eq!(fs::read(dir.path().join("a").join(f)).unwrap(), fs::read(dir.path().join("b").join(f)).unwrap(), "{f}");
    }
    let traj = json(dir.path().join("a/trajectory.json"));
    assert_eq!(traj["generation"], 2);
    assert_eq!(traj["states"][0][0].as_array().unwrap().len(), 2);
}

const SWEEP: &str = r#"{"schema": 1, "sweep": {
    "a": [[{"rotation": [1, 3]}, 0.5, 1.1], [{"rotation": [2, 5]}, 0.9]],
    "b": [1, 2], "initial": [[-1, -1], 1]}}"#;

#[test]
fn sweep_rows_agree_and_ignore_thread_count() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "s.json", SWEEP);
    let mut outputs = Vec::new();
    for threads in ["1", "3"] {
        let out = Command::new(env!("CARGO_BIN_EXE_polygen"))
            .current_dir(dir.path())
            .env("POLYGEN_THREADS", threads)
            .args(["--config", &cfg, "--out", threads, "sweep"])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        outputs.push(fs::read(dir.path().join(threads).join("sweep.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    // a = (1/3, 2/5): the parameters of the first example
    assert_eq!(&rows[0][1..3], ["1/3", "2/5"]);
    assert_eq!((rows[0][6], rows[0][8]), ("15", "15"));
    assert!(rows.iter().all(|r| r[10] == "true"), "{text}");
    for r in rows.iter().filter(|r| r[1] == "1.1") {
        assert_eq!(r[7], "divergent");
        assert!(r[9].parse::<f64>().unwrap() > 1e12);
    }
    let out = Command::new(env!("CARGO_BIN_EXE_polygen"))
        .current_dir(dir.path())
        .env("POLYGEN_THREADS", "zero")
        .args(["--config", &cfg, "sweep"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn detect_period_reads_a_trajectory_file() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--preset", "3a", "--out", "o", "simulate"])), 0);
    let out = polygen(dir.path(), &["--out", "d", "detect-period", "--input", "o/trajectory.csv"]);
    assert_eq!(code(&out), 0);
    let report = json(dir.path().join("d/period.json"));
    assert_eq!(report["report"]["period"], 15);
    assert_eq!(report["metric"], "set");
    assert_eq!(code(&polygen(dir.path(), &["--preset", "1b", "--out", "e", "detect-period", "--metric", "ordered"])), 0);
    assert_eq!(json(dir.path().join("e/period.json"))["report"]["period"], 7);
}

#[test]
fn svg_format_writes_both_plots() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&polygen(dir.path(), &["--preset", "1c", "--format", "svg", "--out", "o", "simulate"])), 0);
    let plane = fs::read_to_string(dir.path().join("o/plane.svg")).unwrap();
    assert!(plane.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(!plane.contains("href"));
    assert!(dir.path().join("o/reim.svg").exists());
}
