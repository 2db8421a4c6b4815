use std::fs;
use std::process::{Command, Output};

fn metrics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metrics")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SMALL: [&str; 9] =
    ["sweep", "--m", "2", "--delta-min", "0.1", "--delta-max", "0.2", "--steps", "4"];

#[test]
fn csv_header_and_example_row() {
    let mut args = SMALL.to_vec();
    args.extend(["--metrics", "caratheodory"]);
    let o = metrics(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "m,delta,metric,kind,method,value,dir_z_re,dir_z_im,dir_w_re,dir_w_im");
    assert_eq!(lines.next().unwrap(), "2,0.1,caratheodory,exact,hull-mobius,1.5625,1,0,0,0");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn json_output_parses() {
    let mut args = SMALL.to_vec();
    args.extend(["--format", "json"]);
    let o = metrics(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc = invariant_metrics::sweep::parse_json::<f64>(&stdout(&o)).unwrap();
    assert_eq!(doc.records.len(), 20);
    assert!(!doc.fits.is_empty());
    let raw: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dir = &raw["records"][0]["direction"];
    assert_eq!(dir["xi_z"], serde_json::json!([1.0, 0.0]));
    assert_eq!(dir["xi_w"], serde_json::json!([0.0, 0.0]));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("out.csv");
    fs::write(&cfg, "# sweep settings\nm = 3\ndelta_min = 0.1\ndelta-max = 0.2\nsteps = 4\nmetrics = caratheodory\n").unwrap();
    let o = metrics(&["--config", cfg.to_str().unwrap(), "sweep", "--m", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.starts_with("2,")));
}

#[test]
fn invalid_configuration_exits_2() {
    assert_eq!(metrics(&["sweep", "--m", "1"]).status.code(), Some(2));
    assert_eq!(metrics(&["sweep", "--direction", "0,0,0,0"]).status.code(), Some(2));
    assert_eq!(metrics(&["sweep", "--delta-min", "0.5", "--delta-max", "0.1"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_metrics"))
        .args(["point", "--delta", "0.1"])
        .env("METRICS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(metrics(&["--config", cfg.to_str().unwrap(), "sweep"]).status.code(), Some(2));
}

#[test]
fn io_failures_exit_4() {
    let mut args = SMALL.to_vec();
    args.extend(["--metrics", "caratheodory", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(metrics(&args).status.code(), Some(4));
    assert_eq!(metrics(&["--config", "/nonexistent/run.conf", "sweep"]).status.code(), Some(4));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let mut args = SMALL.to_vec();
    args.extend(["--seed", "9"]);
    let one = Command::new(env!("CARGO_BIN_EXE_metrics")).args(&args).env("METRICS_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_metrics")).args(&args).env("METRICS_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn certify_and_point_succeed() {
    let o = metrics(&["certify", "--m", "2", "--delta", "0.001", "--samples", "10000", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    assert_eq!(metrics(&["certify", "--delta", "0.01", "--samples", "10"]).status.code(), Some(2));
    let o = metrics(&["point", "--m", "3", "--delta", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kobayashi"));
}
