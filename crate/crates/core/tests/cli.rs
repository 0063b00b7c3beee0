use std::path::Path;
use std::process::{Command, Output};

fn chanvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chanvar")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn uncertainty_json_for_werner_under_basis_channel() {
    let o = chanvar(&[
        "uncertainty",
        "--state",
        "preset:werner:p=0.5",
        "--channel",
        "preset:basis_channel:d=4",
        "--alpha",
        "0.2",
        "--beta",
        "0.3",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let (total, q, c) = (v["V"].as_f64().unwrap(), v["Q"].as_f64().unwrap(), v["C"].as_f64().unwrap());
    assert!((total - q - c).abs() < 1e-12);
    assert!(q > 0.0 && c > 0.0);
}

#[test]
fn bounds_text_reports_every_bound() {
    let o = chanvar(&[
        "bounds",
        "--state",
        "preset:werner:p=0.75",
        "--channel",
        "preset:measurement:d=4",
        "--alpha",
        "0.2",
        "--beta",
        "0.3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in ["fidelity_tradeoff", "entropy_exchange_bound", "coherent_information_bound", "quantum_fano"] {
        assert!(text.contains(&format!("{name}: ")), "{text}");
    }
    assert!(!text.contains("VIOLATED"));
}

#[test]
fn matrix_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "s.json", r#"{"matrix": [[0.75, 0], [0, 0.25]]}"#);
    let channel = write(
        dir.path(),
        "c.json",
        r#"{"kraus": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}"#,
    );
    let o = chanvar(&["uncertainty", "--state", &state, "--channel", &channel, "--alpha", "0.5", "--beta", "0.5", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // Projective measurement on a diagonal state: V = 1 - sum p^2.
    assert!((v["V"].as_f64().unwrap() - 0.375).abs() < 1e-12);
}

#[test]
fn sweep_figure_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig1.csv");
    let o = chanvar(&["sweep", "--figure", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "family_param,alpha,beta,V,Q,C");
    assert_eq!(lines.count(), 101);
    assert!(!csv.contains('\r'));
}

#[test]
fn sweep_spec_file_with_values_grid() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"family": "isotropic", "channel": "preset:basis_channel:d=4", "param": {"values": [0.0, 1.0]},
            "alpha": {"values": [0.2]}, "beta": {"values": [0.3]}, "outputs": ["V", "Fe"]}"#,
    );
    let o = chanvar(&["sweep", "--spec", &spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn empty_grid_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "spec.json",
        r#"{"family": "werner", "channel": "preset:basis_channel:d=4", "param": {"values": []},
            "alpha": {"values": [0.2]}, "beta": {"values": [0.3]}}"#,
    );
    assert_eq!(chanvar(&["sweep", "--spec", &spec]).status.code(), Some(2));
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let state = write(dir.path(), "s.json", "{not json");
    let o = chanvar(&["uncertainty", "--state", &state, "--channel", "preset:identity:d=2", "--alpha", "0", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn alpha_beta_out_of_range_is_a_usage_error() {
    let o = chanvar(&[
        "uncertainty", "--state", "preset:mixed:d=2", "--channel", "preset:identity:d=2", "--alpha", "0.8", "--beta", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_trace_preserving_channel_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let channel = write(dir.path(), "c.json", r#"{"kraus": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}"#);
    let o = chanvar(&["uncertainty", "--state", "preset:mixed:d=2", "--channel", &channel, "--alpha", "0", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = chanvar(&["uncertainty", "--state", "/nonexistent/state.json", "--channel", "preset:identity:d=2", "--alpha", "0", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let args = ["verify", "--seed", "5", "--samples", "30", "--dims", "2,3"];
    let a = chanvar(&args);
    let b = chanvar(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| !l.starts_with("FAIL")));
}

#[test]
fn verify_unknown_property_is_a_usage_error() {
    assert_eq!(chanvar(&["verify", "--property", "nope"]).status.code(), Some(2));
}
