use std::process::Command;

fn entrocon(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_entrocon")).args(args).output().expect("binary runs")
}

fn stdout(o: &std::process::Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analytic_noiseless_run() {
    let o = entrocon(&["run", "--states", "all", "--mode", "analytic", "--noise", "none"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 26);
    for r in &rows {
        assert!((r[13].parse::<f64>().unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(&r[15], "");
    }
}

#[test]
fn single_state_json() {
    let o = entrocon(&["run", "--states", "Psi1", "--format", "json", "--shots", "2000", "--resamples", "100"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["state"], "Psi1");
    assert_eq!(rows[0]["terms"].as_array().unwrap().len(), 6);
    assert!(rows[0]["sd_violation"].as_f64().unwrap() > 0.0);
    assert_eq!(v["provenance"]["shots"], 2000);
}

#[test]
fn summary_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = entrocon(&["run", "--states", "Psi1,rho16", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("SD-of-violation min"), "{err}");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().filter(|l| !l.starts_with('#')).count(), 3);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "states = [\"Psi2\"]\nmode = \"analytic\"\nnoise = \"none\"\nformat = \"json\"\n").unwrap();
    let o = entrocon(&["run", "--states", "all", "--format", "csv", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["provenance"]["mode"], "analytic");
}

#[test]
fn invalid_input_exits_nonzero() {
    for args in [
        &["run", "--states", "Psi0"][..],
        &["run", "--noise", "gauss:1"],
        &["run", "--shots", "0"],
        &["run", "--resamples", "10"],
        &["verify", "everything"],
    ] {
        let o = entrocon(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_commands() {
    let o = entrocon(&["verify", "contexts"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.trim_end().ends_with("+1  ok")).count(), 5);
    assert!(text.lines().any(|l| l.contains("{alpha,beta,gamma}") && l.contains("-1  ok")));

    let o = entrocon(&["verify", "classical"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("16/16 assignments pass"));

    let o = entrocon(&["verify", "optics"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for row in ["a          +1", "a          -1", "B          +1", "B          -1"] {
        assert!(text.lines().any(|l| l.starts_with(row) && l.ends_with("pass")), "{row}");
    }
    assert!(text.contains("18/18 settings pass"));
}

#[test]
fn states_list() {
    let o = entrocon(&["states", "list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 26);
    assert!(text.starts_with("Psi1"));
    assert!(text.lines().last().unwrap().starts_with("rho26"));
}
