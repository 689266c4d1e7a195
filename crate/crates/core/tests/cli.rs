use std::path::PathBuf;
use std::process::{Command, Output};

fn nlocal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlocal"))
        .args(args)
        .env_remove("NLOCAL_SEED")
        .output()
        .expect("binary runs")
}

fn network(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("networks")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn analyze_reports_closed_form() {
    let out = nlocal(&["analyze", &network("star3_one_separable.json")]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["topology"], "star");
    assert!((report["B"].as_f64().unwrap() - 1.013316726369148).abs() < 1e-12);
    assert_eq!(report["violation"], true);
    assert_eq!(report["separable_sources"], 1);
}

#[test]
fn analyze_output_reads_back_as_network() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("report.json");
    let second = dir.path().join("again.json");
    let path = network("star5_werner034.json");
    assert!(nlocal(&["analyze", &path, "--out", first.to_str().unwrap()]).status.success());
    assert!(nlocal(&["analyze", first.to_str().unwrap(), "--out", second.to_str().unwrap()]).status.success());
    let read = |p: &PathBuf| -> serde_json::Value { serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap() };
    let (a, b) = (read(&first), read(&second));
    assert!((a["B"].as_f64().unwrap() - b["B"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn campaign_csv_is_byte_identical_for_a_seed() {
    let args = ["campaign", "--claim", "thm4", "--n", "3", "--trials", "50", "--seed", "11", "--format", "csv"];
    let (a, b) = (nlocal(&args), nlocal(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 51);
    let other = nlocal(&["campaign", "--claim", "thm4", "--n", "3", "--trials", "50", "--seed", "12", "--format", "csv"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn seed_can_come_from_environment() {
    let args = ["campaign", "--claim", "thm1", "--n", "2", "--trials", "5", "--format", "csv"];
    let flag = Command::new(env!("CARGO_BIN_EXE_nlocal"))
        .args(args)
        .args(["--seed", "99"])
        .output()
        .unwrap();
    let env = Command::new(env!("CARGO_BIN_EXE_nlocal"))
        .args(args)
        .env("NLOCAL_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn campaign_violations_exit_with_two() {
    let out = nlocal(&["campaign", "--claim", "thm5", "--n", "3", "--trials", "1", "--network", &network("star3_one_separable.json")]);
    // A separable source makes the claim inapplicable.
    assert_eq!(out.status.code(), Some(0));

    let out = nlocal(&["campaign", "--claim", "thm5", "--n", "5", "--trials", "1", "--network", &network("star5_werner034.json")]);
    assert_eq!(out.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn sweep_regions_and_frontier_emit_csv() {
    let out = nlocal(&["sweep", "--n", "3,4", "--v-grid", "0:1:0.25", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,v,V,b_linear,b_star,m_linear,m_star,delta_n,delta_printed\n"));
    assert_eq!(text.lines().count(), 11);

    let out = nlocal(&["regions", "--topology", "linear", "--n", "2", "--resolution", "4", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().count(), 26);

    let out = nlocal(&["frontier", "--n", "3", "--resolution", "10", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().count(), 23);
}

#[test]
fn optimize_reaches_bell_value() {
    let out = nlocal(&["optimize", "--network", &network("bellpair2.json"), "--starts", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(v["converged"], true);
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"topology":"star","sources":[{"family":"werner","vv":0.3}]}"#).unwrap();
    let out = nlocal(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = nlocal(&["analyze", "/nonexistent/net.json"]);
    assert_eq!(out.status.code(), Some(1));
    let out = nlocal(&["campaign", "--claim", "thm9", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(nlocal(&["--help"]).status.success());
}

#[test]
fn families_lists_descriptors() {
    let out = nlocal(&["families"]);
    let text = stdout(&out);
    assert!(text.contains(r#"{"family":"werner","v":0.8}"#));
    assert!(text.contains("mixed-ginibre"));
}
