use std::path::PathBuf;
use std::process::{Command, Output};

fn inqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_inqc"))
        .args(args)
        .env_remove("INQC_SEED")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn estimate_example() {
    let o = inqc(&["estimate", "--circuit", &data("example.qc")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "epr=4 nlb=1 bits_ab=3 bits_ba=2\n");

    let o = inqc(&["estimate", "--circuit", &data("example.qc"), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["epr"], 4);
    assert_eq!(v["nlb"], 1);
}

#[test]
fn run_json_is_deterministic() {
    let args = [
        "run",
        "--circuit",
        &data("example.qc"),
        "--seed",
        "7",
        "--json",
    ];
    let a = inqc(&args);
    let b = inqc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["audit"]["passed"], true);
    assert_eq!(v["resources"]["exact"], true);
    assert!(v["oracle_fidelity_min"].as_f64().unwrap() > 1.0 - 1e-9);
    assert_eq!(v["phase_log"].as_array().unwrap().len(), 5);
    assert_eq!(v["keys_final"].as_array().unwrap().len(), 3);
}

#[test]
fn seed_from_environment() {
    let flag = inqc(&[
        "run",
        "--circuit",
        &data("example.qc"),
        "--seed",
        "19",
        "--json",
    ]);
    let env = Command::new(env!("CARGO_BIN_EXE_inqc"))
        .args(["run", "--circuit", &data("example.qc"), "--json"])
        .env("INQC_SEED", "19")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn forced_outcomes_show_in_transcript() {
    // Bob's two input teleports take four bits, the gadget takes c then d.
    let o = inqc(&[
        "run",
        "--circuit",
        &data("example.qc"),
        "--force-outcomes",
        "000011",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let g = &v["transcript"]["gadgets"][0];
    assert_eq!(
        (g["c"].as_bool(), g["d"].as_bool()),
        (Some(true), Some(true))
    );
}

#[test]
fn impossible_forced_outcome_is_usage_error() {
    let dir = std::env::temp_dir().join(format!("inqc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero.qc");
    std::fs::write(&path, "wires 1\nowner 0 A\nout 0 A classical\n").unwrap();
    let o = inqc(&[
        "run",
        "--circuit",
        path.to_str().unwrap(),
        "--force-outcomes",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_error_reports_line() {
    let dir = std::env::temp_dir().join(format!("inqc-cli-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.qc");
    std::fs::write(&path, "wires 1\nowner 0 A\nout 0 A\nH 3\n").unwrap();
    let o = inqc(&["run", "--circuit", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn usage_errors() {
    assert_eq!(inqc(&[]).status.code(), Some(2));
    assert_eq!(inqc(&["run"]).status.code(), Some(2));
    assert_eq!(inqc(&["sweep", "--tolerance", "2"]).status.code(), Some(2));
    assert_eq!(inqc(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_and_sweep() {
    let o = inqc(&[
        "verify",
        "--circuit",
        &data("single_output.qc"),
        "--trials",
        "5",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], 5);

    let o = inqc(&[
        "sweep",
        "--trials",
        "10",
        "--seed",
        "4",
        "--max-wires",
        "3",
        "--max-gates",
        "12",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_passed"], true);
    for run in v["runs"].as_array().unwrap() {
        assert!(run["wires"].as_u64().unwrap() <= 3);
        assert!(run["gates"].as_u64().unwrap() <= 12);
    }
}
