use std::process::{Command, Output};

use skewinfo::scenarios::{from_csv, to_csv};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewinfo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn example1_header_and_rows() {
    let o = run(&["example1", "--theta-steps", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,sum,var_sum,thm1,ren_obs,var_thm1,var_ren,thm1_witness,var_thm1_witness"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn csv_round_trip_is_exact() {
    let text = stdout(&run(&["example2", "--theta-steps", "7", "--q", "0.3"]));
    let rows = from_csv(&text).unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(to_csv(&rows).unwrap(), text);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(
        &cfg,
        "scenario = \"custom\"\nfamily = \"unitaries\"\nmetric = { kind = \"wyd\", alpha = 0.4 }\n\
         theta_grid = { start = 0.0, stop = 1.0, steps = 3 }\n",
    )
    .unwrap();
    let out = dir.path().join("out.json");
    let o = run(&[
        "custom",
        "--config",
        cfg.to_str().unwrap(),
        "--theta-steps",
        "4",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[3]["theta"], 1.0);
    assert!(rows[0].get("lb3u").is_some());
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(run(&["example1", "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["example1", "--theta-steps", "1"]).status.code(), Some(1));
    assert_eq!(run(&["example2", "--q", "1"]).status.code(), Some(1));
    assert_eq!(run(&["example1", "--family", "channels"]).status.code(), Some(1));
    assert_eq!(run(&["example1", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(run(&["example2", "--perm-limit", "1"]).status.code(), Some(1));
    assert_eq!(run(&["fuzz", "--dims", "1"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "alpha = 0.3\n").unwrap();
    assert_eq!(run(&["example1", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    std::fs::write(&cfg, "scenario = \"example3\"\n").unwrap();
    assert_eq!(run(&["example1", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["example1", "--config", "/nonexistent.toml"]).status.code(), Some(1));
}

#[test]
fn fuzz_is_clean_and_seeded() {
    let a = run(&["fuzz", "--trials", "50", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    assert!(text.starts_with("# seed=42 trials=50"));
    assert!(text.contains("violations=0"));
    assert_eq!(stdout(&run(&["fuzz", "--trials", "50", "--seed", "42"])), text);
    let pure = run(&["fuzz", "--trials", "30", "--pure", "--dims", "2,3", "--format", "json"]);
    assert_eq!(pure.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&pure)).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn sweeps_are_byte_identical() {
    for cmd in ["example1", "example2", "example3"] {
        let a = run(&[cmd, "--theta-steps", "33"]);
        let b = run(&[cmd, "--theta-steps", "33"]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}
