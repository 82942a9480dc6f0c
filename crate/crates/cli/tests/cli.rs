use std::path::PathBuf;
use std::process::{Command, Output};

fn lucky13(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lucky13"))
        .args(args)
        .env_remove("LUCKY13_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name).to_string_lossy().into_owned()
}

fn halves() -> String {
    vec!["0.5"; 13].join(",")
}

#[test]
fn tables_two_both_text_has_fourteen_rows() {
    let o = lucky13(&["tables", "--model", "two", "--utility", "both", "--format", "text"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 15);
    assert!(out.lines().nth(11).unwrap().contains("13"));
}

#[test]
fn tables_three_winnings_csv_has_105_rows() {
    let o = lucky13(&["tables", "--model", "three", "--utility", "winnings", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("s,u,g,range,number,win_prob,expected_winnings,ties"));
    assert_eq!(lines.count(), 105);
    assert!(out.contains("\n3,8,2,10-12,10,"));
}

#[test]
fn tables_bad_utility_is_usage_error() {
    let o = lucky13(&["tables", "--model", "two", "--utility", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lucky13(&["tables", "--model", "five"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn advise_contestant_z() {
    let o = lucky13(&["advise", "--sure", "10", "--unsure", "2", "--guess", "1", "--utility", "winprob"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("range: 10-12\n"));
    assert!(out.contains("number: 12\n"));
}

#[test]
fn advise_probabilities_reports_mean_modes_and_tie() {
    let o = lucky13(&["advise", "--probs", &halves(), "--utility", "winprob"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("range: 7-9\nnumber: 7\n"));
    assert!(out.contains("ties: 4-6/6"));
    assert!(out.contains("mean: 6.5000"));
    assert!(out.contains("darroch modes: {6,7}"));
}

#[test]
fn advise_json_output() {
    let o = lucky13(&["advise", "--sure", "3", "--unsure", "8", "--guess", "2", "--utility", "winnings", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["range"], "10-12");
    assert_eq!(v["number"], 10);
}

#[test]
fn advise_bad_profiles_are_usage_errors() {
    for args in [
        vec!["advise", "--sure", "7", "--unsure", "7", "--guess", "0"],
        vec!["advise", "--probs", "0.9,0.9"],
        vec!["advise"],
        vec!["advise", "--sure", "13", "--utility", "nope"],
    ] {
        let o = lucky13(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = lucky13(&["advise", "--sure", "7", "--unsure", "7", "--guess", "0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum to 14"));
}

#[test]
fn replay_case_b() {
    let o = lucky13(&["replay", &fixture("case_b.json")]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "reveal_index,correct_so_far,expected_winnings,range_prob,number_prob");
    assert!(lines[1].starts_with("0,0,68665.41,"));
    assert!(lines[10].starts_with("9,9,85156.25,"));
    let offer = lines.iter().find(|l| l.starts_with("# offer")).unwrap();
    assert!(offer.contains("after reveal 9"));
    assert!(offer.contains("reject"));
    assert!(offer.contains("margin -$45156.25"));
}

#[test]
fn replay_case_c_what_if() {
    let o = lucky13(&["replay", &fixture("case_c.json"), "--what-if", "10-12/10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    let initial: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();
    assert!((initial - 37_210.0).abs() <= 1.0);
    assert!(rows.last().unwrap().starts_with("13,10,125000.00,"));
}

#[test]
fn replay_empty_reveals_gives_one_point() {
    let dir = std::env::temp_dir().join(format!("lucky13-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.json");
    std::fs::write(&path, r#"{"profile":{"s":3,"u":8,"g":2},"bet":{"range":"10-12","number":11},"reveals":[]}"#).unwrap();
    let o = lucky13(&["replay", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn replay_missing_file_is_runtime_error() {
    let o = lucky13(&["replay", "/no/such/file.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn simulate_contestant_z() {
    let args = ["simulate", "--sure", "10", "--unsure", "2", "--guess", "1", "--trials", "10000", "--seed", "42"];
    let a = lucky13(&args);
    assert!(a.status.success());
    let out = stdout(&a);
    let last = out.lines().last().unwrap();
    let freq: f64 = last.strip_prefix("13,").unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((freq - 9.0 / 32.0).abs() < 0.015);
    assert_eq!(lucky13(&args).stdout, a.stdout);
}

#[test]
fn simulate_seed_from_environment() {
    let args = ["simulate", "--sure", "3", "--unsure", "8", "--guess", "2", "--trials", "500"];
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_lucky13")).args(args).env("LUCKY13_SEED", seed).output().unwrap().stdout
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    let explicit = lucky13(&[&args[..], &["--seed", "5"]].concat()).stdout;
    assert_eq!(explicit, run("5"));
}

#[test]
fn simulate_zero_trials_is_usage_error() {
    let o = lucky13(&["simulate", "--sure", "10", "--unsure", "2", "--guess", "1", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn population_mode() {
    let o = lucky13(&["population", "--trials", "10000", "--seed", "7"]);
    assert!(o.status.success());
    let counts: Vec<u64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let mode = (0..counts.len()).max_by_key(|k| counts[*k]).unwrap();
    assert!((6..=8).contains(&mode), "mode {mode}");
}

#[test]
fn population_custom_model() {
    let dir = std::env::temp_dir().join(format!("lucky13-pop-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    std::fs::write(&path, r#"[{"name":"A","probability":1},{"name":"Other","probability":1}]"#).unwrap();
    let o = lucky13(&["population", "--model", path.to_str().unwrap(), "--trials", "200", "--weighted"]);
    assert!(o.status.success());
    std::fs::write(&path, "not json").unwrap();
    let o = lucky13(&["population", "--model", path.to_str().unwrap(), "--trials", "200"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}
