use lucky13_wasm::{bundled_replay_source, explore_probabilities_json, explore_profile_json, replay_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn profile_exploration() {
    let v = parse(explore_profile_json(10, 2, 1, "winprob").unwrap());
    assert_eq!(v["pmf"].as_array().unwrap().len(), 14);
    assert_eq!(v["pmf"][13], 9.0 / 32.0);
    assert_eq!(v["recommendation"]["range"], "10-12");
    assert_eq!(v["recommendation"]["number"], 12);
    assert_eq!(v["ranges"][3]["probability"], 23.0 / 32.0);
    assert_eq!(v["joint"]["range"], "13");
    assert!(v.get("darroch_modes").is_none());
}

#[test]
fn probability_exploration() {
    let probs = vec!["0.5"; 13].join(",");
    let v = parse(explore_probabilities_json(&probs, "winprob").unwrap());
    assert_eq!(v["mean"], 6.5);
    assert_eq!(v["darroch_modes"], serde_json::json!([6, 7]));
    assert_eq!(v["argmax"], serde_json::json!([6, 7]));
    assert_eq!(v["recommendation"]["number"], 7);
    let spaced = vec!["0.5"; 13].join(" ");
    assert_eq!(explore_probabilities_json(&spaced, "winprob").unwrap(), explore_probabilities_json(&probs, "winprob").unwrap());
}

#[test]
fn bad_inputs_are_errors() {
    assert!(explore_profile_json(7, 7, 0, "winprob").unwrap_err().contains("14"));
    assert!(explore_profile_json(3, 8, 2, "bogus").is_err());
    assert!(explore_probabilities_json("0.9,x", "winprob").unwrap_err().contains("'x'"));
    assert!(explore_probabilities_json("0.9,0.9", "winprob").is_err());
    assert!(replay_json("{}", "").is_err());
    assert!(replay_json(bundled_replay_source("case_b").unwrap(), "7-9/10").is_err());
    assert!(bundled_replay_source("case_z").is_err());
}

#[test]
fn replay_case_b() {
    let v = parse(replay_json(bundled_replay_source("case_b").unwrap(), "").unwrap());
    let t = v["trajectory"].as_array().unwrap();
    assert_eq!(t.len(), 14);
    assert_eq!(t[9]["expected_winnings"], 85156.25);
    assert_eq!(v["offers"][0]["advice"], "reject");
    assert!(v.get("what_if").is_none());
}

#[test]
fn replay_case_c_with_what_if() {
    let v = parse(replay_json(bundled_replay_source("case_c").unwrap(), "10-12/10").unwrap());
    assert_eq!(v["realized_payoff"], 0.0);
    let alt = v["what_if"].as_array().unwrap();
    assert!((alt[0]["expected_winnings"].as_f64().unwrap() - 37_210.0).abs() < 1.0);
    assert_eq!(alt[13]["expected_winnings"], 125000.0);
    assert_eq!(v["what_if_bet"]["number"], 10);
}
