//! Browser bindings. Each export takes plain strings and numbers and returns JSON.
//!
//! The `*_json` functions hold the logic and are usable from native Rust; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use lucky13::{
    darroch_mode, exact_pmf, joint_recommend, recommend, Bet, LuckyRange, Pmf13, QuestionProfile, Recommendation,
    ReplayFile, TrajectoryPoint, UtilityFunction,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const CASE_B: &str = include_str!("../../core/fixtures/case_b.json");
const CASE_C: &str = include_str!("../../core/fixtures/case_c.json");

#[derive(Serialize)]
struct RangeMass {
    range: LuckyRange,
    probability: f64,
}

#[derive(Serialize)]
struct Exploration {
    pmf: Pmf13,
    ranges: Vec<RangeMass>,
    mean: f64,
    argmax: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    darroch_modes: Option<Vec<u8>>,
    recommendation: Recommendation,
    joint: Recommendation,
}

fn explore(profile: QuestionProfile, utility: &str) -> Result<String, String> {
    let utility: UtilityFunction = utility.parse().map_err(|e: lucky13::Error| e.to_string())?;
    let pmf = exact_pmf(&profile);
    let darroch_modes = match &profile {
        QuestionProfile::Probabilities(p) => Some(darroch_mode(p).map_err(|e| e.to_string())?.modes),
        QuestionProfile::Categories { .. } => None,
    };
    let out = Exploration {
        ranges: LuckyRange::ALL
            .into_iter()
            .map(|range| RangeMass { range, probability: pmf.range_probability(range) })
            .collect(),
        mean: profile.mean(),
        argmax: pmf.argmax(),
        darroch_modes,
        recommendation: recommend(&pmf, &utility),
        joint: joint_recommend(&pmf),
        pmf,
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Distribution and recommendations for a Sure/Unsure/Guess profile.
pub fn explore_profile_json(sure: u8, unsure: u8, guess: u8, utility: &str) -> Result<String, String> {
    explore(QuestionProfile::categories(sure, unsure, guess).map_err(|e| e.to_string())?, utility)
}

/// Same for 13 comma- or space-separated per-question probabilities; adds Darroch's mode set.
pub fn explore_probabilities_json(probs: &str, utility: &str) -> Result<String, String> {
    let p = probs
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| format!("'{s}' is not a number")))
        .collect::<Result<Vec<f64>, String>>()?;
    explore(QuestionProfile::probabilities(p).map_err(|e| e.to_string())?, utility)
}

#[derive(Serialize)]
struct OfferView {
    after_reveal: usize,
    offer: f64,
    continuation_value: f64,
    advice: lucky13::Advice,
    margin: f64,
}

#[derive(Serialize)]
struct ReplayView {
    bet: Bet,
    trajectory: Vec<TrajectoryPoint>,
    offers: Vec<OfferView>,
    #[serde(skip_serializing_if = "Option::is_none")]
    what_if_bet: Option<Bet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    what_if: Option<Vec<TrajectoryPoint>>,
    realized_payoff: Option<f64>,
}

/// Trajectory of a replay file, plus the same history under `what_if` when it is non-empty.
pub fn replay_json(file: &str, what_if: &str) -> Result<String, String> {
    let file = ReplayFile::from_json(file).map_err(|e| e.to_string())?;
    let outcome = file.run().map_err(|e| e.to_string())?;
    let alt = match what_if.trim() {
        "" => None,
        b => Some(b.parse::<Bet>().map_err(|e| e.to_string())?),
    };
    let view = ReplayView {
        bet: file.bet,
        offers: outcome
            .offers
            .iter()
            .map(|o| OfferView {
                after_reveal: o.after_reveal,
                offer: o.evaluation.offer,
                continuation_value: o.evaluation.continuation_value,
                advice: o.evaluation.advice,
                margin: o.evaluation.margin,
            })
            .collect(),
        what_if: alt.map(|b| outcome.state.what_if(b)),
        what_if_bet: alt,
        realized_payoff: outcome.state.realized_payoff(),
        trajectory: outcome.trajectory,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// Bundled replay files: `case_b` and `case_c`.
pub fn bundled_replay_source(name: &str) -> Result<&'static str, String> {
    match name {
        "case_b" => Ok(CASE_B),
        "case_c" => Ok(CASE_C),
        other => Err(format!("no bundled replay '{other}'")),
    }
}

#[wasm_bindgen(js_name = exploreProfile)]
pub fn explore_profile(sure: u8, unsure: u8, guess: u8, utility: &str) -> Result<String, JsError> {
    explore_profile_json(sure, unsure, guess, utility).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = exploreProbabilities)]
pub fn explore_probabilities(probs: &str, utility: &str) -> Result<String, JsError> {
    explore_probabilities_json(probs, utility).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = replay)]
pub fn replay(file: &str, what_if: &str) -> Result<String, JsError> {
    replay_json(file, what_if).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = bundledReplay)]
pub fn bundled_replay(name: &str) -> Result<String, JsError> {
    bundled_replay_source(name).map(str::to_string).map_err(|e| JsError::new(&e))
}
