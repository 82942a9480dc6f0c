//! Seeded Monte Carlo engines.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded with
//! the master seed and its stream id is set to the trial index. Trials are
//! independent of how rayon schedules them, so a histogram depends only on
//! `(seed, trials)` and never on the thread count.

use std::fmt::Write as _;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{QuestionProfile, QUESTIONS};

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(SimConfig { trials, seed })
    }
}

/// The generator for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Counts of simulated correct-answer totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram14 {
    pub counts: [u64; QUESTIONS + 1],
    pub total: u64,
}

impl Histogram14 {
    pub fn empty() -> Self {
        Histogram14 { counts: [0; QUESTIONS + 1], total: 0 }
    }

    pub fn record(&mut self, correct: u8) {
        self.counts[correct as usize] += 1;
        self.total += 1;
    }

    pub fn merge(mut self, other: Histogram14) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.total += other.total;
        self
    }

    pub fn frequency(&self, correct: u8) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts[correct as usize] as f64 / self.total as f64
    }

    pub fn frequencies(&self) -> [f64; QUESTIONS + 1] {
        std::array::from_fn(|k| self.frequency(k as u8))
    }

    pub fn mean(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.iter().enumerate().map(|(k, c)| k as f64 * *c as f64).sum::<f64>() / self.total as f64
    }

    /// Most frequent counts (all of them on a tie).
    pub fn modes(&self) -> Vec<u8> {
        let best = self.counts.iter().copied().max().unwrap_or(0);
        (0..=QUESTIONS as u8).filter(|k| self.counts[*k as usize] == best).collect()
    }

    /// CSV with header `k,count,frequency`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count,frequency\n");
        for k in 0..=QUESTIONS as u8 {
            let _ = writeln!(out, "{},{},{:.4}", k, self.counts[k as usize], self.frequency(k));
        }
        out
    }

    /// Horizontal bar chart, longest bar `width` characters.
    pub fn to_text(&self, width: usize) -> String {
        let max = self.counts.iter().copied().max().unwrap_or(0).max(1);
        let mut out = String::new();
        for k in 0..=QUESTIONS as u8 {
            let c = self.counts[k as usize];
            let bar = "#".repeat((c as f64 / max as f64 * width as f64).round() as usize);
            let _ = writeln!(out, "{k:>2} | {bar:<width$} {c:>7} ({:.4})", self.frequency(k));
        }
        let _ = writeln!(out, "total {}  mean {:.4}", self.total, self.mean());
        out
    }
}

fn histogram_of(config: &SimConfig, trial: impl Fn(&mut ChaCha8Rng) -> u8 + Sync) -> Histogram14 {
    (0..config.trials)
        .into_par_iter()
        .fold(Histogram14::empty, |mut h, i| {
            h.record(trial(&mut trial_rng(config.seed, i)));
            h
        })
        .reduce(Histogram14::empty, Histogram14::merge)
}

/// One draw of the total correct answers for `profile`.
pub fn draw_profile(profile: &QuestionProfile, rng: &mut impl Rng) -> u8 {
    profile.question_probabilities().into_iter().filter(|p| rng.random_bool(*p)).count() as u8
}

pub fn simulate_profile(profile: &QuestionProfile, config: &SimConfig) -> Histogram14 {
    let probs = profile.question_probabilities();
    histogram_of(config, |rng| probs.iter().filter(|p| rng.random_bool(**p)).count() as u8)
}

/// How expertise categories are drawn from the named categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpertiseSampling {
    #[default]
    Uniform,
    /// Proportional to how often each category appears.
    Weighted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionCategory {
    pub name: String,
    pub probability: f64,
}

/// Questions in this category can appear but nobody is an expert in it.
pub const OTHER_CATEGORY: &str = "Other";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationModel {
    categories: Vec<QuestionCategory>,
    pub expertise_trials: u32,
    pub expertise_success_p: f64,
    pub expertise_sure_p: f64,
    pub expertise_unsure_p: f64,
    pub non_expert_p: f64,
    #[serde(default)]
    pub expertise_sampling: ExpertiseSampling,
}

/// Observed category frequencies over 156 questions.
const OBSERVED_CATEGORIES: [(&str, f64); 21] = [
    ("Celebrities", 0.12),
    ("Movies/TV", 0.08),
    ("Animals/Biology", 0.08),
    ("History", 0.07),
    ("Sports", 0.07),
    ("Geography", 0.07),
    ("Words", 0.05),
    ("Musicians", 0.05),
    ("Food", 0.04),
    ("US Politicians", 0.04),
    ("Inventions", 0.03),
    ("U.S. States", 0.03),
    ("Space", 0.03),
    ("U.S. Gov./Laws", 0.03),
    ("Holidays", 0.02),
    ("Literature/Magazines", 0.02),
    ("Theater", 0.02),
    ("Landmarks", 0.02),
    ("Periodic Table of Elements", 0.02),
    ("Business", 0.02),
    (OTHER_CATEGORY, 0.10),
];

impl Default for PopulationModel {
    fn default() -> Self {
        let weights = OBSERVED_CATEGORIES.iter().map(|(n, p)| QuestionCategory { name: (*n).into(), probability: *p });
        PopulationModel::from_weights(weights.collect()).expect("built-in categories are valid")
    }
}

impl PopulationModel {
    /// Builds a model from category weights, normalizing them to sum to 1.
    ///
    /// The observed table rounds to two places and its entries add up to 1.01.
    pub fn from_weights(categories: Vec<QuestionCategory>) -> Result<Self> {
        if categories.is_empty() {
            return Err(Error::Population("no categories".into()));
        }
        if let Some(c) = categories.iter().find(|c| !c.probability.is_finite() || c.probability < 0.0) {
            return Err(Error::Population(format!("category '{}' has weight {}", c.name, c.probability)));
        }
        let total: f64 = categories.iter().map(|c| c.probability).sum();
        if total <= 0.0 {
            return Err(Error::Population("weights sum to zero".into()));
        }
        let categories = categories
            .into_iter()
            .map(|c| QuestionCategory { probability: c.probability / total, name: c.name })
            .collect();
        Ok(PopulationModel {
            categories,
            expertise_trials: 20,
            expertise_success_p: 1.5 / 20.0,
            expertise_sure_p: 0.4,
            expertise_unsure_p: 0.6,
            non_expert_p: 0.5,
            expertise_sampling: ExpertiseSampling::Uniform,
        })
    }

    /// Reads `[{"name": ..., "probability": ...}, ...]`.
    pub fn from_json(json: &str) -> Result<Self> {
        let categories: Vec<QuestionCategory> = serde_json::from_str(json)?;
        PopulationModel::from_weights(categories)
    }

    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.categories.iter().map(|c| c.probability).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Population(format!("category probabilities sum to {total}")));
        }
        if (self.expertise_sure_p + self.expertise_unsure_p - 1.0).abs() > 1e-9 {
            return Err(Error::Population("sure and unsure expertise shares must sum to 1".into()));
        }
        for p in [self.expertise_success_p, self.expertise_sure_p, self.expertise_unsure_p, self.non_expert_p] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Population(format!("probability {p} outside [0, 1]")));
            }
        }
        if self.expert_candidates().is_empty() {
            return Err(Error::Population("no category is eligible for expertise".into()));
        }
        Ok(())
    }

    pub fn categories(&self) -> &[QuestionCategory] {
        &self.categories
    }

    /// Indices of the named categories a player can be an expert in.
    pub fn expert_candidates(&self) -> Vec<usize> {
        (0..self.categories.len()).filter(|i| self.categories[*i].name != OTHER_CATEGORY).collect()
    }

    /// P(correct) for a question in an expertise category.
    pub fn expert_correct_probability(&self) -> f64 {
        self.expertise_sure_p + self.expertise_unsure_p * 0.75
    }
}

/// The categories a simulated player is an expert in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expertise {
    /// Indices into [`PopulationModel::categories`].
    pub categories: Vec<usize>,
    /// Q before capping at the number of eligible categories.
    pub drawn: usize,
}

impl Expertise {
    pub fn was_capped(&self) -> bool {
        self.drawn > self.categories.len()
    }

    pub fn names<'a>(&self, model: &'a PopulationModel) -> Vec<&'a str> {
        self.categories.iter().map(|i| model.categories[*i].name.as_str()).collect()
    }
}

/// Q = 1 + Binom(expertise_trials, expertise_success_p) distinct categories.
pub fn sample_expertise(model: &PopulationModel, rng: &mut impl Rng) -> Expertise {
    let drawn = 1 + (0..model.expertise_trials).filter(|_| rng.random_bool(model.expertise_success_p)).count();
    let candidates = model.expert_candidates();
    let amount = drawn.min(candidates.len());
    if amount < drawn {
        log::debug!("expertise draw {drawn} capped at {amount} categories");
    }
    let picked: Vec<usize> = match model.expertise_sampling {
        ExpertiseSampling::Uniform => index::sample(rng, candidates.len(), amount).into_iter().collect(),
        ExpertiseSampling::Weighted => {
            let weight = |i: usize| model.categories[candidates[i]].probability.max(f64::MIN_POSITIVE);
            index::sample_weighted(rng, candidates.len(), weight, amount)
                .expect("weights are positive")
                .into_iter()
                .collect()
        }
    };
    Expertise { categories: picked.into_iter().map(|i| candidates[i]).collect(), drawn }
}

/// Total correct out of 13 for a player with the given expertise.
pub fn answer_questions(model: &PopulationModel, expertise: &Expertise, rng: &mut impl Rng) -> u8 {
    let weights = WeightedIndex::new(model.categories.iter().map(|c| c.probability)).expect("valid weights");
    let mut correct = 0;
    for _ in 0..QUESTIONS {
        let category = weights.sample(rng);
        let hit = if expertise.categories.contains(&category) {
            rng.random_bool(model.expertise_sure_p) || rng.random_bool(0.75)
        } else {
            rng.random_bool(model.non_expert_p)
        };
        correct += u8::from(hit);
    }
    correct
}

pub fn simulate_contestant(model: &PopulationModel, rng: &mut impl Rng) -> u8 {
    let expertise = sample_expertise(model, rng);
    answer_questions(model, &expertise, rng)
}

pub fn run_population(model: &PopulationModel, config: &SimConfig) -> Result<Histogram14> {
    model.validate()?;
    Ok(histogram_of(config, |rng| simulate_contestant(model, rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{exact_pmf, QuestionProfile};
    use crate::schedule::LuckyRange;

    fn profile(s: u8, u: u8, g: u8) -> QuestionProfile {
        QuestionProfile::categories(s, u, g).unwrap()
    }

    #[test]
    fn contestant_z_matches_exact() {
        let h = simulate_profile(&profile(10, 2, 1), &SimConfig::new(10_000, 42).unwrap());
        assert_eq!(h.total, 10_000);
        assert!((h.frequency(13) - 9.0 / 32.0).abs() < 0.015);
        let in_range: f64 = (10..=12).map(|k| h.frequency(k)).sum();
        assert!((in_range - 23.0 / 32.0).abs() < 0.015);
    }

    #[test]
    fn all_sure_is_degenerate() {
        let h = simulate_profile(&profile(13, 0, 0), &SimConfig::new(500, 1).unwrap());
        assert_eq!(h.counts[13], 500);
    }

    #[test]
    fn all_guess_mean() {
        let h = simulate_profile(&profile(0, 0, 13), &SimConfig::new(10_000, 9).unwrap());
        assert!((h.mean() - 6.5).abs() < 0.1);
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(SimConfig::new(0, 1).is_err());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let config = SimConfig::new(3_000, 77).unwrap();
        let p = profile(4, 5, 4);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_profile(&p, &config))
        };
        let one = run(1);
        assert_eq!(one, run(4));
        assert_eq!(one, run(7));
        assert_ne!(one, simulate_profile(&p, &SimConfig::new(3_000, 78).unwrap()));
    }

    #[test]
    fn empirical_range_probabilities_close_to_exact() {
        for (i, (s, u, g)) in [(0, 0, 13), (3, 8, 2), (5, 4, 4), (10, 2, 1)].into_iter().enumerate() {
            let pmf = exact_pmf(&profile(s, u, g));
            let h = simulate_profile(&profile(s, u, g), &SimConfig::new(10_000, 1000 + i as u64).unwrap());
            for r in LuckyRange::ALL {
                let emp: f64 = r.numbers().map(|k| h.frequency(k)).sum();
                assert!((emp - pmf.range_probability(r)).abs() < 0.015, "{s}/{u}/{g} {r}");
            }
        }
    }

    #[test]
    fn default_model_is_normalized() {
        let m = PopulationModel::default();
        m.validate().unwrap();
        assert_eq!(m.categories().len(), 21);
        assert_eq!(m.expert_candidates().len(), 20);
        assert!((m.expert_correct_probability() - 0.85).abs() < 1e-12);
    }

    #[test]
    fn expertise_contract() {
        let m = PopulationModel::default();
        let mut rng = trial_rng(5, 0);
        let mut total = 0;
        for _ in 0..2_000 {
            let e = sample_expertise(&m, &mut rng);
            assert!(e.drawn >= 1);
            assert_eq!(e.categories.len(), e.drawn.min(20));
            let mut sorted = e.categories.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), e.categories.len());
            assert!(e.names(&m).iter().all(|n| *n != OTHER_CATEGORY));
            total += e.drawn;
        }
        assert!((total as f64 / 2_000.0 - 2.5).abs() < 0.1);
    }

    #[test]
    fn weighted_expertise_prefers_common_categories() {
        let mut m = PopulationModel::default();
        m.expertise_sampling = ExpertiseSampling::Weighted;
        m.expertise_success_p = 0.0;
        let mut rng = trial_rng(11, 0);
        let celebs = (0..4_000).filter(|_| sample_expertise(&m, &mut rng).categories == vec![0]).count();
        // uniform would give 1/20; weighted gives 0.12/0.91
        assert!(celebs as f64 / 4_000.0 > 0.1);
    }

    #[test]
    fn expertise_capped_at_available_categories() {
        let mut m = PopulationModel::default();
        m.expertise_success_p = 1.0;
        let e = sample_expertise(&m, &mut trial_rng(3, 0));
        assert_eq!(e.drawn, 21);
        assert_eq!(e.categories.len(), 20);
        assert!(e.was_capped());
    }

    #[test]
    fn zero_weight_expertise_reduces_to_guessing() {
        let cats = vec![
            QuestionCategory { name: "Niche".into(), probability: 0.0 },
            QuestionCategory { name: OTHER_CATEGORY.into(), probability: 1.0 },
        ];
        let m = PopulationModel::from_weights(cats).unwrap();
        let config = SimConfig::new(20_000, 4).unwrap();
        let h = run_population(&m, &config).unwrap();
        let exact = crate::prob::binomial_pmf(13, 0.5).unwrap();
        for k in 0..=13u8 {
            assert!((h.frequency(k) - exact.get(k)).abs() < 0.012, "k={k}");
        }
    }

    #[test]
    fn population_mode_and_single_trial() {
        let m = PopulationModel::default();
        let h = run_population(&m, &SimConfig::new(10_000, 7).unwrap()).unwrap();
        assert!(h.modes().iter().all(|k| (6..=8).contains(k)), "{:?}", h.modes());
        assert_eq!(run_population(&m, &SimConfig::new(1, 7).unwrap()).unwrap().total, 1);
    }

    #[test]
    fn single_expertise_mean_matches_analytic() {
        let mut m = PopulationModel::default();
        m.expertise_success_p = 0.0;
        let candidates = m.expert_candidates();
        let avg_weight: f64 =
            candidates.iter().map(|i| m.categories()[*i].probability).sum::<f64>() / candidates.len() as f64;
        let expected = 13.0 * (0.5 + 0.35 * avg_weight);
        let h = run_population(&m, &SimConfig::new(10_000, 21).unwrap()).unwrap();
        assert!((h.mean() - expected).abs() < 0.15, "{} vs {expected}", h.mean());
    }

    #[test]
    fn model_json_loading() {
        let m = PopulationModel::from_json(r#"[{"name":"A","probability":2},{"name":"Other","probability":2}]"#).unwrap();
        assert_eq!(m.categories()[0].probability, 0.5);
        assert!(PopulationModel::from_json(r#"[{"name":"A","probability":-1}]"#).is_err());
        assert!(PopulationModel::from_json("nope").is_err());
    }

    #[test]
    fn csv_and_text_render() {
        let h = simulate_profile(&profile(13, 0, 0), &SimConfig::new(10, 1).unwrap());
        let csv = h.to_csv();
        assert!(csv.starts_with("k,count,frequency\n0,0,0.0000\n"));
        assert!(csv.ends_with("13,10,1.0000\n"));
        assert!(h.to_text(20).contains("total 10"));
    }
}
