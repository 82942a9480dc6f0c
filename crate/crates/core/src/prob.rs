//! Exact distributions of the number of correct answers out of 13.
//!
//! Three knowledge models share one representation: a dense [`Pmf13`] over
//! `0..=13`. Category profiles (Sure/Unsure/Guess counts) are built from
//! binomial blocks; per-question probability profiles are built by folding
//! one Bernoulli question at a time into a running distribution.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::LuckyRange;

pub const QUESTIONS: usize = 13;

const MASS_TOLERANCE: f64 = 1e-12;
/// Two probabilities closer than this are treated as tied.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;
const MATCH_TOLERANCE: f64 = 1e-9;

/// Probability mass over 0..=13 correct answers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Pmf13 {
    mass: [f64; QUESTIONS + 1],
}

impl Pmf13 {
    pub fn from_mass(mass: [f64; QUESTIONS + 1]) -> Result<Self> {
        if let Some(m) = mass.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::InvalidMass(format!("entry {m} is negative or not finite")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMass(format!("entries sum to {total}")));
        }
        Ok(Pmf13 { mass })
    }

    pub fn point(correct: u8) -> Self {
        let mut mass = [0.0; QUESTIONS + 1];
        mass[correct.min(QUESTIONS as u8) as usize] = 1.0;
        Pmf13 { mass }
    }

    /// Embeds a distribution over `0..sub.len()` shifted up by `offset`.
    pub(crate) fn shifted(sub: &[f64], offset: usize) -> Self {
        debug_assert!(sub.len() + offset <= QUESTIONS + 1);
        let mut mass = [0.0; QUESTIONS + 1];
        mass[offset..offset + sub.len()].copy_from_slice(sub);
        Pmf13 { mass }
    }

    pub fn mass(&self) -> &[f64; QUESTIONS + 1] {
        &self.mass
    }

    pub fn get(&self, correct: u8) -> f64 {
        self.mass.get(correct as usize).copied().unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.mass.iter().enumerate().map(|(k, m)| k as f64 * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.mass.iter().enumerate().map(|(k, m)| (k as f64 - mean).powi(2) * m).sum()
    }

    /// Every count attaining the maximum mass.
    pub fn argmax(&self) -> Vec<u8> {
        ties_at_max((0..=QUESTIONS as u8).map(|k| (k, self.mass[k as usize])))
    }

    /// P(N in range). Range 1-3 never includes N = 0.
    pub fn range_probability(&self, range: LuckyRange) -> f64 {
        range.numbers().map(|k| self.mass[k as usize]).sum()
    }

    /// Expectation of an arbitrary function of the final count.
    pub fn expect(&self, f: impl Fn(u8) -> f64) -> f64 {
        self.mass.iter().enumerate().map(|(k, m)| if *m == 0.0 { 0.0 } else { m * f(k as u8) }).sum()
    }
}

impl TryFrom<Vec<f64>> for Pmf13 {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        let mass: [f64; QUESTIONS + 1] = v
            .try_into()
            .map_err(|v: Vec<f64>| Error::InvalidMass(format!("expected 14 entries, got {}", v.len())))?;
        Pmf13::from_mass(mass)
    }
}

impl From<Pmf13> for Vec<f64> {
    fn from(p: Pmf13) -> Vec<f64> {
        p.mass.to_vec()
    }
}

pub(crate) fn ties_at_max(values: impl IntoIterator<Item = (u8, f64)> + Clone) -> Vec<u8> {
    let best = values.clone().into_iter().map(|(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    values.into_iter().filter(|(_, v)| best - v <= TIE_TOLERANCE).map(|(k, _)| k).collect()
}

/// Sure, Unsure and Guess questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "S")]
    Sure,
    #[serde(rename = "U")]
    Unsure,
    #[serde(rename = "G")]
    Guess,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Sure, Category::Unsure, Category::Guess];

    pub fn probability(self) -> f64 {
        match self {
            Category::Sure => 1.0,
            Category::Unsure => 0.75,
            Category::Guess => 0.5,
        }
    }

    pub fn from_probability(p: f64) -> Option<Category> {
        Category::ALL.into_iter().find(|c| (c.probability() - p).abs() <= MATCH_TOLERANCE)
    }

    pub fn letter(self) -> char {
        match self {
            Category::Sure => 'S',
            Category::Unsure => 'U',
            Category::Guess => 'G',
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A contestant's self-assessed knowledge of their 13 answers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub enum QuestionProfile {
    /// Counts of Sure, Unsure and Guess questions summing to 13.
    Categories { sure: u8, unsure: u8, guess: u8 },
    /// One success probability per question, each in [0.5, 1].
    Probabilities(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ProfileRepr {
    Counts { s: u8, u: u8, g: u8 },
    Probs { p: Vec<f64> },
}

impl TryFrom<ProfileRepr> for QuestionProfile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        match r {
            ProfileRepr::Counts { s, u, g } => QuestionProfile::categories(s, u, g),
            ProfileRepr::Probs { p } => QuestionProfile::probabilities(p),
        }
    }
}

impl From<QuestionProfile> for ProfileRepr {
    fn from(p: QuestionProfile) -> ProfileRepr {
        match p {
            QuestionProfile::Categories { sure, unsure, guess } => ProfileRepr::Counts { s: sure, u: unsure, g: guess },
            QuestionProfile::Probabilities(p) => ProfileRepr::Probs { p },
        }
    }
}

impl QuestionProfile {
    pub fn categories(sure: u8, unsure: u8, guess: u8) -> Result<Self> {
        let total = sure as usize + unsure as usize + guess as usize;
        if total != QUESTIONS {
            return Err(Error::CategoryTotal(total));
        }
        Ok(QuestionProfile::Categories { sure, unsure, guess })
    }

    pub fn probabilities(p: Vec<f64>) -> Result<Self> {
        if p.len() != QUESTIONS {
            return Err(Error::ProbabilityCount(p.len()));
        }
        if let Some(bad) = p.iter().find(|x| !(0.5..=1.0).contains(*x)) {
            return Err(Error::QuestionProbability(*bad));
        }
        Ok(QuestionProfile::Probabilities(p))
    }

    /// Two-category model: `sure` Sure questions, the rest guessed.
    pub fn two_category(sure: u8) -> Result<Self> {
        QuestionProfile::categories(sure, 0, (QUESTIONS as u8).saturating_sub(sure))
    }

    /// Per-question success probabilities, Sure first, then Unsure, then Guess.
    pub fn question_probabilities(&self) -> Vec<f64> {
        match self {
            QuestionProfile::Categories { sure, unsure, guess } => [
                (Category::Sure, *sure),
                (Category::Unsure, *unsure),
                (Category::Guess, *guess),
            ]
            .into_iter()
            .flat_map(|(c, n)| std::iter::repeat_n(c.probability(), n as usize))
            .collect(),
            QuestionProfile::Probabilities(p) => p.clone(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.question_probabilities().iter().sum()
    }
}

/// Which question a reveal refers to: a category label, or a per-question probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuestionRef {
    Category(Category),
    Probability(f64),
}

impl fmt::Display for QuestionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuestionRef::Category(c) => write!(f, "category {c}"),
            QuestionRef::Probability(p) => write!(f, "probability {p}"),
        }
    }
}

/// A revealed answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RevealRepr", into = "RevealRepr")]
pub struct Reveal {
    pub question: QuestionRef,
    pub correct: bool,
}

#[derive(Serialize, Deserialize)]
struct RevealRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category: Option<Category>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    correct: bool,
}

impl TryFrom<RevealRepr> for Reveal {
    type Error = Error;

    fn try_from(r: RevealRepr) -> Result<Self> {
        let question = match (r.category, r.p) {
            (Some(c), None) => QuestionRef::Category(c),
            (None, Some(p)) => QuestionRef::Probability(p),
            _ => return Err(Error::Json("a reveal needs exactly one of \"category\" or \"p\"".into())),
        };
        Ok(Reveal { question, correct: r.correct })
    }
}

impl From<Reveal> for RevealRepr {
    fn from(r: Reveal) -> RevealRepr {
        let (category, p) = match r.question {
            QuestionRef::Category(c) => (Some(c), None),
            QuestionRef::Probability(p) => (None, Some(p)),
        };
        RevealRepr { category, p, correct: r.correct }
    }
}

impl Reveal {
    pub fn category(category: Category, correct: bool) -> Self {
        Reveal { question: QuestionRef::Category(category), correct }
    }

    pub fn probability(p: f64, correct: bool) -> Self {
        Reveal { question: QuestionRef::Probability(p), correct }
    }
}

/// Questions whose answers have not been revealed yet.
#[derive(Debug, Clone, PartialEq)]
pub enum QuestionPool {
    Counts { sure: u8, unsure: u8, guess: u8 },
    Probabilities(Vec<f64>),
}

impl QuestionPool {
    pub fn from_profile(profile: &QuestionProfile) -> Self {
        match profile {
            QuestionProfile::Categories { sure, unsure, guess } => {
                QuestionPool::Counts { sure: *sure, unsure: *unsure, guess: *guess }
            }
            QuestionProfile::Probabilities(p) => QuestionPool::Probabilities(p.clone()),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            QuestionPool::Counts { sure, unsure, guess } => (*sure + *unsure + *guess) as usize,
            QuestionPool::Probabilities(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn count_mut(&mut self, c: Category) -> Option<&mut u8> {
        match self {
            QuestionPool::Counts { sure, unsure, guess } => Some(match c {
                Category::Sure => sure,
                Category::Unsure => unsure,
                Category::Guess => guess,
            }),
            QuestionPool::Probabilities(_) => None,
        }
    }

    /// Success probability of the question `question` would remove, if it is available.
    pub fn peek(&self, question: QuestionRef) -> Option<f64> {
        let mut copy = self.clone();
        copy.take(question).ok()
    }

    /// Removes one matching question and returns its success probability.
    pub fn take(&mut self, question: QuestionRef) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::PoolExhausted);
        }
        let unavailable = || Error::QuestionUnavailable(question.to_string());
        match self {
            QuestionPool::Counts { .. } => {
                let category = match question {
                    QuestionRef::Category(c) => c,
                    QuestionRef::Probability(p) => Category::from_probability(p).ok_or_else(unavailable)?,
                };
                let slot = self.count_mut(category).expect("counts pool");
                if *slot == 0 {
                    return Err(unavailable());
                }
                *slot -= 1;
                Ok(category.probability())
            }
            QuestionPool::Probabilities(ps) => {
                let target = match question {
                    QuestionRef::Category(c) => c.probability(),
                    QuestionRef::Probability(p) => p,
                };
                let idx = ps.iter().position(|p| (p - target).abs() <= MATCH_TOLERANCE).ok_or_else(unavailable)?;
                Ok(ps.remove(idx))
            }
        }
    }

    /// One reference per distinct remaining question kind, with its success probability.
    pub fn distinct_questions(&self) -> Vec<(QuestionRef, f64)> {
        match self {
            QuestionPool::Counts { sure, unsure, guess } => [
                (Category::Sure, *sure),
                (Category::Unsure, *unsure),
                (Category::Guess, *guess),
            ]
            .into_iter()
            .filter(|(_, n)| *n > 0)
            .map(|(c, _)| (QuestionRef::Category(c), c.probability()))
            .collect(),
            QuestionPool::Probabilities(ps) => {
                let mut out: Vec<(QuestionRef, f64)> = Vec::new();
                for p in ps {
                    if !out.iter().any(|(_, q)| (q - p).abs() <= MATCH_TOLERANCE) {
                        out.push((QuestionRef::Probability(*p), *p));
                    }
                }
                out
            }
        }
    }

    /// Distribution of the number of correct answers among the remaining questions.
    pub fn correct_distribution(&self) -> Vec<f64> {
        match self {
            QuestionPool::Counts { sure, unsure, guess } => category_distribution(*sure, *unsure, *guess),
            QuestionPool::Probabilities(ps) => bernoulli_sum(ps.iter().copied()),
        }
    }
}

fn binomial_coefficient(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn binomial_terms(n: usize, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|k| binomial_coefficient(n as u64, k as u64) as f64 * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32))
        .collect()
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sure questions shift the support; Unsure and Guess blocks are binomial.
fn category_distribution(sure: u8, unsure: u8, guess: u8) -> Vec<f64> {
    let mut shift = vec![0.0; sure as usize + 1];
    shift[sure as usize] = 1.0;
    let unsure = binomial_terms(unsure as usize, Category::Unsure.probability());
    let guess = binomial_terms(guess as usize, Category::Guess.probability());
    convolve(&convolve(&shift, &unsure), &guess)
}

/// Poisson binomial distribution, adding one question at a time in input order.
fn bernoulli_sum(ps: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut dist = vec![1.0];
    for p in ps {
        let mut next = vec![0.0; dist.len() + 1];
        for (k, m) in dist.iter().enumerate() {
            next[k] += m * (1.0 - p);
            next[k + 1] += m * p;
        }
        dist = next;
    }
    dist
}

/// Binom(n, p) embedded in a 0..=13 mass array.
pub fn binomial_pmf(n: usize, p: f64) -> Result<Pmf13> {
    if n > QUESTIONS {
        return Err(Error::QuestionCount(n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Probability(p));
    }
    Ok(Pmf13::shifted(&binomial_terms(n, p), 0))
}

/// Exact distribution of the total number of correct answers.
pub fn exact_pmf(profile: &QuestionProfile) -> Pmf13 {
    Pmf13::shifted(&QuestionPool::from_profile(profile).correct_distribution(), 0)
}

/// Poisson binomial PMF of independent Bernoulli questions (at most 13).
pub fn poisson_binomial_pmf(ps: &[f64]) -> Result<Pmf13> {
    if ps.len() > QUESTIONS {
        return Err(Error::QuestionCount(ps.len()));
    }
    if let Some(bad) = ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Probability(*bad));
    }
    Ok(Pmf13::shifted(&bernoulli_sum(ps.iter().copied()), 0))
}

/// Distribution of the final count given the answers revealed so far.
pub fn condition_on_reveals(profile: &QuestionProfile, reveals: &[Reveal]) -> Result<Pmf13> {
    let mut pool = QuestionPool::from_profile(profile);
    let mut correct = 0;
    for reveal in reveals {
        pool.take(reveal.question)?;
        correct += usize::from(reveal.correct);
    }
    Ok(Pmf13::shifted(&pool.correct_distribution(), correct))
}

/// Candidate modes of a Poisson binomial variable bracketed by its mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeResult {
    /// One value, or two consecutive values either of which may be the mode.
    pub modes: Vec<u8>,
    pub mean: f64,
}

/// Darroch's rule on a mean `mean` of `n` Bernoulli trials.
///
/// With `k = floor(mean)`:
/// `mean < k + 1/(k+2)` gives `{k}`, `mean <= k + 1 - 1/(n-k+1)` gives `{k, k+1}`,
/// otherwise `{k+1}`.
pub fn darroch_bracket(mean: f64, n: usize) -> Result<ModeResult> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    if !mean.is_finite() || mean < -MATCH_TOLERANCE || mean > n as f64 + MATCH_TOLERANCE {
        return Err(Error::MeanOutOfRange { mean, n });
    }
    let mean_c = mean.clamp(0.0, n as f64);
    let k = (mean_c.floor() as usize).min(n);
    let lower = k as f64 + 1.0 / (k as f64 + 2.0);
    let modes = if mean_c < lower || k == n {
        vec![k as u8]
    } else if mean_c <= k as f64 + 1.0 - 1.0 / ((n - k) as f64 + 1.0) {
        vec![k as u8, k as u8 + 1]
    } else {
        vec![k as u8 + 1]
    };
    Ok(ModeResult { modes, mean })
}

/// Darroch's rule applied to a probability vector, with `n` taken from its length.
pub fn darroch_mode(p: &[f64]) -> Result<ModeResult> {
    if p.is_empty() {
        return Err(Error::EmptyVector);
    }
    if p.len() > QUESTIONS {
        return Err(Error::QuestionCount(p.len()));
    }
    if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Probability(*bad));
    }
    darroch_bracket(p.iter().sum(), p.len())
}

/// The Lucky Number choice within a range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeMode {
    pub number: u8,
    /// All values in the range attaining the maximum mass, including `number`.
    pub tied: Vec<u8>,
}

/// Most likely count inside `range`.
///
/// Exact ties go to the value nearest the mean, then to the higher value.
pub fn mode_in_range(pmf: &Pmf13, range: LuckyRange) -> RangeMode {
    let tied = ties_at_max(range.numbers().map(|k| (k, pmf.get(k))));
    let number = pick_nearest_mean(&tied, pmf.mean());
    RangeMode { number, tied }
}

pub(crate) fn pick_nearest_mean(candidates: &[u8], mean: f64) -> u8 {
    *candidates
        .iter()
        .max_by(|a, b| {
            let da = (**a as f64 - mean).abs();
            let db = (**b as f64 - mean).abs();
            db.partial_cmp(&da).unwrap().then(a.cmp(b))
        })
        .expect("non-empty candidate set")
}
