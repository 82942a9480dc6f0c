//! Live game state: a fixed bet, answers revealed one at a time, and quit offers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Pmf13, QuestionPool, QuestionProfile, QuestionRef, Reveal, QUESTIONS};
use crate::schedule::{Bet, PrizeSchedule};
use crate::strategy::{expected_winnings_with, CustomUtility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Advice {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub reveal_index: usize,
    pub correct_so_far: usize,
    pub expected_winnings: f64,
    pub range_probability: f64,
    pub number_probability: f64,
}

/// Risk-neutral comparison of a quit offer against the continuation value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfferEvaluation {
    pub offer: f64,
    pub continuation_value: f64,
    pub advice: Advice,
    /// offer - continuation_value; accept iff non-negative.
    pub margin: f64,
    pub range_probability: f64,
    pub number_probability: f64,
}

impl OfferEvaluation {
    fn new(offer: f64, point: &TrajectoryPoint) -> Self {
        let margin = offer - point.expected_winnings;
        OfferEvaluation {
            offer,
            continuation_value: point.expected_winnings,
            advice: if margin >= 0.0 { Advice::Accept } else { Advice::Reject },
            margin,
            range_probability: point.range_probability,
            number_probability: point.number_probability,
        }
    }
}

/// Expected-utility comparison of a quit offer for a non-linear utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityOfferEvaluation {
    pub offer: f64,
    pub offer_utility: f64,
    pub continuation_utility: f64,
    pub advice: Advice,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OfferRecord {
    pub after_reveal: usize,
    pub amount: f64,
    pub decision: Advice,
}

/// A game in progress. Every operation returns a new state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    profile: QuestionProfile,
    bet: Bet,
    #[serde(default)]
    schedule: PrizeSchedule,
    reveals: Vec<Reveal>,
    #[serde(default)]
    offers: Vec<OfferRecord>,
}

/// Starts a game with the default prize schedule.
pub fn new_game(profile: QuestionProfile, bet: Bet) -> GameState {
    GameState::with_schedule(profile, bet, PrizeSchedule::default())
}

impl GameState {
    pub fn with_schedule(profile: QuestionProfile, bet: Bet, schedule: PrizeSchedule) -> Self {
        GameState { profile, bet, schedule, reveals: Vec::new(), offers: Vec::new() }
    }

    /// Rebuilds a state from a recorded reveal history, validating each reveal.
    pub fn replay(profile: QuestionProfile, bet: Bet, reveals: &[Reveal]) -> Result<Self> {
        reveals.iter().try_fold(new_game(profile, bet), |s, r| s.reveal(r.question, r.correct))
    }

    pub fn profile(&self) -> &QuestionProfile {
        &self.profile
    }

    pub fn bet(&self) -> Bet {
        self.bet
    }

    pub fn schedule(&self) -> &PrizeSchedule {
        &self.schedule
    }

    pub fn reveals(&self) -> &[Reveal] {
        &self.reveals
    }

    pub fn offers(&self) -> &[OfferRecord] {
        &self.offers
    }

    pub fn correct_so_far(&self) -> usize {
        self.reveals.iter().filter(|r| r.correct).count()
    }

    pub fn is_complete(&self) -> bool {
        self.reveals.len() == QUESTIONS
    }

    pub fn remaining(&self) -> QuestionPool {
        let mut pool = QuestionPool::from_profile(&self.profile);
        for r in &self.reveals {
            pool.take(r.question).expect("reveals were validated on entry");
        }
        pool
    }

    pub fn conditional_pmf(&self) -> Pmf13 {
        Pmf13::shifted(&self.remaining().correct_distribution(), self.correct_so_far())
    }

    pub fn reveal(&self, question: QuestionRef, correct: bool) -> Result<GameState> {
        if self.is_complete() {
            return Err(Error::PoolExhausted);
        }
        self.remaining().take(question)?;
        let mut next = self.clone();
        next.reveals.push(Reveal { question, correct });
        Ok(next)
    }

    pub fn current_point(&self) -> TrajectoryPoint {
        point_for(&self.conditional_pmf(), &self.bet, &self.schedule, self.reveals.len(), self.correct_so_far())
    }

    pub fn expected_winnings(&self) -> f64 {
        self.current_point().expected_winnings
    }

    /// Judges a quit offer at the current state and logs it.
    pub fn evaluate_offer(&self, offer: f64) -> Result<(GameState, OfferEvaluation)> {
        if !offer.is_finite() || offer < 0.0 {
            return Err(Error::NegativeOffer(offer));
        }
        if self.is_complete() {
            return Err(Error::GameComplete);
        }
        let eval = OfferEvaluation::new(offer, &self.current_point());
        let mut next = self.clone();
        next.offers.push(OfferRecord { after_reveal: self.reveals.len(), amount: offer, decision: eval.advice });
        Ok((next, eval))
    }

    /// Compares u(offer) with E[u(payout)]; equal utility accepts.
    pub fn evaluate_offer_with_utility(&self, offer: f64, utility: &CustomUtility) -> Result<UtilityOfferEvaluation> {
        if !offer.is_finite() || offer < 0.0 {
            return Err(Error::NegativeOffer(offer));
        }
        if self.is_complete() {
            return Err(Error::GameComplete);
        }
        let pmf = self.conditional_pmf();
        let continuation_utility = pmf.expect(|k| utility.eval(self.schedule.payout(&self.bet, k)));
        let offer_utility = utility.eval(offer);
        Ok(UtilityOfferEvaluation {
            offer,
            offer_utility,
            continuation_utility,
            advice: if offer_utility >= continuation_utility { Advice::Accept } else { Advice::Reject },
        })
    }

    /// The initial point plus one point per reveal.
    pub fn trajectory(&self) -> Vec<TrajectoryPoint> {
        trajectory_for(&self.profile, &self.bet, &self.schedule, &self.reveals)
    }

    /// The trajectory the same reveal history would have produced under another bet.
    pub fn what_if(&self, alternative: Bet) -> Vec<TrajectoryPoint> {
        trajectory_for(&self.profile, &alternative, &self.schedule, &self.reveals)
    }

    /// Dollars won, once every answer is revealed.
    pub fn realized_payoff(&self) -> Option<f64> {
        self.is_complete().then(|| self.schedule.payout(&self.bet, self.correct_so_far() as u8))
    }
}

fn point_for(pmf: &Pmf13, bet: &Bet, schedule: &PrizeSchedule, index: usize, correct: usize) -> TrajectoryPoint {
    TrajectoryPoint {
        reveal_index: index,
        correct_so_far: correct,
        expected_winnings: expected_winnings_with(pmf, bet, schedule),
        range_probability: pmf.range_probability(bet.range()),
        number_probability: bet.number().map_or(0.0, |n| pmf.get(n)),
    }
}

fn trajectory_for(profile: &QuestionProfile, bet: &Bet, schedule: &PrizeSchedule, reveals: &[Reveal]) -> Vec<TrajectoryPoint> {
    let mut pool = QuestionPool::from_profile(profile);
    let mut correct = 0;
    let mut points = vec![point_for(&Pmf13::shifted(&pool.correct_distribution(), 0), bet, schedule, 0, 0)];
    for (i, r) in reveals.iter().enumerate() {
        pool.take(r.question).expect("reveals were validated on entry");
        correct += usize::from(r.correct);
        let pmf = Pmf13::shifted(&pool.correct_distribution(), correct);
        points.push(point_for(&pmf, bet, schedule, i + 1, correct));
    }
    points
}

/// CSV with header `reveal_index,correct_so_far,expected_winnings,range_prob,number_prob`.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut out = String::from("reveal_index,correct_so_far,expected_winnings,range_prob,number_prob\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{:.2},{:.4},{:.4}\n",
            p.reveal_index, p.correct_so_far, p.expected_winnings, p.range_probability, p.number_probability
        ));
    }
    out
}
