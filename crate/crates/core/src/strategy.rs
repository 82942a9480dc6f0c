//! Choosing a Lucky Range and Lucky Number under a utility function.
//!
//! The default procedure is two-stage: the range maximizes either the chance of
//! landing in it or its prize times that chance, and the number is then the most
//! likely count inside the chosen range. [`joint_recommend`] instead maximizes
//! total expected winnings, bonus included, over every (range, number) pair.
//!
//! Ties between ranges go to the higher prize. Ties between numbers go to the
//! value nearest the mean count, then the higher value. Every tied alternative
//! is reported in [`Recommendation::ties`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{exact_pmf, mode_in_range, pick_nearest_mean, Pmf13, QuestionProfile, QUESTIONS};
use crate::schedule::{Bet, LuckyRange, PrizeSchedule};

fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// A dollar-to-utility mapping supplied by the user.
#[derive(Clone)]
pub struct CustomUtility {
    name: String,
    map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for CustomUtility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomUtility").field("name", &self.name).finish()
    }
}

impl CustomUtility {
    pub fn new(name: impl Into<String>, map: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomUtility { name: name.into(), map: Arc::new(map) }
    }

    /// `x^exponent`, risk-averse for exponents below 1.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::Utility(format!("power exponent {exponent} must be positive")));
        }
        Ok(CustomUtility::new(format!("power:{exponent}"), move |x| x.powf(exponent)))
    }

    /// `ln(wealth + x)` for a contestant with existing wealth `wealth`.
    pub fn log(wealth: f64) -> Result<Self> {
        if !(wealth > 0.0 && wealth.is_finite()) {
            return Err(Error::Utility(format!("log wealth {wealth} must be positive")));
        }
        Ok(CustomUtility::new(format!("log:{wealth}"), move |x| (wealth + x).ln()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, dollars: f64) -> f64 {
        (self.map)(dollars)
    }

    /// Checks the mapping is finite and non-decreasing over every attainable payout.
    pub fn validate(&self, schedule: &PrizeSchedule) -> Result<()> {
        let mut levels: Vec<f64> = LuckyRange::ALL.iter().flat_map(|r| schedule.attainable_payouts(*r)).collect();
        levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
        levels.dedup();
        let values: Vec<f64> = levels.iter().map(|x| self.eval(*x)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Utility(format!("{} is not finite on every payout", self.name)));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Utility(format!("{} decreases between payouts", self.name)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum UtilityFunction {
    /// Constant utility on any win: maximize P(N in range).
    WinProbability,
    /// Linear utility: maximize prize times P(N in range).
    ExpectedWinnings,
    Custom(CustomUtility),
}

impl UtilityFunction {
    pub fn label(&self) -> String {
        match self {
            UtilityFunction::WinProbability => "winprob".into(),
            UtilityFunction::ExpectedWinnings => "winnings".into(),
            UtilityFunction::Custom(c) => c.name().to_string(),
        }
    }
}

/// Accepts `winprob`, `winnings`, `power:<exponent>` and `log:<wealth>`.
impl FromStr for UtilityFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "winprob" => return Ok(UtilityFunction::WinProbability),
            "winnings" => return Ok(UtilityFunction::ExpectedWinnings),
            _ => {}
        }
        let parse = |v: &str| v.parse::<f64>().map_err(|_| Error::Utility(format!("bad parameter in '{s}'")));
        match s.split_once(':') {
            Some(("power", v)) => Ok(UtilityFunction::Custom(CustomUtility::power(parse(v)?)?)),
            Some(("log", v)) => Ok(UtilityFunction::Custom(CustomUtility::log(parse(v)?)?)),
            _ => Err(Error::Utility(format!("unknown utility '{s}'"))),
        }
    }
}

/// An alternative (range, number) pair scoring the same as the recommendation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiedBet {
    pub range: LuckyRange,
    pub number: Option<u8>,
}

impl From<Bet> for TiedBet {
    fn from(b: Bet) -> Self {
        TiedBet { range: b.range(), number: b.number() }
    }
}

impl fmt::Display for TiedBet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number {
            Some(n) => write!(f, "{}/{}", self.range, n),
            None => write!(f, "{}/NA", self.range),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub range: LuckyRange,
    pub number: Option<u8>,
    /// P(N in range).
    pub win_probability: f64,
    /// prize(range) * P(N in range) + bonus * P(N = number).
    pub expected_winnings: f64,
    pub number_hit_probability: f64,
    pub ties: Vec<TiedBet>,
}

impl Recommendation {
    pub fn bet(&self) -> Bet {
        Bet::new(self.range, self.number).expect("recommendations are valid bets")
    }

    fn for_bet(pmf: &Pmf13, bet: Bet, schedule: &PrizeSchedule, ties: Vec<TiedBet>) -> Self {
        Recommendation {
            range: bet.range(),
            number: bet.number(),
            win_probability: pmf.range_probability(bet.range()),
            expected_winnings: expected_winnings_with(pmf, &bet, schedule),
            number_hit_probability: bet.number().map_or(0.0, |n| pmf.get(n)),
            ties,
        }
    }
}

/// Expected dollars for a bet under the default prize schedule.
pub fn expected_winnings(pmf: &Pmf13, bet: &Bet) -> f64 {
    expected_winnings_with(pmf, bet, &PrizeSchedule::default())
}

pub fn expected_winnings_with(pmf: &Pmf13, bet: &Bet, schedule: &PrizeSchedule) -> f64 {
    let range_term = schedule.prize(bet.range()) * pmf.range_probability(bet.range());
    let number_term = bet.number().map_or(0.0, |n| schedule.number_bonus() * pmf.get(n));
    range_term + number_term
}

fn bet_for(pmf: &Pmf13, range: LuckyRange) -> (Bet, Vec<u8>) {
    if !range.takes_number() {
        return (Bet::thirteen(), Vec::new());
    }
    let mode = mode_in_range(pmf, range);
    (Bet::new(range, Some(mode.number)).expect("mode lies in range"), mode.tied)
}

fn all_bets() -> impl Iterator<Item = Bet> {
    LuckyRange::ALL.into_iter().flat_map(|r| {
        let numbers: Vec<Option<u8>> = if r.takes_number() { r.numbers().map(Some).collect() } else { vec![None] };
        numbers.into_iter().map(move |n| Bet::new(r, n).expect("enumerated bets are valid"))
    })
}

pub fn recommend(pmf: &Pmf13, utility: &UtilityFunction) -> Recommendation {
    recommend_with(pmf, utility, &PrizeSchedule::default())
}

pub fn recommend_with(pmf: &Pmf13, utility: &UtilityFunction, schedule: &PrizeSchedule) -> Recommendation {
    let range_score = |r: LuckyRange| match utility {
        UtilityFunction::WinProbability => pmf.range_probability(r),
        _ => schedule.prize(r) * pmf.range_probability(r),
    };
    match utility {
        UtilityFunction::Custom(u) => best_pair(pmf, schedule, |bet| pmf.expect(|k| u.eval(schedule.payout(bet, k)))),
        UtilityFunction::WinProbability | UtilityFunction::ExpectedWinnings => {
            let scores = LuckyRange::ALL.map(range_score);
            let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let optimal: Vec<LuckyRange> =
                LuckyRange::ALL.into_iter().filter(|r| tied(scores[r.index()], best)).collect();
            // ALL is ascending by prize, so the last optimal range has the highest prize
            let chosen_range = *optimal.last().expect("at least one range is optimal");
            let (chosen, _) = bet_for(pmf, chosen_range);
            let mut ties = Vec::new();
            for r in optimal {
                let (_, numbers) = bet_for(pmf, r);
                if numbers.is_empty() {
                    if r != chosen_range {
                        ties.push(TiedBet { range: r, number: None });
                    }
                    continue;
                }
                for n in numbers {
                    if !(r == chosen_range && Some(n) == chosen.number()) {
                        ties.push(TiedBet { range: r, number: Some(n) });
                    }
                }
            }
            ties.reverse();
            Recommendation::for_bet(pmf, chosen, schedule, ties)
        }
    }
}

/// Maximizes `score` over every (range, number) pair.
fn best_pair(pmf: &Pmf13, schedule: &PrizeSchedule, score: impl Fn(&Bet) -> f64) -> Recommendation {
    let scored: Vec<(Bet, f64)> = all_bets().map(|b| (b, score(&b))).collect();
    let best = scored.iter().map(|(_, s)| *s).fold(f64::NEG_INFINITY, f64::max);
    let optimal: Vec<Bet> = scored.into_iter().filter(|(_, s)| tied(*s, best)).map(|(b, _)| b).collect();
    let top_range = optimal.iter().map(|b| b.range()).max().expect("non-empty");
    let chosen = if top_range.takes_number() {
        let numbers: Vec<u8> = optimal.iter().filter(|b| b.range() == top_range).filter_map(|b| b.number()).collect();
        Bet::new(top_range, Some(pick_nearest_mean(&numbers, pmf.mean()))).expect("valid")
    } else {
        Bet::thirteen()
    };
    let ties = optimal.into_iter().rev().filter(|b| *b != chosen).map(TiedBet::from).collect();
    Recommendation::for_bet(pmf, chosen, schedule, ties)
}

/// Maximizes prize * P(range) + bonus * P(number) jointly over all pairs.
pub fn joint_recommend(pmf: &Pmf13) -> Recommendation {
    joint_recommend_with(pmf, &PrizeSchedule::default())
}

pub fn joint_recommend_with(pmf: &Pmf13, schedule: &PrizeSchedule) -> Recommendation {
    best_pair(pmf, schedule, |bet| expected_winnings_with(pmf, bet, schedule))
}

/// One row of a strategy table: a category profile and its recommendation under both utilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyRow {
    pub sure: u8,
    pub unsure: u8,
    pub guess: u8,
    pub win_probability: Recommendation,
    pub expected_winnings: Recommendation,
}

fn strategy_row(sure: u8, unsure: u8, guess: u8) -> StrategyRow {
    let pmf = exact_pmf(&QuestionProfile::categories(sure, unsure, guess).expect("counts sum to 13"));
    StrategyRow {
        sure,
        unsure,
        guess,
        win_probability: recommend(&pmf, &UtilityFunction::WinProbability),
        expected_winnings: recommend(&pmf, &UtilityFunction::ExpectedWinnings),
    }
}

/// Sure = 0..=13, every other question a guess.
pub fn strategy_table_two_category() -> Vec<StrategyRow> {
    (0..=QUESTIONS as u8).map(|s| strategy_row(s, 0, QUESTIONS as u8 - s)).collect()
}

/// All 105 Sure/Unsure/Guess splits, ordered by Sure then Unsure.
pub fn strategy_table_three_category() -> Vec<StrategyRow> {
    let n = QUESTIONS as u8;
    (0..=n).flat_map(|s| (0..=n - s).map(move |u| strategy_row(s, u, n - s - u))).collect()
}
