//! Lucky Ranges, their cash prizes and the Lucky Number bonus.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the five bands a contestant bets their correct-answer count falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LuckyRange {
    OneToThree,
    FourToSix,
    SevenToNine,
    TenToTwelve,
    Thirteen,
}

impl LuckyRange {
    /// Ascending by prize.
    pub const ALL: [LuckyRange; 5] = [
        LuckyRange::OneToThree,
        LuckyRange::FourToSix,
        LuckyRange::SevenToNine,
        LuckyRange::TenToTwelve,
        LuckyRange::Thirteen,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn low(self) -> u8 {
        match self {
            LuckyRange::OneToThree => 1,
            LuckyRange::FourToSix => 4,
            LuckyRange::SevenToNine => 7,
            LuckyRange::TenToTwelve => 10,
            LuckyRange::Thirteen => 13,
        }
    }

    pub fn high(self) -> u8 {
        match self {
            LuckyRange::OneToThree => 3,
            LuckyRange::FourToSix => 6,
            LuckyRange::SevenToNine => 9,
            LuckyRange::TenToTwelve => 12,
            LuckyRange::Thirteen => 13,
        }
    }

    pub fn contains(self, correct: u8) -> bool {
        (self.low()..=self.high()).contains(&correct)
    }

    pub fn numbers(self) -> std::ops::RangeInclusive<u8> {
        self.low()..=self.high()
    }

    /// Range 13 is a single value and carries no Lucky Number.
    pub fn takes_number(self) -> bool {
        self != LuckyRange::Thirteen
    }

    pub fn label(self) -> &'static str {
        match self {
            LuckyRange::OneToThree => "1-3",
            LuckyRange::FourToSix => "4-6",
            LuckyRange::SevenToNine => "7-9",
            LuckyRange::TenToTwelve => "10-12",
            LuckyRange::Thirteen => "13",
        }
    }
}

impl fmt::Display for LuckyRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for LuckyRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        LuckyRange::ALL
            .into_iter()
            .find(|r| r.label() == s)
            .ok_or_else(|| Error::UnknownRange(s.to_string()))
    }
}

impl TryFrom<String> for LuckyRange {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LuckyRange> for String {
    fn from(r: LuckyRange) -> String {
        r.label().to_string()
    }
}

/// A contestant's wager: a Lucky Range plus, except for range 13, a Lucky Number inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BetRepr")]
pub struct Bet {
    range: LuckyRange,
    number: Option<u8>,
}

#[derive(Deserialize)]
struct BetRepr {
    range: LuckyRange,
    #[serde(default)]
    number: Option<u8>,
}

impl TryFrom<BetRepr> for Bet {
    type Error = Error;

    fn try_from(r: BetRepr) -> Result<Self> {
        Bet::new(r.range, r.number)
    }
}

impl Bet {
    pub fn new(range: LuckyRange, number: Option<u8>) -> Result<Self> {
        match (range.takes_number(), number) {
            (false, Some(_)) => Err(Error::NumberWithThirteen),
            (false, None) => Ok(Bet { range, number }),
            (true, None) => Err(Error::MissingNumber(range)),
            (true, Some(n)) if !range.contains(n) => Err(Error::NumberOutsideRange { range, number: n }),
            (true, Some(_)) => Ok(Bet { range, number }),
        }
    }

    pub fn thirteen() -> Self {
        Bet { range: LuckyRange::Thirteen, number: None }
    }

    pub fn range(&self) -> LuckyRange {
        self.range
    }

    pub fn number(&self) -> Option<u8> {
        self.number
    }
}

impl fmt::Display for Bet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.number {
            Some(n) => write!(f, "{}/{}", self.range, n),
            None => write!(f, "{}/NA", self.range),
        }
    }
}

/// Parses `10-12/10`, `13`, or `13/NA`.
impl FromStr for Bet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (range, number) = match s.split_once('/') {
            Some((r, n)) => (r, Some(n.trim())),
            None => (s, None),
        };
        let range: LuckyRange = range.parse()?;
        let number = match number {
            None => None,
            Some(n) if n.eq_ignore_ascii_case("na") || n.is_empty() => None,
            Some(n) => Some(n.parse::<u8>().map_err(|_| Error::UnknownRange(s.to_string()))?),
        };
        Bet::new(range, number)
    }
}

/// Dollar prizes per Lucky Range plus the Lucky Number bonus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr")]
pub struct PrizeSchedule {
    prizes: [f64; 5],
    number_bonus: f64,
}

#[derive(Deserialize)]
struct ScheduleRepr {
    prizes: [f64; 5],
    number_bonus: f64,
}

impl TryFrom<ScheduleRepr> for PrizeSchedule {
    type Error = Error;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        PrizeSchedule::new(r.prizes, r.number_bonus)
    }
}

impl Default for PrizeSchedule {
    fn default() -> Self {
        PrizeSchedule {
            prizes: [5_000.0, 15_000.0, 25_000.0, 100_000.0, 1_000_000.0],
            number_bonus: 25_000.0,
        }
    }
}

impl PrizeSchedule {
    /// Prizes are listed in range order and must be positive and strictly increasing.
    pub fn new(prizes: [f64; 5], number_bonus: f64) -> Result<Self> {
        if prizes.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(Error::Schedule("prizes must be positive".into()));
        }
        if prizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Schedule("prizes must strictly increase with range".into()));
        }
        if !number_bonus.is_finite() || number_bonus < 0.0 {
            return Err(Error::Schedule("number bonus must be non-negative".into()));
        }
        Ok(PrizeSchedule { prizes, number_bonus })
    }

    pub fn prize(&self, range: LuckyRange) -> f64 {
        self.prizes[range.index()]
    }

    pub fn number_bonus(&self) -> f64 {
        self.number_bonus
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        PrizeSchedule::new(self.prizes.map(|p| p * factor), self.number_bonus * factor)
    }

    /// Dollars won by `bet` when the contestant finishes with `correct` answers.
    pub fn payout(&self, bet: &Bet, correct: u8) -> f64 {
        if !bet.range.contains(correct) {
            return 0.0;
        }
        let bonus = if bet.number == Some(correct) { self.number_bonus } else { 0.0 };
        self.prize(bet.range) + bonus
    }

    /// Every dollar amount a bet on `range` can pay.
    pub fn attainable_payouts(&self, range: LuckyRange) -> Vec<f64> {
        let prize = self.prize(range);
        if range.takes_number() {
            vec![0.0, prize, prize + self.number_bonus]
        } else {
            vec![0.0, prize]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_one_to_thirteen_without_overlap() {
        let mut seen = [0u8; 14];
        for r in LuckyRange::ALL {
            for k in r.numbers() {
                seen[k as usize] += 1;
            }
        }
        assert_eq!(seen[0], 0);
        assert!(seen[1..].iter().all(|&c| c == 1));
    }

    #[test]
    fn bet_validation() {
        assert!(Bet::new(LuckyRange::SevenToNine, Some(9)).is_ok());
        assert_eq!(
            Bet::new(LuckyRange::SevenToNine, Some(10)),
            Err(Error::NumberOutsideRange { range: LuckyRange::SevenToNine, number: 10 })
        );
        assert_eq!(Bet::new(LuckyRange::Thirteen, Some(13)), Err(Error::NumberWithThirteen));
        assert_eq!(Bet::new(LuckyRange::FourToSix, None), Err(Error::MissingNumber(LuckyRange::FourToSix)));
    }

    #[test]
    fn bet_parsing() {
        assert_eq!("10-12/10".parse::<Bet>().unwrap(), Bet::new(LuckyRange::TenToTwelve, Some(10)).unwrap());
        assert_eq!("13".parse::<Bet>().unwrap(), Bet::thirteen());
        assert_eq!("13/NA".parse::<Bet>().unwrap(), Bet::thirteen());
        assert!("7-9/10".parse::<Bet>().is_err());
        assert!("5-8/6".parse::<Bet>().is_err());
    }

    #[test]
    fn bet_json_shape() {
        let bet: Bet = serde_json::from_str(r#"{"range":"7-9","number":9}"#).unwrap();
        assert_eq!(bet, Bet::new(LuckyRange::SevenToNine, Some(9)).unwrap());
        let bet: Bet = serde_json::from_str(r#"{"range":"13","number":null}"#).unwrap();
        assert_eq!(bet, Bet::thirteen());
        assert!(serde_json::from_str::<Bet>(r#"{"range":"13","number":13}"#).is_err());
        assert_eq!(serde_json::to_string(&bet).unwrap(), r#"{"range":"13","number":null}"#);
    }

    #[test]
    fn payout_example() {
        // 7-9 with number 9: 8 correct pays the range prize, 9 adds the bonus, 10 pays nothing
        let s = PrizeSchedule::default();
        let bet = Bet::new(LuckyRange::SevenToNine, Some(9)).unwrap();
        assert_eq!(s.payout(&bet, 8), 25_000.0);
        assert_eq!(s.payout(&bet, 9), 50_000.0);
        assert_eq!(s.payout(&bet, 10), 0.0);
    }

    #[test]
    fn schedule_rejects_non_increasing_prizes() {
        assert!(PrizeSchedule::new([1.0, 2.0, 2.0, 3.0, 4.0], 1.0).is_err());
        assert!(PrizeSchedule::new([1.0, 2.0, 3.0, 4.0, 5.0], -1.0).is_err());
        assert!(PrizeSchedule::default().scaled(3.0).is_ok());
    }
}
