//! Decision analysis for the game show *Lucky 13*.
//!
//! A contestant answers 13 true/false questions, then bets on a Lucky Range
//! containing their number of correct answers and on an exact Lucky Number
//! inside it. This crate computes the exact distribution of correct answers
//! from a self-assessed knowledge profile, recommends bets under a utility
//! function, tracks expected winnings as answers are revealed, evaluates quit
//! offers, and runs seeded Monte Carlo checks.

pub mod error;
pub mod prob;
pub mod replay;
pub mod schedule;
pub mod simulation;
pub mod strategy;
pub mod table;
pub mod tracker;

pub use error::{Error, Result};
pub use prob::{
    binomial_pmf, condition_on_reveals, darroch_bracket, darroch_mode, exact_pmf, mode_in_range,
    poisson_binomial_pmf, Category, ModeResult, Pmf13, QuestionPool, QuestionProfile, QuestionRef, RangeMode,
    Reveal, QUESTIONS,
};
pub use replay::{EvaluatedOffer, ReplayFile, ReplayOffer, ReplayOutcome};
pub use schedule::{Bet, LuckyRange, PrizeSchedule};
pub use simulation::{
    run_population, sample_expertise, simulate_contestant, simulate_profile, Histogram14, PopulationModel,
    SimConfig,
};
pub use strategy::{
    expected_winnings, expected_winnings_with, joint_recommend, joint_recommend_with, recommend, recommend_with,
    strategy_table_three_category, strategy_table_two_category, CustomUtility, Recommendation, StrategyRow,
    TiedBet, UtilityFunction,
};
pub use table::{FlatRow, TableModel, TableUtility};
pub use tracker::{
    new_game, trajectory_csv, Advice, GameState, OfferEvaluation, OfferRecord, TrajectoryPoint,
    UtilityOfferEvaluation,
};
