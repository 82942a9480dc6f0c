//! Replay files: a recorded game (profile, bet, reveals, offers) in JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{QuestionProfile, Reveal};
use crate::schedule::Bet;
use crate::tracker::{GameState, OfferEvaluation, TrajectoryPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplayOffer {
    pub after_reveal: usize,
    pub amount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub profile: QuestionProfile,
    pub bet: Bet,
    #[serde(default)]
    pub reveals: Vec<Reveal>,
    #[serde(default)]
    pub offers: Vec<ReplayOffer>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedOffer {
    pub after_reveal: usize,
    #[serde(flatten)]
    pub evaluation: OfferEvaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutcome {
    pub state: GameState,
    pub trajectory: Vec<TrajectoryPoint>,
    pub offers: Vec<EvaluatedOffer>,
}

impl ReplayFile {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    /// Plays the file under its own bet.
    pub fn run(&self) -> Result<ReplayOutcome> {
        self.run_with_bet(self.bet)
    }

    /// Plays the recorded reveals and offers under `bet`.
    pub fn run_with_bet(&self, bet: Bet) -> Result<ReplayOutcome> {
        let mut offers: Vec<ReplayOffer> = self.offers.clone();
        offers.sort_by_key(|o| o.after_reveal);
        if let Some(o) = offers.iter().find(|o| o.after_reveal > self.reveals.len()) {
            return Err(Error::OfferIndex { after: o.after_reveal, available: self.reveals.len() });
        }
        let mut state = crate::tracker::new_game(self.profile.clone(), bet);
        let mut evaluated = Vec::new();
        let mut pending = offers.iter().peekable();
        for i in 0..=self.reveals.len() {
            while let Some(o) = pending.next_if(|o| o.after_reveal == i) {
                let (next, evaluation) = state.evaluate_offer(o.amount)?;
                state = next;
                evaluated.push(EvaluatedOffer { after_reveal: i, evaluation });
            }
            if let Some(r) = self.reveals.get(i) {
                state = state.reveal(r.question, r.correct)?;
            }
        }
        Ok(ReplayOutcome { trajectory: state.trajectory(), state, offers: evaluated })
    }
}
