//! CSV and aligned-text renderings of strategy tables.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schedule::LuckyRange;
use crate::strategy::{strategy_table_three_category, strategy_table_two_category, Recommendation, StrategyRow};

/// Which strategy table: Sure/Guess only, or Sure/Unsure/Guess.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableModel {
    Two,
    Three,
}

impl TableModel {
    pub fn rows(self) -> Vec<StrategyRow> {
        match self {
            TableModel::Two => strategy_table_two_category(),
            TableModel::Three => strategy_table_three_category(),
        }
    }
}

impl FromStr for TableModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two" => Ok(TableModel::Two),
            "three" => Ok(TableModel::Three),
            other => Err(Error::Config(format!("unknown table model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableUtility {
    Winprob,
    Winnings,
    Both,
}

impl FromStr for TableUtility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "winprob" => Ok(TableUtility::Winprob),
            "winnings" => Ok(TableUtility::Winnings),
            "both" => Ok(TableUtility::Both),
            other => Err(Error::Utility(format!("unknown table utility '{other}'"))),
        }
    }
}

/// One (profile, utility) line of a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatRow {
    pub s: u8,
    pub u: u8,
    pub g: u8,
    pub utility: String,
    pub range: LuckyRange,
    pub number: Option<u8>,
    pub win_prob: f64,
    pub expected_winnings: f64,
    pub ties: Vec<String>,
}

fn flat(row: &StrategyRow, utility: &str, rec: &Recommendation) -> FlatRow {
    FlatRow {
        s: row.sure,
        u: row.unsure,
        g: row.guess,
        utility: utility.to_string(),
        range: rec.range,
        number: rec.number,
        win_prob: rec.win_probability,
        expected_winnings: rec.expected_winnings,
        ties: rec.ties.iter().map(|t| t.to_string()).collect(),
    }
}

/// Rows in table order; with `Both`, each profile yields its winprob row then its winnings row.
pub fn flatten(rows: &[StrategyRow], utility: TableUtility) -> Vec<FlatRow> {
    let mut out = Vec::new();
    for row in rows {
        if utility != TableUtility::Winnings {
            out.push(flat(row, "winprob", &row.win_probability));
        }
        if utility != TableUtility::Winprob {
            out.push(flat(row, "winnings", &row.expected_winnings));
        }
    }
    out
}

fn number_label(n: Option<u8>) -> String {
    n.map_or_else(|| "NA".to_string(), |n| n.to_string())
}

/// Columns `s,u,g,range,number,win_prob,expected_winnings,ties`; `Both` adds `utility` after `g`.
pub fn render_csv(rows: &[StrategyRow], utility: TableUtility) -> String {
    let both = utility == TableUtility::Both;
    let mut out = String::from(if both {
        "s,u,g,utility,range,number,win_prob,expected_winnings,ties\n"
    } else {
        "s,u,g,range,number,win_prob,expected_winnings,ties\n"
    });
    for r in flatten(rows, utility) {
        let _ = write!(out, "{},{},{},", r.s, r.u, r.g);
        if both {
            let _ = write!(out, "{},", r.utility);
        }
        let _ = writeln!(
            out,
            "{},{},{:.4},{:.2},{}",
            r.range,
            number_label(r.number),
            r.win_prob,
            r.expected_winnings,
            r.ties.join(";")
        );
    }
    out
}

pub fn render_text(rows: &[StrategyRow], utility: TableUtility) -> String {
    let mut out = String::new();
    let cell = |rec: &Recommendation| {
        format!(
            "{:>5} {:>3} {:>7.4} {:>13.2}",
            rec.range.to_string(),
            number_label(rec.number),
            rec.win_probability,
            rec.expected_winnings
        )
    };
    let ties = |rec: &Recommendation| rec.ties.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
    let block = "range num  P(win)    E[winnings]";
    let _ = match utility {
        TableUtility::Both => writeln!(out, " S/ U/ G | {block} | {block} | ties (winprob; winnings)"),
        _ => writeln!(out, " S/ U/ G | {block} | ties"),
    };
    for row in rows {
        let _ = write!(out, "{:>2}/{:>2}/{:>2} | ", row.sure, row.unsure, row.guess);
        let _ = match utility {
            TableUtility::Winprob => writeln!(out, "{} | {}", cell(&row.win_probability), ties(&row.win_probability)),
            TableUtility::Winnings => {
                writeln!(out, "{} | {}", cell(&row.expected_winnings), ties(&row.expected_winnings))
            }
            TableUtility::Both => writeln!(
                out,
                "{} | {} | {}; {}",
                cell(&row.win_probability),
                cell(&row.expected_winnings),
                ties(&row.win_probability),
                ties(&row.expected_winnings)
            ),
        };
    }
    out
}
