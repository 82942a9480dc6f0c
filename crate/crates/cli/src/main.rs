use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lucky13::simulation::ExpertiseSampling;
use lucky13::table::{render_csv, render_text};
use lucky13::{
    darroch_mode, exact_pmf, joint_recommend, recommend, run_population, simulate_profile, trajectory_csv, Bet,
    Histogram14, PopulationModel, QuestionProfile, ReplayFile, SimConfig, TableModel, TableUtility, UtilityFunction,
};
use lucky13_service::ServiceConfig;

#[derive(Parser)]
#[command(name = "lucky13", version, about = "Decision analysis for the game show Lucky 13")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a strategy table.
    Tables {
        #[arg(long, value_enum, default_value = "two")]
        model: ModelArg,
        #[arg(long, value_enum, default_value = "both")]
        utility: TableUtilityArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Recommend a Lucky Range and Lucky Number.
    Advise {
        #[command(flatten)]
        profile: ProfileArgs,
        /// winprob, winnings, power:<a> or log:<wealth>
        #[arg(long, default_value = "winprob")]
        utility: String,
        /// Maximize expected winnings over all (range, number) pairs.
        #[arg(long)]
        joint: bool,
        #[arg(long)]
        json: bool,
    },
    /// Replay a recorded game and print its expected-winnings trajectory.
    Replay {
        path: PathBuf,
        /// Alternative bet, e.g. 10-12/10 or 13.
        #[arg(long)]
        what_if: Option<String>,
    },
    /// Monte Carlo histogram of correct answers for one profile.
    Simulate {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Monte Carlo histogram of correct answers over a contestant population.
    Population {
        /// JSON array of {"name", "probability"} category weights.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Pick expertise categories in proportion to their weights.
        #[arg(long)]
        weighted: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "LUCKY13_PORT", default_value_t = 8013)]
        port: u16,
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long)]
        cors_origin: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Two,
    Three,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableUtilityArg {
    Winprob,
    Winnings,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Args)]
struct ProfileArgs {
    #[arg(long, conflicts_with = "probs")]
    sure: Option<u8>,
    #[arg(long, conflicts_with = "probs")]
    unsure: Option<u8>,
    #[arg(long, conflicts_with = "probs")]
    guess: Option<u8>,
    /// 13 comma-separated per-question probabilities.
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, env = "LUCKY13_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type Outcome = Result<String, Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> Failure {
    Failure::Runtime(e.to_string())
}

impl ProfileArgs {
    fn profile(&self) -> Result<QuestionProfile, Failure> {
        match (&self.probs, self.sure, self.unsure, self.guess) {
            (Some(p), ..) => QuestionProfile::probabilities(p.clone()).map_err(usage),
            (None, None, None, None) => Err(usage("give --sure/--unsure/--guess or --probs")),
            (None, s, u, g) => {
                QuestionProfile::categories(s.unwrap_or(0), u.unwrap_or(0), g.unwrap_or(0)).map_err(usage)
            }
        }
    }
}

impl RunArgs {
    fn config(&self) -> Result<SimConfig, Failure> {
        SimConfig::new(self.trials, self.seed).map_err(usage)
    }

    fn render(&self, h: &Histogram14) -> String {
        match self.format {
            Format::Csv => h.to_csv(),
            Format::Text => h.to_text(50),
        }
    }
}

fn money(x: f64) -> String {
    if x < 0.0 {
        format!("-${:.2}", -x)
    } else {
        format!("${x:.2}")
    }
}

fn tables(model: ModelArg, utility: TableUtilityArg, format: Format) -> Outcome {
    let model = match model {
        ModelArg::Two => TableModel::Two,
        ModelArg::Three => TableModel::Three,
    };
    let utility = match utility {
        TableUtilityArg::Winprob => TableUtility::Winprob,
        TableUtilityArg::Winnings => TableUtility::Winnings,
        TableUtilityArg::Both => TableUtility::Both,
    };
    let rows = model.rows();
    Ok(match format {
        Format::Csv => render_csv(&rows, utility),
        Format::Text => render_text(&rows, utility),
    })
}

fn advise(profile: &ProfileArgs, utility: &str, joint: bool, json: bool) -> Outcome {
    let profile = profile.profile()?;
    let utility: UtilityFunction = utility.parse().map_err(usage)?;
    let pmf = exact_pmf(&profile);
    let rec = if joint { joint_recommend(&pmf) } else { recommend(&pmf, &utility) };
    let modes = match &profile {
        QuestionProfile::Probabilities(p) => Some(darroch_mode(p).map_err(runtime)?),
        QuestionProfile::Categories { .. } => None,
    };
    if json {
        let mut v = serde_json::to_value(&rec).map_err(runtime)?;
        v["utility"] = (if joint { "joint".to_string() } else { utility.label() }).into();
        v["mean"] = profile.mean().into();
        if let Some(m) = &modes {
            v["darroch_modes"] = m.modes.clone().into();
        }
        return Ok(format!("{v}\n"));
    }
    let mut out = String::new();
    let _ = writeln!(out, "range: {}", rec.range);
    let _ = writeln!(out, "number: {}", rec.number.map_or("NA".to_string(), |n| n.to_string()));
    let _ = writeln!(out, "win probability: {:.4}", rec.win_probability);
    let _ = writeln!(out, "number probability: {:.4}", rec.number_hit_probability);
    let _ = writeln!(out, "expected winnings: {}", money(rec.expected_winnings));
    let ties: Vec<String> = rec.ties.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "ties: {}", if ties.is_empty() { "none".into() } else { ties.join(", ") });
    if let Some(m) = modes {
        let _ = writeln!(out, "mean: {:.4}", m.mean);
        let set: Vec<String> = m.modes.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(out, "darroch modes: {{{}}}", set.join(","));
    }
    Ok(out)
}

fn replay(path: &PathBuf, what_if: Option<&str>) -> Outcome {
    let text = std::fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let file = ReplayFile::from_json(&text).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let bet: Bet = match what_if {
        Some(b) => b.parse().map_err(usage)?,
        None => file.bet,
    };
    let outcome = file.run_with_bet(bet).map_err(runtime)?;
    let mut out = trajectory_csv(&outcome.trajectory);
    for o in &outcome.offers {
        let e = &o.evaluation;
        let advice = match e.advice {
            lucky13::Advice::Accept => "accept",
            lucky13::Advice::Reject => "reject",
        };
        let _ = writeln!(
            out,
            "# offer after reveal {}: {} vs continuation {} -> {advice} (margin {})",
            o.after_reveal,
            money(e.offer),
            money(e.continuation_value),
            money(e.margin)
        );
    }
    Ok(out)
}

fn population(model: Option<&PathBuf>, weighted: bool, run: &RunArgs) -> Outcome {
    let config = run.config()?;
    let mut model = match model {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
            PopulationModel::from_json(&text).map_err(runtime)?
        }
        None => PopulationModel::default(),
    };
    if weighted {
        model.expertise_sampling = ExpertiseSampling::Weighted;
    }
    let h = run_population(&model, &config).map_err(runtime)?;
    Ok(run.render(&h))
}

fn serve(port: u16, snapshot: Option<PathBuf>, cors_origin: Option<String>) -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
    rt.block_on(lucky13_service::serve(ServiceConfig { port, snapshot, cors_origin })).map_err(runtime)?;
    Ok(String::new())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Tables { model, utility, format } => tables(model, utility, format),
        Command::Advise { profile, utility, joint, json } => advise(&profile, &utility, joint, json),
        Command::Replay { path, what_if } => replay(&path, what_if.as_deref()),
        Command::Simulate { profile, run } => {
            let config = run.config()?;
            Ok(run.render(&simulate_profile(&profile.profile()?, &config)))
        }
        Command::Population { model, weighted, run } => population(model.as_ref(), weighted, &run),
        Command::Serve { port, snapshot, cors_origin } => serve(port, snapshot, cors_origin),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
