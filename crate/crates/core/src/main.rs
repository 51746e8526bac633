use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dtm_eval::cli::{
    cmd_cooccur, cmd_eval, cmd_fixture, cmd_human, cmd_intrude, cmd_perturb, ConfigArgs, EvalMode,
    RunConfig,
};
use dtm_eval::perturb::{PerturbationKind, PerturbationSpec};
use dtm_eval::ratings::FilterRules;
use dtm_eval::synthetic::ChainConfig;

#[derive(Parser)]
#[command(name = "dtm-eval", version, about = "Evaluate dynamic topic models")]
struct Cli {
    /// JSON file with default values for any flag
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    args: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count sliding-window co-occurrences and write the stats cache
    Cooccur {
        /// Also store one table per timestamp for year-wise measures
        #[arg(long)]
        per_year: bool,
    },
    /// Compute year-wise and/or temporal measures of a topics file
    Eval {
        #[arg(long, value_enum, default_value = "all")]
        mode: EvalMode,
    },
    /// Write a shuffled, collapsed or intruded copy of a topics file
    Perturb {
        #[arg(long, value_parser = parse_kind)]
        kind: PerturbationKind,
        /// Topic to repeat (collapse) or to intrude
        #[arg(long)]
        target: Option<usize>,
        /// Intrusion level
        #[arg(long)]
        level: Option<usize>,
    },
    /// Word-intrusion sweep with level/measure correlations
    Intrude {
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10")]
        levels: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
    },
    /// Correlate filtered human ratings with per-topic measures
    Human {
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long)]
        control_id: String,
        /// Per-topic measures CSV (topic_id,ttc,tts,btc,bts)
        #[arg(long)]
        measures: PathBuf,
        #[arg(long, default_value_t = 1)]
        control_threshold: u8,
        #[arg(long, default_value_t = 3.0)]
        duration_factor: f64,
    },
    /// Generate a drifting-chain corpus and topics file
    Fixture {
        #[arg(long, default_value_t = 10)]
        topics: usize,
        #[arg(long, default_value_t = 10)]
        timestamps: usize,
        #[arg(long, default_value_t = 6)]
        docs_per_slice: usize,
        #[arg(long, default_value_t = 2000)]
        start_year: i64,
        /// Share of tokens drawn from other topics of the same year
        #[arg(long, default_value_t = 0.2)]
        mix: f64,
    },
}

fn parse_kind(s: &str) -> Result<PerturbationKind, String> {
    match s {
        "shuffle" => Ok(PerturbationKind::Shuffle),
        "collapse" => Ok(PerturbationKind::Collapse),
        "intrude" => Ok(PerturbationKind::Intrude),
        other => Err(format!("unknown perturbation {other:?}")),
    }
}

fn run(cli: Cli) -> dtm_eval::Result<String> {
    let file = cli.config.as_deref().map(ConfigArgs::read).transpose()?;
    let cfg = RunConfig::resolve(file.as_ref(), &cli.args)?;
    match cli.command {
        Command::Cooccur { per_year } => cmd_cooccur(&cfg, per_year),
        Command::Eval { mode } => cmd_eval(&cfg, mode),
        Command::Perturb { kind, target, level } => cmd_perturb(
            &cfg,
            &PerturbationSpec {
                kind,
                seed: cfg.seed,
                intrude_target: target,
                intrude_levels: level.into_iter().collect(),
            },
        ),
        Command::Intrude { target, levels, seeds } => cmd_intrude(&cfg, target, &levels, &seeds),
        Command::Human {
            ratings,
            control_id,
            measures,
            control_threshold,
            duration_factor,
        } => cmd_human(
            &cfg,
            &ratings,
            &control_id,
            &measures,
            FilterRules {
                control_threshold,
                duration_factor,
            },
        ),
        Command::Fixture {
            topics,
            timestamps,
            docs_per_slice,
            start_year,
            mix,
        } => cmd_fixture(
            &cfg,
            ChainConfig {
                n_topics: topics,
                n_timestamps: timestamps,
                docs_per_slice,
                start_year,
                mix,
                ..ChainConfig::default()
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
