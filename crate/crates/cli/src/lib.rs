//! Command-line surface: argument parsing, strategy and monitor registries,
//! result records, and the interactive play loop. The binary `dgame` is a
//! thin wrapper around [`execute`] so everything here is testable in
//! process.

mod games;
mod play;
mod registry;

pub use games::GameHandle;
pub use play::{play_session, render_pattern};
pub use registry::{monitor_by_name, strategy_by_name};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dgame_core::record::Record;
use dgame_core::reductions::ArrowGame;
use dgame_core::solver::bounded::solve_omega_with;
use dgame_core::solver::finite::{solve_region, RegionSpec};
use dgame_core::strategies::{run_game, Outcome, RunSetup};
use dgame_core::verifier::{exhaust, prove_a_wins, Certificate, Objective, ProveModes, Verdict, VerifySpec};
use dgame_core::words::{budget_sequence, TurnWord};
use dgame_core::{Player, Region, Variant};
use serde::Deserialize;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

/// Exit statuses: 0 computed, 1 inconclusive, 2 input error. `verify` adds
/// 3 for a counterexample.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dgame", about = "Solver workbench for two-player tiling games on Z^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GameArgs {
    /// Path to a game file (SFT format, JSON).
    #[arg(long)]
    pub sft: PathBuf,
    /// Turn-order word, e.g. "(AB)*", "B|(AB)*", "sturmian:13/21:0/1".
    #[arg(long, default_value = "(AB)*")]
    pub turns: String,
    /// "pass" or "no-pass".
    #[arg(long, default_value = "pass")]
    pub variant: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the game exactly on the box [-n, n]^d.
    SolveFinite {
        #[command(flatten)]
        game: GameArgs,
        /// Box radius n.
        #[arg(long, short = 'n')]
        radius: u32,
        /// Turn-word index the game starts at.
        #[arg(long, default_value_t = 0)]
        start_index: u64,
        /// Node budget.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether A wins within a bounded number of plies.
    SolveBounded {
        #[command(flatten)]
        game: GameArgs,
        /// Horizon in plies.
        #[arg(long, short = 'T')]
        horizon: u32,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a window or horizon certificate that A wins on the grid.
    Prove {
        #[command(flatten)]
        game: GameArgs,
        /// Total node budget for the dovetailed search; defaults to
        /// DGAME_NODE_BUDGET or ten million.
        #[arg(long)]
        budget: Option<u64>,
        /// Comma-separated subset of {window, horizon}.
        #[arg(long, default_value = "window,horizon")]
        modes: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a derived game construction over a base game.
    Reduce {
        /// Path of the base game file.
        #[arg(long)]
        sft: PathBuf,
        /// Construction name; only "arrow" is available.
        #[arg(long, default_value = "arrow")]
        construction: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyse a turn-order word.
    Word {
        /// Word to classify.
        #[arg(long)]
        classify: Option<String>,
        #[arg(long)]
        scan_depth: Option<usize>,
        /// Frequency p/q whose budget sequence to print.
        #[arg(long)]
        budget: Option<String>,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play interactively against a strategy or a solved table.
    Play {
        #[command(flatten)]
        game: GameArgs,
        /// Side the human controls.
        #[arg(long, default_value = "A")]
        human: String,
        /// Engine strategy name (see the registry), or "table".
        #[arg(long)]
        engine: String,
        /// Box radius for "table" engines; also confines play.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, default_value_t = 200)]
        max_plies: usize,
    },
    /// Run one strategy against another and report the trace.
    Run {
        #[command(flatten)]
        game: GameArgs,
        /// Strategy for A.
        #[arg(long)]
        a: String,
        /// Strategy for B.
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 50)]
        plies: usize,
        /// Monitor names separated by semicolons, e.g.
        /// "parity;witness:0,1".
        #[arg(long, default_value = "")]
        monitors: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively verify a strategy claim from a JSON spec file.
    Verify {
        /// Path of the verification spec.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Default node budget: the DGAME_NODE_BUDGET environment variable when
/// set, otherwise the given fallback.
fn env_budget(fallback: u64) -> u64 {
    std::env::var("DGAME_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(fallback)
}

fn parse_variant(s: &str) -> Result<Variant> {
    match s {
        "pass" => Ok(Variant::PassAllowed),
        "no-pass" | "nopass" => Ok(Variant::NoPass),
        other => bail!("unknown variant {other:?} (expected \"pass\" or \"no-pass\")"),
    }
}

fn parse_word(s: &str) -> Result<TurnWord> {
    TurnWord::from_str(s).map_err(|e| anyhow!("turn word {s:?}: {e}"))
}

fn parse_player(s: &str) -> Result<Player> {
    match s {
        "A" | "a" => Ok(Player::A),
        "B" | "b" => Ok(Player::B),
        other => bail!("unknown player {other:?}"),
    }
}

fn write_record(record: &Record, out: &mut dyn Write, path: &Option<PathBuf>) -> Result<()> {
    write!(out, "{record}")?;
    if let Some(path) = path {
        std::fs::write(path, record.to_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Runs one command, writing the result record to `out`. Returns the exit
/// status. Input errors come back as `Err` and map to status 2.
pub fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::SolveFinite {
            game,
            radius,
            start_index,
            budget,
            out: path,
        } => {
            let handle = GameHandle::load(&game.sft)?;
            let word = parse_word(&game.turns)?;
            let variant = parse_variant(&game.variant)?;
            let mut spec = RegionSpec::new(radius, variant).with_start_index(start_index);
            spec.node_budget = budget;
            let solved = solve_region(handle.rules(), &word, spec)
                .map_err(|e| anyhow!("solve: {e}"))?;
            let result = solved.result();
            let mut record = Record::new("solve-finite");
            record.push("sft", game.sft.display());
            record.push("turns", &word);
            record.push("variant", variant);
            record.push("radius", radius);
            record.push("winner", result.winner);
            match result.value {
                Some(v) => record.push("value", v),
                None => record.push("value", "infinite"),
            }
            if let Some(line) = &result.principal_line {
                let rendered: Vec<String> = line.iter().map(|m| m.to_string()).collect();
                record.push("principal_line", rendered.join(" "));
            }
            record.push("nodes", result.stats.nodes);
            record.push("memo_hits", result.stats.memo_hits);
            record.push("alternating_semantics", result.alternating);
            write_record(&record, out, &path)?;
            Ok(EXIT_OK)
        }
        Command::SolveBounded {
            game,
            horizon,
            budget,
            out: path,
        } => {
            let handle = GameHandle::load(&game.sft)?;
            let word = parse_word(&game.turns)?;
            let variant = parse_variant(&game.variant)?;
            let report = solve_omega_with(handle.rules(), &word, variant, horizon, 0, budget)
                .map_err(|e| anyhow!("solve: {e}"))?;
            let mut record = Record::new("solve-bounded");
            record.push("sft", game.sft.display());
            record.push("turns", &word);
            record.push("variant", variant);
            record.push("horizon", horizon);
            match report.a_wins {
                Some(win) => record.push("a_wins_within_horizon", win),
                None => record.push("a_wins_within_horizon", "inconclusive"),
            }
            record.push("nodes", report.stats.nodes);
            record.push("memo_hits", report.stats.memo_hits);
            if let Some((line, boards)) = &report.principal {
                record.push("principal_plies", line.len());
                for (i, board) in boards.iter().enumerate() {
                    record.push(
                        &format!("final_board_{i}"),
                        render_pattern(board, handle.rules().alphabet()),
                    );
                }
            }
            write_record(&record, out, &path)?;
            Ok(if report.a_wins.is_some() {
                EXIT_OK
            } else {
                EXIT_INCONCLUSIVE
            })
        }
        Command::Prove {
            game,
            budget,
            modes,
            out: path,
        } => {
            let budget = budget.unwrap_or_else(|| env_budget(10_000_000));
            let handle = GameHandle::load(&game.sft)?;
            let word = parse_word(&game.turns)?;
            let variant = parse_variant(&game.variant)?;
            let mut m = ProveModes {
                window: false,
                horizon: false,
            };
            for part in modes.split(',') {
                match part.trim() {
                    "window" => m.window = true,
                    "horizon" => m.horizon = true,
                    "" => {}
                    other => bail!("unknown mode {other:?}"),
                }
            }
            let report = prove_a_wins(handle.rules(), &word, variant, m, budget)
                .map_err(|e| anyhow!("prove: {e}"))?;
            let mut record = Record::new("prove");
            record.push("sft", game.sft.display());
            record.push("turns", &word);
            record.push("variant", variant);
            record.push("budget", budget);
            match report.certificate {
                Some(Certificate::Window { radius }) => {
                    record.push("certificate", "window");
                    record.push("radius", radius);
                }
                Some(Certificate::Horizon { plies }) => {
                    record.push("certificate", "horizon");
                    record.push("plies", plies);
                }
                None => record.push("certificate", "none"),
            }
            record.push("nodes_used", report.nodes_used);
            write_record(&record, out, &path)?;
            Ok(if report.certificate.is_some() {
                EXIT_OK
            } else {
                EXIT_INCONCLUSIVE
            })
        }
        Command::Reduce {
            sft,
            construction,
            out: path,
        } => {
            if construction != "arrow" {
                bail!("unknown construction {construction:?}");
            }
            let handle = GameHandle::load(&sft)?;
            let GameHandle::Plain(base) = &handle else {
                bail!("the arrow construction needs a plain base game");
            };
            let derived = ArrowGame::new(base).map_err(|e| anyhow!("reduce: {e}"))?;
            let doc = derived.to_doc();
            let text = serde_json::to_string_pretty(&doc)?;
            let mut record = Record::new("reduce");
            record.push("construction", "arrow");
            record.push("alphabet_size", doc.alphabet.len());
            record.push("window", derived.window_len());
            match &path {
                Some(p) => {
                    std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
                    record.push("out", p.display());
                    write!(out, "{record}")?;
                }
                None => {
                    write!(out, "{record}")?;
                    writeln!(out, "{text}")?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Word {
            classify,
            scan_depth,
            budget,
            steps,
            out: path,
        } => {
            let mut record = Record::new("word");
            if let Some(word_txt) = classify {
                let word = parse_word(&word_txt)?;
                let depth = scan_depth.unwrap_or_else(|| word.default_scan_depth());
                record.push("word", &word);
                record.push("frequency", word.frequency());
                record.push("balanced_up_to", depth);
                match word.classify(depth) {
                    Ok(case) => {
                        record.push("class", case.tag);
                        if let Some(k) = case.gap {
                            record.push("gap_bound", k);
                        }
                        record.push("prefix_certified", case.prefix_certified);
                    }
                    Err(e) => record.push("class_error", e),
                }
            }
            if let Some(f) = budget {
                let (p, q) = f
                    .split_once('/')
                    .ok_or_else(|| anyhow!("budget frequency must be P/Q"))?;
                let ratio = dgame_core::words::Rational::new(p.parse::<i64>()?, q.parse::<i64>()?);
                let seq = budget_sequence(ratio, steps).map_err(|e| anyhow!("budget: {e}"))?;
                let plays: Vec<String> = seq.iter().map(|(_, p)| p.to_string()).collect();
                let budgets: Vec<String> = seq.iter().map(|(b, _)| b.to_string()).collect();
                record.push("budget_frequency", ratio);
                record.push("budgets", budgets.join(" "));
                record.push("plays", plays.join(" "));
            }
            write_record(&record, out, &path)?;
            Ok(EXIT_OK)
        }
        Command::Play { .. } => {
            bail!("interactive play needs a terminal; main() wires it to stdin")
        }
        Command::Run {
            game,
            a,
            b,
            plies,
            monitors,
            out: path,
        } => {
            let handle = GameHandle::load(&game.sft)?;
            let word = parse_word(&game.turns)?;
            let variant = parse_variant(&game.variant)?;
            let mut strat_a = strategy_by_name(&a, &handle, &word, variant)?;
            let mut strat_b = strategy_by_name(&b, &handle, &word, variant)?;
            let ms: Vec<_> = monitors
                .split(';')
                .filter(|s| !s.is_empty())
                .map(|name| monitor_by_name(name.trim(), &handle))
                .collect::<Result<_>>()?;
            let setup = RunSetup {
                rules: handle.rules(),
                word: &word,
                variant,
                region: Region::All,
                start_index: 0,
                max_plies: plies,
            };
            let trace = run_game(&setup, &mut *strat_a, &mut *strat_b, &ms);
            let mut record = Record::new("run");
            record.push("a", strat_a.name());
            record.push("b", strat_b.name());
            record.push("turns", &word);
            record.push("plies", trace.plies());
            record.push("outcome", outcome_text(&trace.outcome));
            record.push(
                "final_pattern",
                render_pattern(trace.final_pattern(), handle.rules().alphabet()),
            );
            record.push("monitor_violations", trace.violations.len());
            for (ply, id) in &trace.violations {
                record.push("violation", format!("{id} before ply {ply}"));
            }
            write_record(&record, out, &path)?;
            Ok(EXIT_OK)
        }
        Command::Verify { config, out: path } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let doc: VerifyDoc = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", config.display()))?;
            let handle = GameHandle::load(&PathBuf::from(&doc.sft))?;
            let word = parse_word(&doc.turns)?;
            let variant = parse_variant(doc.variant.as_deref().unwrap_or("pass"))?;
            let player = parse_player(&doc.player)?;
            let strategy = strategy_by_name(&doc.strategy, &handle, &word, variant)?;
            let objective = match doc.objective.as_str() {
                "strategy-wins" => Objective::StrategyWins,
                "no-forbidden" => Objective::NoForbidden,
                "monitors-hold" => Objective::MonitorsHold,
                other => bail!("unknown objective {other:?}"),
            };
            let monitors = doc
                .monitors
                .iter()
                .map(|name| monitor_by_name(name, &handle))
                .collect::<Result<Vec<_>>>()?;
            let mut spec = VerifySpec::new(player, word, doc.depth);
            spec.variant = variant;
            spec.locality = doc.locality;
            spec.objective = objective;
            spec.monitors = monitors;
            spec.node_budget = doc.budget.unwrap_or_else(|| env_budget(spec.node_budget));
            let report = exhaust(handle.rules(), &*strategy, &spec);
            let mut record = Record::new("verify");
            record.push("sft", &doc.sft);
            record.push("strategy", &doc.strategy);
            record.push("player", &doc.player);
            record.push("depth", report.depth);
            record.push("locality", report.locality);
            record.push("nodes", report.nodes);
            let status = match &report.verdict {
                Verdict::Verified => {
                    record.push("verdict", "verified");
                    EXIT_OK
                }
                Verdict::Inconclusive => {
                    record.push("verdict", "inconclusive");
                    EXIT_INCONCLUSIVE
                }
                Verdict::Counterexample(moves) => {
                    record.push("verdict", "counterexample");
                    let rendered: Vec<String> = moves.iter().map(|m| m.to_string()).collect();
                    record.push("trace", rendered.join(" "));
                    EXIT_COUNTEREXAMPLE
                }
            };
            write_record(&record, out, &path)?;
            Ok(status)
        }
    }
}

fn outcome_text(outcome: &Outcome) -> String {
    match outcome {
        Outcome::FinalAt(t) => format!("final at ply {t} (A wins)"),
        Outcome::SurvivedHorizon => "survived horizon".to_string(),
        Outcome::Stuck(t) => format!("region full at ply {t} (B wins)"),
        Outcome::Fault { player, ply } => format!("{player} faulted at ply {ply}"),
    }
}

/// On-disk verification spec.
#[derive(Deserialize, Debug)]
pub struct VerifyDoc {
    pub sft: String,
    pub strategy: String,
    pub player: String,
    pub turns: String,
    #[serde(default)]
    pub variant: Option<String>,
    pub depth: u32,
    #[serde(default)]
    pub locality: Option<u64>,
    /// "strategy-wins", "no-forbidden" or "monitors-hold".
    pub objective: String,
    #[serde(default)]
    pub monitors: Vec<String>,
    #[serde(default)]
    pub budget: Option<u64>,
}
