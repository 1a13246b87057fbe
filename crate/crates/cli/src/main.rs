use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nashcheck::arena::build_arena;
use nashcheck::equilibria::{Decision, EquilibriumError, Solver};
use nashcheck::model::{ConcurrentGame, StateId, WinnerProfile};
use nashcheck::reductions::{parse_dimacs, sat_to_cobuchi_game, sat_to_reach_game, sat_to_safety_game};
use nashcheck::zerosum::{Backend, DEFAULT_ORACLE_BUDGET};
use serde_json::{json, Value};

/// Pure Nash equilibria in concurrent games with omega-regular objectives.
#[derive(Parser)]
#[command(name = "nashcheck", version)]
struct Cli {
    /// Worker threads for parallel profile checks.
    #[arg(long, global = true, env = "NASHCHECK_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a game file.
    Check { game: PathBuf },
    #[command(flatten)]
    Decide(DecideCommand),
    /// Generate a game from a formula.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Re-run a decision with the latest-appearance-record oracle back-end.
    Oracle {
        /// Largest product graph the oracle may build.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: usize,
        #[command(subcommand)]
        decision: DecideCommand,
    },
    /// Print the suspect arena of a game.
    Arena {
        #[command(flatten)]
        target: Target,
        /// Only report vertex counts.
        #[arg(long)]
        summary: bool,
    },
}

#[derive(Subcommand)]
enum DecideCommand {
    /// Constrained equilibrium existence: lower <= payoff <= upper.
    Cne {
        #[command(flatten)]
        target: Target,
        /// Bit-string, agent 1 leftmost.
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
    /// An equilibrium with at least `threshold` winners.
    Swdp {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        threshold: usize,
        #[arg(long, value_enum, default_value_t = SwdpMethod::Generic)]
        method: SwdpMethod,
    },
    /// An equilibrium with a Pareto-optimal payoff.
    Podp {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum, default_value_t = PodpMethod::Exact)]
        method: PodpMethod,
    },
}

#[derive(Args)]
struct Target {
    game: PathBuf,
    /// Source state; defaults to the game's initial state.
    #[arg(long)]
    state: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SwdpMethod {
    Generic,
    BuchiScc,
}

#[derive(Clone, Copy, ValueEnum)]
enum PodpMethod {
    Exact,
    Count,
    BuchiScc,
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Equilibrium game from a DIMACS CNF formula.
    Sat {
        #[arg(long, value_enum)]
        objective: ReduceObjective,
        #[arg(long)]
        cnf: PathBuf,
        /// Write the game here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceObjective {
    Reach,
    Safety,
    Cobuchi,
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<EquilibriumError> for Failure {
    fn from(e: EquilibriumError) -> Self {
        if e.is_oracle_infeasible() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(target: &Target) -> Result<(ConcurrentGame, StateId), Failure> {
    let game = ConcurrentGame::from_json(&read(&target.game)?).map_err(|e| Failure::Input(e.to_string()))?;
    let source = match &target.state {
        None => game.initial(),
        Some(name) => game
            .state_id(name)
            .ok_or_else(|| Failure::Input(format!("unknown state `{name}`")))?,
    };
    Ok((game, source))
}

fn profile(text: &str, agents: usize) -> Result<WinnerProfile, Failure> {
    WinnerProfile::from_bitstring(text, agents).map_err(Failure::Input)
}

fn decide(command: &DecideCommand, backend: Backend, workers: Option<usize>) -> Result<Value, Failure> {
    let target = match command {
        DecideCommand::Cne { target, .. } | DecideCommand::Swdp { target, .. } | DecideCommand::Podp { target, .. } => {
            target
        }
    };
    let (game, source) = load(target)?;
    let n = game.num_agents();
    let lower_upper = match command {
        DecideCommand::Cne { lower, upper, .. } => Some((profile(lower, n)?, profile(upper, n)?)),
        DecideCommand::Swdp { threshold, .. } if *threshold > n => {
            return Err(Failure::Input(format!("threshold {threshold} exceeds the {n} agents")));
        }
        _ => None,
    };
    let mut solver = Solver::new(&game, source).with_backend(backend);
    if let Some(w) = workers {
        solver = solver.with_workers(w);
    }
    let decision: Decision = match command {
        DecideCommand::Cne { .. } => {
            let (lower, upper) = lower_upper.expect("parsed above");
            solver.constrained_ne_exists(lower, upper)?
        }
        DecideCommand::Swdp { threshold, method, .. } => match method {
            SwdpMethod::Generic => solver.swdp(*threshold)?,
            SwdpMethod::BuchiScc => solver.swdp_buchi(*threshold)?,
        },
        DecideCommand::Podp { method, .. } => match method {
            PodpMethod::Exact => solver.podp()?,
            PodpMethod::Count => solver.podp_count_variant()?,
            PodpMethod::BuchiScc => solver.podp_buchi_scc()?,
        },
    };
    Ok(decision.to_json(&game))
}

fn run(cli: Cli) -> Result<Value, Failure> {
    match cli.command {
        Command::Check { game } => {
            let game = ConcurrentGame::from_json(&read(&game)?).map_err(|e| Failure::Input(e.to_string()))?;
            Ok(json!({
                "valid": true,
                "states": game.num_states(),
                "agents": game.num_agents(),
                "turn_based": game.is_turn_based(),
            }))
        }
        Command::Decide(d) => decide(&d, Backend::Fixpoint, cli.workers),
        Command::Oracle { budget, decision } => decide(&decision, Backend::LarOracle { budget }, cli.workers),
        Command::Arena { target, summary } => {
            let (game, source) = load(&target)?;
            let arena = build_arena(&game, source);
            if summary {
                Ok(json!({
                    "eve": arena.num_eve(),
                    "adam": arena.num_adam(),
                    "table_size": game.table_size(),
                }))
            } else {
                Ok(arena.to_json(&game))
            }
        }
        Command::Reduce(ReduceCommand::Sat { objective, cnf, output }) => {
            let formula = parse_dimacs(&read(&cnf)?).map_err(|e| Failure::Input(format!("{}: {e}", cnf.display())))?;
            let reduction = match objective {
                ReduceObjective::Reach => sat_to_reach_game(&formula),
                ReduceObjective::Safety => sat_to_safety_game(&formula),
                ReduceObjective::Cobuchi => sat_to_cobuchi_game(&formula),
            };
            let text = reduction.game.to_json();
            match output {
                Some(path) => {
                    fs::write(&path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    Ok(json!({ "threshold": reduction.threshold, "output": path.display().to_string() }))
                }
                None => serde_json::from_str(&text).map_err(|e| Failure::Input(e.to_string())),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("json output"));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
