//! Concurrent game structures, objectives, lassos and payoffs.

mod format;
mod game;
mod lasso;
mod objective;
mod sets;

use thiserror::Error;

pub use format::{validate_game, RawGame, RawObjective, RawTransition, Violation};
pub use game::{ConcurrentGame, GameMetadata, MoveId};
pub use lasso::{payoff_of_lasso, profile_of, Lasso};
pub use objective::{eval_objective, MullerCondition, Objective, ObjectiveClass};
pub use sets::{ActionId, AgentId, AgentSet, StateId, StateSet, WinnerProfile, MAX_AGENTS};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid game: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed game file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("contract violation: {0}")]
    Contract(String),
}
