//! Nash equilibrium existence under payoff constraints.
//!
//! A lasso is the outcome of a Nash equilibrium iff every step of it can be
//! proposed by Eve from a vertex she wins in the suspect arena for the
//! lasso's losers, with Adam obeying. The deciders enumerate candidate
//! payoff profiles in a fixed order and, for each, search the move graph for
//! a play with exactly that payoff whose steps all have this property.

mod bounded;
mod buchi;
mod decide;
mod solver;

use serde::Serialize;
use thiserror::Error;

use crate::model::{ConcurrentGame, Lasso, ModelError, StateId, WinnerProfile};
use crate::zerosum::SolveError;

pub use bounded::bounded_ne_profiles;
pub use solver::Solver;

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

impl EquilibriumError {
    pub fn is_oracle_infeasible(&self) -> bool {
        matches!(self, EquilibriumError::Solve(SolveError::OracleInfeasible { .. }))
    }
}

fn contract(msg: impl Into<String>) -> EquilibriumError {
    EquilibriumError::Model(ModelError::Contract(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Cne,
    Swdp,
    Podp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Generic,
    BuchiScc,
    CountVariant,
    Exact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Candidate payoff profiles examined, in decision order.
    pub profiles_examined: usize,
    /// Distinct loser sets whose winning region was consulted.
    pub regions_solved: usize,
}

impl Stats {
    fn absorb(&mut self, other: Stats) {
        self.profiles_examined += other.profiles_examined;
        self.regions_solved += other.regions_solved;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub problem: Problem,
    pub answer: bool,
    /// Outcome of a witnessing equilibrium and its payoff, present iff yes.
    pub witness: Option<(Lasso, WinnerProfile)>,
    pub method: Method,
    pub stats: Stats,
}

#[derive(Serialize)]
struct WitnessReport {
    stem: Vec<String>,
    cycle: Vec<String>,
    profile: String,
}

#[derive(Serialize)]
struct DecisionReport {
    problem: Problem,
    answer: bool,
    witness: Option<WitnessReport>,
    method: Method,
    stats: Stats,
}

impl Decision {
    fn new(problem: Problem, method: Method, witness: Option<(Lasso, WinnerProfile)>, stats: Stats) -> Self {
        Decision {
            problem,
            answer: witness.is_some(),
            witness,
            method,
            stats,
        }
    }

    /// The result object `{problem, answer, witness, method, stats}` with
    /// state names.
    pub fn to_json(&self, game: &ConcurrentGame) -> serde_json::Value {
        let witness = self.witness.as_ref().map(|(lasso, p)| {
            let (stem, cycle) = lasso.names(game);
            WitnessReport {
                stem,
                cycle,
                profile: p.to_bitstring(),
            }
        });
        serde_json::to_value(DecisionReport {
            problem: self.problem,
            answer: self.answer,
            witness,
            method: self.method,
            stats: self.stats,
        })
        .expect("decision reports serialise")
    }
}

pub fn verify_ne_lasso(game: &ConcurrentGame, source: StateId, lasso: &Lasso) -> Result<bool, EquilibriumError> {
    Solver::new(game, source).verify(lasso)
}

pub fn constrained_ne_exists(
    game: &ConcurrentGame,
    source: StateId,
    lower: WinnerProfile,
    upper: WinnerProfile,
) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).constrained_ne_exists(lower, upper)
}

pub fn swdp(game: &ConcurrentGame, source: StateId, v: usize) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).swdp(v)
}

pub fn swdp_buchi(game: &ConcurrentGame, source: StateId, v: usize) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).swdp_buchi(v)
}

pub fn podp(game: &ConcurrentGame, source: StateId) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).podp()
}

pub fn podp_count_variant(game: &ConcurrentGame, source: StateId) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).podp_count_variant()
}

pub fn podp_buchi_scc(game: &ConcurrentGame, source: StateId) -> Result<Decision, EquilibriumError> {
    Solver::new(game, source).podp_buchi_scc()
}

#[cfg(test)]
mod tests;
