use serde::Serialize;

use super::game::ConcurrentGame;
use super::sets::{StateId, StateSet, WinnerProfile};
use super::ModelError;

/// An ultimately periodic play `stem · cycle^ω`.
///
/// The play starts at `stem[0]`, or at `cycle[0]` when the stem is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lasso {
    pub stem: Vec<StateId>,
    pub cycle: Vec<StateId>,
}

impl Lasso {
    pub fn new(stem: Vec<StateId>, cycle: Vec<StateId>) -> Self {
        Lasso { stem, cycle }
    }

    pub fn start(&self) -> StateId {
        self.stem.first().copied().unwrap_or(self.cycle[0])
    }

    pub fn occ(&self, num_states: usize) -> StateSet {
        StateSet::from_states(num_states, self.stem.iter().chain(&self.cycle).copied())
    }

    pub fn inf(&self, num_states: usize) -> StateSet {
        StateSet::from_states(num_states, self.cycle.iter().copied())
    }

    /// State at position `k` of the play.
    pub fn at(&self, k: usize) -> StateId {
        if k < self.stem.len() {
            self.stem[k]
        } else {
            self.cycle[(k - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Checks the cycle is nonempty and every consecutive pair, including the
    /// stem-to-cycle junction and the cycle wrap, is an edge of the game.
    pub fn validate(&self, game: &ConcurrentGame) -> Result<(), ModelError> {
        if self.cycle.is_empty() {
            return Err(ModelError::Contract("lasso cycle must be nonempty".into()));
        }
        let n = game.num_states();
        if let Some(&bad) = self.stem.iter().chain(&self.cycle).find(|&&s| s >= n) {
            return Err(ModelError::Contract(format!("lasso mentions unknown state index {bad}")));
        }
        let len = self.stem.len() + self.cycle.len();
        for k in 0..len {
            let (from, to) = (self.at(k), self.at(k + 1));
            if !game.has_edge(from, to) {
                return Err(ModelError::Contract(format!(
                    "lasso step {} -> {} is not an edge of the game",
                    game.state_name(from),
                    game.state_name(to)
                )));
            }
        }
        Ok(())
    }

    /// The unique representation of the same play with the shortest stem,
    /// a primitive cycle, and the cycle rotated to its lexicographically
    /// least rotation (which starts at its least state).
    pub fn canonical(&self) -> Lasso {
        let mut cycle = primitive_root(&self.cycle);
        let mut stem = self.stem.clone();
        while let (Some(&last_stem), Some(&last_cycle)) = (stem.last(), cycle.last()) {
            if last_stem != last_cycle {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        let shift = least_rotation(&cycle);
        stem.extend_from_slice(&cycle[..shift]);
        cycle.rotate_left(shift);
        Lasso { stem, cycle }
    }

    pub fn is_canonical(&self) -> bool {
        !self.cycle.is_empty() && self.canonical() == *self
    }

    pub fn names(&self, game: &ConcurrentGame) -> (Vec<String>, Vec<String>) {
        let name = |s: &StateId| game.state_name(*s).to_string();
        (self.stem.iter().map(name).collect(), self.cycle.iter().map(name).collect())
    }
}

fn primitive_root(cycle: &[StateId]) -> Vec<StateId> {
    let n = cycle.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|k| cycle[k] == cycle[k - d]) {
            return cycle[..d].to_vec();
        }
    }
    cycle.to_vec()
}

fn least_rotation(cycle: &[StateId]) -> usize {
    let n = cycle.len();
    (0..n)
        .min_by(|&a, &b| {
            let ra = cycle[a..].iter().chain(&cycle[..a]);
            let rb = cycle[b..].iter().chain(&cycle[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0)
}

/// Winner profile of the play described by a lasso.
pub fn payoff_of_lasso(game: &ConcurrentGame, lasso: &Lasso) -> Result<WinnerProfile, ModelError> {
    lasso.validate(game)?;
    let n = game.num_states();
    Ok(profile_of(game, &lasso.occ(n), &lasso.inf(n)))
}

/// Winner profile for an `(occ, inf)` pair.
pub fn profile_of(game: &ConcurrentGame, occ: &StateSet, inf: &StateSet) -> WinnerProfile {
    let winners = (0..game.num_agents())
        .filter(|&i| game.objective(i).holds(occ, inf))
        .collect();
    WinnerProfile::new(winners, game.num_agents())
}
