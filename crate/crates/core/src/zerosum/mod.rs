//! Two-player zero-sum solving on the suspect arena.
//!
//! Eve wins a play of the arena when every agent of the loser set `L` that
//! stays suspect forever loses the projected play. [`solve_eve_region`]
//! computes her winning region class by class with attractor fixpoints;
//! [`lar_oracle_solve`] computes the same region through a latest
//! appearance record product and Zielonka's parity algorithm.

mod attractor;
mod fixpoint;
mod lar;
mod region;
mod zielonka;

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::SuspectArena;
use crate::model::{AgentSet, ConcurrentGame};

pub use attractor::attractor;
pub use fixpoint::{cobuchi_eve, generalized_buchi_eve, mcnaughton};
pub use lar::{lar_oracle_solve, DEFAULT_ORACLE_BUDGET};
pub use region::solve_eve_region;
pub use zielonka::zielonka;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

/// A turn-based game graph with explicit predecessor lists.
#[derive(Clone, Debug, Default)]
pub struct GameGraph {
    owner: Vec<Player>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl GameGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, owner: Player) -> usize {
        self.owner.push(owner);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        self.owner.len() - 1
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
        self.pred[to].push(from);
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn full_mask(&self) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.len());
        m.insert_range(..);
        m
    }

    /// The game graph of the arena: Eve states first, then Adam states.
    pub fn from_arena(arena: &SuspectArena) -> Self {
        let mut g = GameGraph::new();
        for _ in 0..arena.num_eve() {
            g.add_vertex(Player::Eve);
        }
        for _ in 0..arena.num_adam() {
            g.add_vertex(Player::Adam);
        }
        for e in 0..arena.num_eve() {
            for a in arena.adam_states_of(e) {
                g.add_edge(e, arena.num_eve() + a);
            }
        }
        for a in 0..arena.num_adam() {
            for &e in arena.adam_successors(a) {
                g.add_edge(arena.num_eve() + a, e);
            }
        }
        g
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("oracle infeasible: product exceeds {budget} vertices")]
    OracleInfeasible { budget: usize },
}

/// Which solver computes winning regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub enum Backend {
    #[default]
    Fixpoint,
    LarOracle { budget: usize },
}


/// Solves with the chosen backend.
pub fn solve(arena: &SuspectArena, game: &ConcurrentGame, losers: AgentSet, backend: Backend) -> Result<WinningRegion, SolveError> {
    match backend {
        Backend::Fixpoint => solve_eve_region(arena, game, losers),
        Backend::LarOracle { budget } => lar_oracle_solve(arena, game, losers, budget),
    }
}

/// A history summary: a dense arena vertex index and the agents of
/// `P ∩ L` whose reach/safety set the history has visited. The second
/// component is always empty for classes that read only recurring states.
pub type RegionKey = (usize, AgentSet);

/// Eve's and Adam's winning regions over the materialised history summaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningRegion {
    losers: AgentSet,
    augmented: bool,
    /// Suspect set of each dense arena vertex.
    suspects: Vec<AgentSet>,
    eve: HashSet<RegionKey>,
    adam: HashSet<RegionKey>,
    initial: RegionKey,
}

impl WinningRegion {
    fn from_values(
        arena: &SuspectArena,
        losers: AgentSet,
        augmented: bool,
        values: HashMap<RegionKey, bool>,
        initial: RegionKey,
    ) -> Self {
        let suspects = (0..arena.num_vertices()).map(|i| arena.state_of(arena.vertex(i)).1).collect();
        let (mut eve, mut adam) = (HashSet::new(), HashSet::new());
        for (k, wins) in values {
            if wins {
                eve.insert(k);
            } else {
                adam.insert(k);
            }
        }
        WinningRegion {
            losers,
            augmented,
            suspects,
            eve,
            adam,
            initial,
        }
    }

    pub fn losers(&self) -> AgentSet {
        self.losers
    }

    /// Whether keys carry the visited-set component.
    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn key(&self, vertex: usize, touched: AgentSet) -> RegionKey {
        if self.augmented {
            (vertex, touched.intersection(self.suspects[vertex]).intersection(self.losers))
        } else {
            (vertex, AgentSet::EMPTY)
        }
    }

    /// Whether Eve wins after a history ending at `vertex` (dense index)
    /// that has visited the reach/safety sets of the agents in `touched`.
    /// `None` when no such history is materialised.
    pub fn eve_wins(&self, vertex: usize, touched: AgentSet) -> Option<bool> {
        let k = self.key(vertex, touched);
        if self.eve.contains(&k) {
            Some(true)
        } else if self.adam.contains(&k) {
            Some(false)
        } else {
            None
        }
    }

    pub fn initial_wins(&self) -> bool {
        self.eve.contains(&self.initial)
    }

    pub fn eve_keys(&self) -> &HashSet<RegionKey> {
        &self.eve
    }

    pub fn adam_keys(&self) -> &HashSet<RegionKey> {
        &self.adam
    }
}

#[cfg(test)]
mod tests;
