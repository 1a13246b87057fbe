//! Graph analysis of the move graph: SCCs, lasso enumeration, bounded
//! `(occ, inf)` summaries, play search under payoff constraints, and
//! achievable payoff profiles.

mod bounded;
mod enumerate;
mod profiles;
mod scc;
mod search;

use crate::model::{ConcurrentGame, MoveId, StateId};

pub use bounded::{bounded_summaries, distinct_occ_inf, BoundedFilter};
pub use enumerate::{enumerate_lassos, LassoIter};
pub use profiles::{achievable_profiles, achievable_profiles_bounded, pareto_front};
pub use scc::{strongly_connected_components, tarjan_sccs, SccDecomposition};
pub use search::{find_play, AllEdges, EdgeFilter};

/// The directed graph underlying a game: an edge `s → t` for every move
/// at `s` leading to `t`, labelled with those moves.
#[derive(Clone, Debug)]
pub struct MoveGraph {
    successors: Vec<Vec<StateId>>,
    /// `labels[s][k]`: moves of `s` leading to `successors[s][k]`, ascending.
    labels: Vec<Vec<Vec<MoveId>>>,
}

impl MoveGraph {
    pub fn new(game: &ConcurrentGame) -> Self {
        let mut successors = Vec::with_capacity(game.num_states());
        let mut labels = Vec::with_capacity(game.num_states());
        for s in 0..game.num_states() {
            let succ = game.successors(s).to_vec();
            let mut lab = vec![Vec::new(); succ.len()];
            for m in game.moves(s) {
                let t = game.transition(s, m);
                let k = succ.binary_search(&t).expect("successor list is complete");
                lab[k].push(m);
            }
            successors.push(succ);
            labels.push(lab);
        }
        MoveGraph { successors, labels }
    }

    pub fn num_states(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.successors[s]
    }

    /// Moves realising the edge `s → t`; empty when there is no such edge.
    pub fn moves_between(&self, s: StateId, t: StateId) -> &[MoveId] {
        match self.successors[s].binary_search(&t) {
            Ok(k) => &self.labels[s][k],
            Err(_) => &[],
        }
    }

    pub fn num_edges(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }
}
