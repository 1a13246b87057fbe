use std::collections::BTreeMap;

use crate::graph::bounded_summaries;
use crate::model::{profile_of, AgentSet, Lasso, ObjectiveClass, StateSet, WinnerProfile};

use super::{EquilibriumError, Solver};

/// Equilibrium payoffs realised by lassos with at most `stem_bound` stem
/// states and `cycle_bound` cycle states, each with a shortest witness.
///
/// Explores (state, visited set) pairs once per loser set, independently of
/// the per-profile play search used by the deciders.
pub fn bounded_ne_profiles(
    solver: &Solver<'_>,
    stem_bound: usize,
    cycle_bound: usize,
) -> Result<BTreeMap<WinnerProfile, Lasso>, EquilibriumError> {
    let game = solver.game();
    let n = game.num_agents();
    let touched = |visited: &StateSet| visited.iter().fold(AgentSet::EMPTY, |acc, s| acc.union(game.agents_marking(s)));
    let safety = game.objective_class() == Some(ObjectiveClass::Safety);
    let mut out = BTreeMap::new();
    for bits in 0..1u64 << n {
        let losers = AgentSet::from_bits(bits);
        let region = solver.region(losers)?;
        if !region.initial_wins() {
            continue;
        }
        let filter = |s: usize, t: usize, visited: &StateSet, on_cycle: bool| {
            let now = touched(visited);
            // later passes around a safety cycle happen after every loser
            // has visited its unsafe set
            solver.good_step(&region, s, t, now)
                && !(on_cycle && safety && !solver.good_step(&region, s, t, game.all_agents()))
        };
        for ((occ, inf), lasso) in bounded_summaries(game, solver.source(), stem_bound, cycle_bound, &filter) {
            let p = profile_of(game, &occ, &inf);
            if p.losers() == losers {
                out.entry(p).or_insert(lasso);
            }
        }
    }
    Ok(out)
}
