use std::collections::{BTreeSet, HashSet, VecDeque};

use rayon::prelude::*;

use crate::model::{profile_of, AgentSet, Objective, ConcurrentGame, StateId, StateSet, WinnerProfile};

use super::bounded::distinct_occ_inf;
use super::scc::strongly_connected_components;
use super::search::{find_play, AllEdges};

/// Payoff profiles of all plays from `source`.
///
/// When every objective is reach or safety, a single search over
/// (state, touched agents) pairs suffices: a pair yields a profile when its
/// state lies on a cycle that stays among states touching nothing new.
/// Otherwise each of the `2^n` profiles is tested with [`find_play`].
pub fn achievable_profiles(game: &ConcurrentGame, source: StateId) -> BTreeSet<WinnerProfile> {
    let agents = game.num_agents();
    if game.objectives().iter().all(|o| o.class().depends_on_occ()) {
        return occ_profiles(game, source);
    }
    assert!(agents < 24, "profile enumeration over {agents} agents is not supported");
    (0..1u64 << agents)
        .into_par_iter()
        .map(|bits| WinnerProfile::new(AgentSet::from_bits(bits), agents))
        .filter(|&p| find_play(game, source, p, &AllEdges).is_some())
        .collect()
}

fn occ_profiles(game: &ConcurrentGame, source: StateId) -> BTreeSet<WinnerProfile> {
    let n = game.num_states();
    let agents = game.num_agents();
    let signature: Vec<AgentSet> = (0..n)
        .map(|s| {
            (0..agents)
                .filter(|&i| game.objective(i).state_set().is_some_and(|f| f.contains(s)))
                .collect()
        })
        .collect();

    let start = (source, signature[source]);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut levels: BTreeSet<AgentSet> = BTreeSet::new();
    let mut reached = Vec::new();
    while let Some((s, touched)) = queue.pop_front() {
        reached.push((s, touched));
        levels.insert(touched);
        for &t in game.successors(s) {
            let next = (t, touched.union(signature[t]));
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }

    let mut out = BTreeSet::new();
    for touched in levels {
        let inside = |s: StateId| signature[s].is_subset(touched);
        let cyclic = cyclic_states(n, |s| {
            if inside(s) {
                game.successors(s).iter().copied().filter(|&t| inside(t)).collect()
            } else {
                Vec::new()
            }
        });
        if reached.iter().any(|&(s, t)| t == touched && cyclic.contains(s)) {
            let winners = (0..agents)
                .filter(|&i| matches!(game.objective(i), Objective::Reach(_)) == touched.contains(i))
                .collect();
            out.insert(WinnerProfile::new(winners, agents));
        }
    }
    out
}

/// States lying on some cycle of the graph given by `succ`.
fn cyclic_states(n: usize, succ: impl Fn(StateId) -> Vec<StateId>) -> StateSet {
    let mut out = StateSet::new(n);
    for comp in strongly_connected_components(n, 0..n, &succ) {
        if comp.len() > 1 || succ(comp[0]).contains(&comp[0]) {
            for s in comp {
                out.insert(s);
            }
        }
    }
    out
}

/// Payoff profiles of lassos within the given bounds.
pub fn achievable_profiles_bounded(
    game: &ConcurrentGame,
    source: StateId,
    stem_bound: usize,
    cycle_bound: usize,
) -> BTreeSet<WinnerProfile> {
    distinct_occ_inf(game, source, stem_bound, cycle_bound)
        .keys()
        .map(|(occ, inf)| profile_of(game, occ, inf))
        .collect()
}

/// The Pareto-maximal elements of a set of profiles.
pub fn pareto_front(profiles: &BTreeSet<WinnerProfile>) -> BTreeSet<WinnerProfile> {
    profiles
        .iter()
        .filter(|&p| !profiles.iter().any(|q| q != p && p.le(q)))
        .copied()
        .collect()
}
