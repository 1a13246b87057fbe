use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::arena::{SuspectArena, Vertex};
use crate::model::{AgentSet, ConcurrentGame, ObjectiveClass, StateSet};

use super::attractor::attractor;
use super::fixpoint::{cobuchi_eve, generalized_buchi_eve, mcnaughton};
use super::{GameGraph, Player, RegionKey, SolveError, WinningRegion};

/// Eve's winning region in the arena for loser set `losers`: she wins a
/// play iff every agent of `losers` that is suspect forever loses the
/// projected play.
///
/// Reach and safety games are solved on the arena augmented with the set of
/// suspect losers whose target or unsafe set was visited; Büchi games
/// directly as a coBüchi game; coBüchi, parity and Muller games layer by
/// layer over the suspect sets, smallest first.
pub fn solve_eve_region(
    arena: &SuspectArena,
    game: &ConcurrentGame,
    losers: AgentSet,
) -> Result<WinningRegion, SolveError> {
    let class = game
        .objective_class()
        .ok_or_else(|| SolveError::Contract("objectives of mixed classes".into()))?;
    Ok(match class {
        ObjectiveClass::Reach | ObjectiveClass::Safety => augmented(arena, game, losers, class),
        ObjectiveClass::Buchi => buchi(arena, game, losers),
        ObjectiveClass::CoBuchi | ObjectiveClass::Parity | ObjectiveClass::Muller => {
            layered(arena, game, losers, class)
        }
    })
}

fn augmented(arena: &SuspectArena, game: &ConcurrentGame, losers: AgentSet, class: ObjectiveClass) -> WinningRegion {
    let suspects = |d: usize| arena.state_of(arena.vertex(d)).1;
    let norm = |d: usize, b: AgentSet| b.intersection(suspects(d)).intersection(losers);
    let start: RegionKey = (0, norm(0, game.agents_marking(arena.source())));

    let mut graph = GameGraph::new();
    let mut keys = vec![start];
    let mut index = HashMap::from([(start, 0)]);
    graph.add_vertex(Player::Eve);
    let mut queue = VecDeque::from([0]);
    while let Some(id) = queue.pop_front() {
        let (d, b) = keys[id];
        let next: Vec<RegionKey> = match arena.vertex(d) {
            Vertex::Eve(e) => arena.adam_states_of(e).map(|a| (arena.num_eve() + a, b)).collect(),
            Vertex::Adam(a) => arena
                .adam_successors(a)
                .iter()
                .map(|&e| (e, norm(e, b.union(game.agents_marking(arena.eve_state(e).0)))))
                .collect(),
        };
        for k in next {
            let to = *index.entry(k).or_insert_with(|| {
                keys.push(k);
                graph.add_vertex(if k.0 < arena.num_eve() { Player::Eve } else { Player::Adam });
                queue.push_back(keys.len() - 1);
                keys.len() - 1
            });
            graph.add_edge(id, to);
        }
    }

    let mut bad = FixedBitSet::with_capacity(graph.len());
    for (id, &(d, b)) in keys.iter().enumerate() {
        if d >= arena.num_eve() {
            continue;
        }
        let is_bad = match class {
            ObjectiveClass::Reach => !b.is_empty(),
            _ => b != suspects(d).intersection(losers),
        };
        if is_bad {
            bad.insert(id);
        }
    }
    let (eve, _) = cobuchi_eve(&graph, &graph.full_mask(), &bad);
    let values = keys.iter().enumerate().map(|(id, &k)| (k, eve.contains(id))).collect();
    WinningRegion::from_values(arena, losers, true, values, start)
}

fn buchi(arena: &SuspectArena, game: &ConcurrentGame, losers: AgentSet) -> WinningRegion {
    let graph = GameGraph::from_arena(arena);
    let mut bad = FixedBitSet::with_capacity(graph.len());
    for e in 0..arena.num_eve() {
        let (s, p) = arena.eve_state(e);
        if !game.agents_marking(s).intersection(p).intersection(losers).is_empty() {
            bad.insert(e);
        }
    }
    let (eve, _) = cobuchi_eve(&graph, &graph.full_mask(), &bad);
    let values = (0..graph.len()).map(|d| ((d, AgentSet::EMPTY), eve.contains(d))).collect();
    WinningRegion::from_values(arena, losers, false, values, (0, AgentSet::EMPTY))
}

fn layered(arena: &SuspectArena, game: &ConcurrentGame, losers: AgentSet, class: ObjectiveClass) -> WinningRegion {
    let full = GameGraph::from_arena(arena);
    let n_eve = arena.num_eve();
    let mut value: Vec<Option<bool>> = vec![None; full.len()];

    for ((_, p), eves) in arena.layers() {
        let members: Vec<usize> = eves
            .iter()
            .copied()
            .chain(eves.iter().flat_map(|&e| arena.adam_states_of(e).map(|a| n_eve + a)))
            .collect();
        let active = p.intersection(losers);
        if active.is_empty() {
            for &d in &members {
                value[d] = Some(true);
            }
            continue;
        }

        // Local closed game: the layer plus one sink per exit value.
        let mut local = GameGraph::new();
        let eve_sink = local.add_vertex(Player::Eve);
        let adam_sink = local.add_vertex(Player::Adam);
        local.add_edge(eve_sink, eve_sink);
        local.add_edge(adam_sink, adam_sink);
        let mut to_local = HashMap::new();
        for &d in &members {
            to_local.insert(d, local.add_vertex(full.owner(d)));
        }
        for &d in &members {
            for &w in full.successors(d) {
                let target = match to_local.get(&w) {
                    Some(&l) => l,
                    None if value[w].expect("lower layers are solved") => eve_sink,
                    None => adam_sink,
                };
                local.add_edge(to_local[&d], target);
            }
        }
        let all = local.full_mask();
        let mut sink = FixedBitSet::with_capacity(local.len());
        sink.insert(eve_sink);
        let to_eve = attractor(&local, Player::Eve, &all, &sink);
        let mut rest = all.clone();
        rest.difference_with(&to_eve);
        sink.clear();
        sink.insert(adam_sink);
        let to_adam = attractor(&local, Player::Adam, &rest, &sink);
        rest.difference_with(&to_adam);

        let state_of_local: Vec<usize> = std::iter::once(0)
            .chain(std::iter::once(0))
            .chain(members.iter().map(|&d| arena.state_of(arena.vertex(d)).0))
            .collect();
        let (eve, _) = match class {
            ObjectiveClass::CoBuchi => {
                let targets: Vec<FixedBitSet> = active
                    .iter()
                    .map(|i| {
                        let f = game.objective(i).state_set().expect("coBüchi objective has a set");
                        let mut t = FixedBitSet::with_capacity(local.len());
                        for l in rest.ones().filter(|&l| f.contains(state_of_local[l])) {
                            t.insert(l);
                        }
                        t
                    })
                    .collect();
                generalized_buchi_eve(&local, &rest, &targets)
            }
            _ => {
                let eve_wins =
                    |inf: &StateSet| active.iter().all(|i| !game.objective(i).holds(inf, inf));
                mcnaughton(&local, &rest, game.num_states(), &|l| state_of_local[l], &eve_wins)
            }
        };
        for &d in &members {
            let l = to_local[&d];
            value[d] = Some(to_eve.contains(l) || eve.contains(l));
        }
    }
    let values = value
        .into_iter()
        .enumerate()
        .map(|(d, v)| ((d, AgentSet::EMPTY), v.expect("every layer is solved")))
        .collect();
    WinningRegion::from_values(arena, losers, false, values, (0, AgentSet::EMPTY))
}
