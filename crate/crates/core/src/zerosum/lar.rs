use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::arena::{SuspectArena, Vertex};
use crate::model::{AgentSet, ConcurrentGame, StateId, StateSet};

use super::zielonka::zielonka;
use super::{GameGraph, Player, RegionKey, SolveError, WinningRegion};

/// Default cap on the number of product vertices the oracle may build.
pub const DEFAULT_ORACLE_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Memory {
    /// Game states visited so far (reach and safety).
    Visited(StateSet),
    /// Game states ordered by latest appearance, most recent first.
    Record(Vec<StateId>),
}

/// Eve's winning region computed independently of [`super::solve_eve_region`]:
/// the arena is multiplied with a memory (the visited set for reach and
/// safety, a latest appearance record otherwise), Eve's condition becomes a
/// max-parity condition on the product, and Zielonka's algorithm solves it.
///
/// Fails with [`SolveError::OracleInfeasible`] when the product would exceed
/// `budget` vertices.
pub fn lar_oracle_solve(
    arena: &SuspectArena,
    game: &ConcurrentGame,
    losers: AgentSet,
    budget: usize,
) -> Result<WinningRegion, SolveError> {
    let class = game
        .objective_class()
        .ok_or_else(|| SolveError::Contract("objectives of mixed classes".into()))?;
    let n = game.num_states();
    let n_eve = arena.num_eve();
    let eve_condition =
        |p: AgentSet, occ: &StateSet, inf: &StateSet| p.intersection(losers).iter().all(|i| !game.objective(i).holds(occ, inf));

    let start = (
        0,
        if class.depends_on_occ() {
            Memory::Visited(StateSet::new(n))
        } else {
            Memory::Record((0..n).collect())
        },
    );
    let mut graph = GameGraph::new();
    let mut nodes = vec![start.clone()];
    let mut priority = Vec::new();
    let mut index = HashMap::from([(start, 0)]);
    graph.add_vertex(Player::Eve);
    let mut queue = VecDeque::from([0]);
    while let Some(id) = queue.pop_front() {
        let (d, mem) = nodes[id].clone();
        let next: Vec<(usize, Memory)> = match arena.vertex(d) {
            Vertex::Eve(e) => {
                let (s, p) = arena.eve_state(e);
                let (prio, after) = match mem {
                    Memory::Visited(v) => {
                        let after = v.with(s);
                        (u32::from(!eve_condition(p, &after, &after)), Memory::Visited(after))
                    }
                    Memory::Record(mut rec) => {
                        let h = rec.iter().position(|&x| x == s).expect("record holds every state");
                        let hit = StateSet::from_states(n, rec[..=h].iter().copied());
                        let prio = 2 * h as u32 + u32::from(!eve_condition(p, &hit, &hit));
                        rec[..=h].rotate_right(1);
                        (prio, Memory::Record(rec))
                    }
                };
                priority.push(prio);
                arena.adam_states_of(e).map(|a| (n_eve + a, after.clone())).collect()
            }
            Vertex::Adam(a) => {
                priority.push(0);
                arena.adam_successors(a).iter().map(|&e| (e, mem.clone())).collect()
            }
        };
        for key in next {
            let to = match index.entry(key) {
                Entry::Occupied(o) => *o.get(),
                Entry::Vacant(v) => {
                    if nodes.len() >= budget {
                        return Err(SolveError::OracleInfeasible { budget });
                    }
                    let id = nodes.len();
                    nodes.push(v.key().clone());
                    v.insert(id);
                    graph.add_vertex(if id_is_eve(&nodes[id], n_eve) { Player::Eve } else { Player::Adam });
                    queue.push_back(id);
                    id
                }
            };
            graph.add_edge(id, to);
        }
    }

    let (eve, _) = zielonka(&graph, &graph.full_mask(), &priority);

    let touched = |v: &StateSet| -> AgentSet { v.iter().fold(AgentSet::EMPTY, |acc, s| acc.union(game.agents_marking(s))) };
    let key_of = |d: usize, mem: &Memory| -> RegionKey {
        match mem {
            Memory::Record(_) => (d, AgentSet::EMPTY),
            Memory::Visited(v) => {
                let (s, p) = arena.state_of(arena.vertex(d));
                let seen = if d < n_eve { v.with(s) } else { v.clone() };
                (d, touched(&seen).intersection(p).intersection(losers))
            }
        }
    };
    let mut values: HashMap<RegionKey, bool> = HashMap::new();
    for (id, (d, mem)) in nodes.iter().enumerate() {
        let wins = eve.contains(id);
        if let Some(old) = values.insert(key_of(*d, mem), wins) {
            if old != wins {
                return Err(SolveError::Contract(format!(
                    "oracle region depends on more than the history summary at arena vertex {d}"
                )));
            }
        }
    }
    let initial = key_of(nodes[0].0, &nodes[0].1);
    Ok(WinningRegion::from_values(arena, losers, class.depends_on_occ(), values, initial))
}

fn id_is_eve(node: &(usize, Memory), n_eve: usize) -> bool {
    node.0 < n_eve
}
