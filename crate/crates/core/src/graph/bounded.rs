use std::collections::{BTreeMap, HashMap};

use crate::model::{ConcurrentGame, Lasso, StateId, StateSet};

/// Restricts the steps of plays summarised by [`bounded_summaries`].
///
/// `visited` holds every state seen before the step, including `from`.
/// `on_cycle` is true for steps inside the cycle, including the closing one.
pub trait BoundedFilter: Sync {
    fn allows(&self, from: StateId, to: StateId, visited: &StateSet, on_cycle: bool) -> bool;
}

impl<F: Fn(StateId, StateId, &StateSet, bool) -> bool + Sync> BoundedFilter for F {
    fn allows(&self, from: StateId, to: StateId, visited: &StateSet, on_cycle: bool) -> bool {
        self(from, to, visited, on_cycle)
    }
}

type Node = (StateId, StateSet);

/// Every distinct `(occ, inf)` pair of a lasso from `source` with at most
/// `stem_bound` stem states and at most `cycle_bound` cycle states, using
/// only allowed steps, each with a shortest witness.
///
/// Works on (state, visited set) pairs rather than on explicit lassos, so the
/// cost is polynomial in the number of such pairs, not in walk counts.
pub fn bounded_summaries(
    game: &ConcurrentGame,
    source: StateId,
    stem_bound: usize,
    cycle_bound: usize,
    filter: &impl BoundedFilter,
) -> BTreeMap<(StateSet, StateSet), Lasso> {
    let n = game.num_states();
    let start: Node = (source, StateSet::from_states(n, [source]));
    let (stem_order, stem_parent) = layered_bfs(game, start, stem_bound, |s, t, visited| {
        filter.allows(s, t, visited, false)
    });

    let mut out: BTreeMap<(StateSet, StateSet), Lasso> = BTreeMap::new();
    for entry in &stem_order {
        let (x, occ_before) = entry;
        let stem = trace(&stem_parent, entry);
        let cycle_start: Node = (*x, StateSet::from_states(n, [*x]));
        let (cycle_order, cycle_parent) =
            layered_bfs(game, cycle_start, cycle_bound.saturating_sub(1), |s, t, inside| {
                let mut visited = occ_before.clone();
                visited.union_with(inside);
                filter.allows(s, t, &visited, true)
            });
        for node in &cycle_order {
            let (y, inside) = node;
            let mut visited = occ_before.clone();
            visited.union_with(inside);
            if !game.has_edge(*y, *x) || !filter.allows(*y, *x, &visited, true) {
                continue;
            }
            let key = (visited, inside.clone());
            if out.contains_key(&key) {
                continue;
            }
            let mut cycle = trace(&cycle_parent, node);
            cycle.push(*y);
            let lasso = Lasso::new(stem.clone(), cycle);
            out.insert(key, lasso);
        }
    }
    out
}

/// All `(occ, inf)` pairs within the bounds, with no step restriction.
pub fn distinct_occ_inf(
    game: &ConcurrentGame,
    source: StateId,
    stem_bound: usize,
    cycle_bound: usize,
) -> BTreeMap<(StateSet, StateSet), Lasso> {
    bounded_summaries(game, source, stem_bound, cycle_bound, &|_, _, _: &StateSet, _| true)
}

/// Breadth-first search over (state, visited set) pairs up to `depth` steps.
/// Returns the nodes in discovery order and their parents.
fn layered_bfs(
    game: &ConcurrentGame,
    start: Node,
    depth: usize,
    allows: impl Fn(StateId, StateId, &StateSet) -> bool,
) -> (Vec<Node>, HashMap<Node, Option<Node>>) {
    let mut parent = HashMap::from([(start.clone(), None)]);
    let mut order = vec![start];
    let mut frontier = 0..1;
    for _ in 0..depth {
        let begin = order.len();
        for k in frontier.clone() {
            let (s, visited) = order[k].clone();
            for &t in game.successors(s) {
                if !allows(s, t, &visited) {
                    continue;
                }
                let next = (t, visited.with(t));
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((s, visited.clone())));
                    order.push(next);
                }
            }
        }
        frontier = begin..order.len();
        if frontier.is_empty() {
            break;
        }
    }
    (order, parent)
}

/// States on the path to `node`, excluding `node` itself.
fn trace(parent: &HashMap<Node, Option<Node>>, node: &Node) -> Vec<StateId> {
    let mut path = Vec::new();
    let mut cursor = parent[node].clone();
    while let Some(prev) = cursor {
        path.push(prev.0);
        cursor = parent[&prev].clone();
    }
    path.reverse();
    path
}
