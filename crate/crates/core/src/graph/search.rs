use std::collections::{HashMap, HashSet, VecDeque};

use crate::model::{AgentSet, ConcurrentGame, Lasso, Objective, StateId, StateSet, WinnerProfile};

use super::scc::strongly_connected_components;

/// Restricts which steps a searched play may take.
///
/// `touched` holds the agents with a reach or safety objective that the play
/// is required to touch (reach winners, safety losers) and whose state set it
/// has already visited, up to and including `from`.
pub trait EdgeFilter: Sync {
    fn allows(&self, from: StateId, to: StateId, touched: AgentSet) -> bool;
}

/// Every edge of the move graph.
pub struct AllEdges;

impl EdgeFilter for AllEdges {
    fn allows(&self, _: StateId, _: StateId, _: AgentSet) -> bool {
        true
    }
}

impl<F: Fn(StateId, StateId, AgentSet) -> bool + Sync> EdgeFilter for F {
    fn allows(&self, from: StateId, to: StateId, touched: AgentSet) -> bool {
        self(from, to, touched)
    }
}

/// What a play must do for one agent whose objective reads recurring states.
enum InfRequirement<'a> {
    Buchi { set: &'a StateSet, win: bool },
    CoBuchi { set: &'a StateSet, win: bool },
    Parity { priority: &'a [u32], win: bool },
    Muller { objective: &'a Objective, win: bool },
}

enum Check {
    Accept,
    Reject,
    Remove(StateSet),
    Branch(Vec<StateSet>),
}

/// Finds a play from `source`, using only steps allowed by `filter`, whose
/// payoff is exactly `profile`. The returned lasso is canonical.
///
/// Agents of any class may be mixed. Reach and safety agents are handled by
/// tracking which required sets were touched; the remaining agents by
/// refining strongly connected sets of the final level until one satisfies
/// every recurrence requirement.
pub fn find_play(
    game: &ConcurrentGame,
    source: StateId,
    profile: WinnerProfile,
    filter: &impl EdgeFilter,
) -> Option<Lasso> {
    let n = game.num_states();
    let mut forbidden = StateSet::new(n);
    let mut must = AgentSet::EMPTY;
    let mut inf_reqs = Vec::new();
    for (i, obj) in game.objectives().iter().enumerate() {
        let win = profile.wins(i);
        match obj {
            Objective::Reach(_) if win => must.insert(i),
            Objective::Reach(f) => forbidden.union_with(f),
            Objective::Safety(f) if win => forbidden.union_with(f),
            Objective::Safety(_) => must.insert(i),
            Objective::Buchi(f) => inf_reqs.push(InfRequirement::Buchi { set: f, win }),
            Objective::CoBuchi(f) => inf_reqs.push(InfRequirement::CoBuchi { set: f, win }),
            Objective::Parity(p) => inf_reqs.push(InfRequirement::Parity { priority: p, win }),
            Objective::Muller(_) => inf_reqs.push(InfRequirement::Muller { objective: obj, win }),
        }
    }
    if forbidden.contains(source) {
        return None;
    }
    let signature = |s: StateId| -> AgentSet {
        must.iter()
            .filter(|&i| game.objective(i).state_set().is_some_and(|f| f.contains(s)))
            .collect()
    };

    // BFS over (state, touched) with parent pointers for stem reconstruction.
    let start = (source, signature(source));
    let mut parent: HashMap<(StateId, AgentSet), Option<(StateId, AgentSet)>> = HashMap::new();
    let mut order = Vec::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some((s, touched)) = queue.pop_front() {
        order.push((s, touched));
        for &t in game.successors(s) {
            if forbidden.contains(t) || !filter.allows(s, t, touched) {
                continue;
            }
            let next = (t, touched.union(signature(t)));
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((s, touched)));
                queue.push_back(next);
            }
        }
    }

    // States reachable at the final level, in BFS order.
    let level: Vec<StateId> = order.iter().filter(|(_, t)| *t == must).map(|(s, _)| *s).collect();
    if level.is_empty() {
        return None;
    }
    let region = StateSet::from_states(n, level.iter().copied());
    let level_succ = |s: StateId, within: &StateSet| -> Vec<StateId> {
        game.successors(s)
            .iter()
            .copied()
            .filter(|&t| within.contains(t) && filter.allows(s, t, must))
            .collect()
    };

    let accepted = refine(n, &region, &inf_reqs, &level_succ)?;

    let target = *level.iter().find(|&&s| accepted.contains(s)).expect("accepted set lies in the level");
    let mut stem = Vec::new();
    let mut cursor = parent[&(target, must)];
    while let Some(node) = cursor {
        stem.push(node.0);
        cursor = parent[&node];
    }
    stem.reverse();
    let cycle = covering_cycle(target, &accepted, |s| level_succ(s, &accepted));
    Some(Lasso::new(stem, cycle).canonical())
}

/// Depth-first refinement of strongly connected subsets of `region`.
fn refine(
    n: usize,
    region: &StateSet,
    reqs: &[InfRequirement<'_>],
    succ: &impl Fn(StateId, &StateSet) -> Vec<StateId>,
) -> Option<StateSet> {
    let mut seen = HashSet::new();
    let mut stack = components(n, region, succ);
    stack.reverse();
    while let Some(candidate) = stack.pop() {
        if !seen.insert(candidate.clone()) {
            continue;
        }
        let pieces: Vec<StateSet> = match check(&candidate, reqs) {
            Check::Accept => return Some(candidate),
            Check::Reject => continue,
            Check::Remove(drop) => {
                let mut rest = candidate.clone();
                rest.difference_with(&drop);
                components(n, &rest, succ)
            }
            Check::Branch(drops) => drops
                .iter()
                .flat_map(|drop| {
                    let mut rest = candidate.clone();
                    rest.difference_with(drop);
                    components(n, &rest, succ)
                })
                .collect(),
        };
        stack.extend(pieces.into_iter().rev());
    }
    None
}

/// Nontrivial SCCs of the subgraph induced by `within`, ordered by least state.
fn components(n: usize, within: &StateSet, succ: &impl Fn(StateId, &StateSet) -> Vec<StateId>) -> Vec<StateSet> {
    let mut out: Vec<StateSet> = strongly_connected_components(n, within.iter(), |s| succ(s, within))
        .into_iter()
        .filter(|c| c.len() > 1 || succ(c[0], within).contains(&c[0]))
        .map(|c| StateSet::from_states(n, c))
        .collect();
    out.sort_by_key(|c| c.first());
    out
}

fn check(candidate: &StateSet, reqs: &[InfRequirement<'_>]) -> Check {
    let mut drop = StateSet::new(candidate.capacity());
    let mut branch = None;
    for req in reqs {
        match *req {
            InfRequirement::Buchi { set, win } => {
                if win && !candidate.intersects(set) {
                    return Check::Reject;
                }
                if !win {
                    drop.union_with(set);
                }
            }
            InfRequirement::CoBuchi { set, win } => {
                if !win && !candidate.intersects(set) {
                    return Check::Reject;
                }
                if win {
                    drop.union_with(set);
                }
            }
            InfRequirement::Parity { priority, win } => {
                let least = candidate.iter().map(|s| priority[s]).min().expect("candidate nonempty");
                if (least % 2 == 0) != win {
                    drop.union_with(&StateSet::from_states(
                        candidate.capacity(),
                        candidate.iter().filter(|&s| priority[s] == least),
                    ));
                }
            }
            InfRequirement::Muller { objective, win } => {
                let Objective::Muller(cond) = objective else { unreachable!() };
                if cond.accepts(candidate) != win && branch.is_none() {
                    let colours = cond.colour_mask(candidate);
                    let drops = (0..cond.colours().len())
                        .filter(|k| colours >> k & 1 == 1)
                        .map(|k| {
                            StateSet::from_states(
                                candidate.capacity(),
                                candidate.iter().filter(|&s| cond.colour_of(s) == k),
                            )
                        })
                        .collect();
                    branch = Some(drops);
                }
            }
        }
    }
    drop.intersect_with(candidate);
    if !drop.is_empty() {
        Check::Remove(drop)
    } else if let Some(drops) = branch {
        Check::Branch(drops)
    } else {
        Check::Accept
    }
}

/// A closed walk from `start` visiting every state of the strongly
/// connected set `scc`, returned without the final repetition of `start`.
fn covering_cycle(start: StateId, scc: &StateSet, succ: impl Fn(StateId) -> Vec<StateId>) -> Vec<StateId> {
    let mut walk = vec![start];
    let mut pending = scc.clone();
    pending.remove(start);
    let mut at = start;
    loop {
        let done = pending.is_empty();
        let path = shortest_path(at, |s| if done { s == start } else { pending.contains(s) }, &succ)
            .expect("set is strongly connected");
        for &s in &path {
            pending.remove(s);
        }
        at = *path.last().unwrap_or(&at);
        if done {
            walk.extend(&path[..path.len() - 1]);
            return walk;
        }
        walk.extend(path);
    }
}

/// States after `from` on a shortest path to a goal state, reached by at
/// least one step.
fn shortest_path(
    from: StateId,
    goal: impl Fn(StateId) -> bool,
    succ: &impl Fn(StateId) -> Vec<StateId>,
) -> Option<Vec<StateId>> {
    let mut parent: HashMap<StateId, StateId> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(s) = queue.pop_front() {
        for t in succ(s) {
            if goal(t) {
                let mut path = vec![t];
                let mut cur = s;
                while cur != from {
                    path.push(cur);
                    cur = parent[&cur];
                }
                path.reverse();
                return Some(path);
            }
            if seen.insert(t) {
                parent.insert(t, s);
                queue.push_back(t);
            }
        }
    }
    None
}
