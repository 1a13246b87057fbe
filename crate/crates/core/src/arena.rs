//! The suspect arena: a two-player turn-based game in which Eve proposes
//! moves of the concurrent game and Adam either obeys or picks another
//! successor, with the set of agents that could have caused each deviation
//! carried along.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde_json::{json, Value};

use crate::model::{AgentSet, ConcurrentGame, Lasso, ModelError, MoveId, StateId};

/// Agents that could have turned move `m` at `s` into a step to `next` by
/// changing only their own action. All agents when `m` itself leads there.
pub fn suspects(game: &ConcurrentGame, s: StateId, next: StateId, m: MoveId) -> Result<AgentSet, ModelError> {
    if s >= game.num_states() || next >= game.num_states() {
        return Err(ModelError::Contract("state index out of range".into()));
    }
    if m >= game.num_moves(s) {
        return Err(ModelError::Contract(format!(
            "move {m} is not legal at {} ({} moves)",
            game.state_name(s),
            game.num_moves(s)
        )));
    }
    Ok(suspect_row(game, s, m).remove(&next).unwrap_or_default())
}

/// Suspect set of every successor reachable from `s` by some unilateral
/// deviation from `m`, including `tr(s, m)` itself.
fn suspect_row(game: &ConcurrentGame, s: StateId, m: MoveId) -> HashMap<StateId, AgentSet> {
    let mut row: HashMap<StateId, AgentSet> = HashMap::new();
    row.insert(game.transition(s, m), game.all_agents());
    for i in 0..game.num_agents() {
        for pos in 0..game.available(s, i).len() {
            let t = game.transition(s, game.deviate(s, m, i, pos));
            row.entry(t).or_default().insert(i);
        }
    }
    row
}

/// A vertex of the arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// Eve state `(s, P)`, by index.
    Eve(usize),
    /// Adam state `(s, P, ā)`, by index.
    Adam(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct AdamState {
    eve: usize,
    mv: MoveId,
    /// Successor Eve states, one per successor game state, ascending by state.
    succ: Vec<usize>,
    /// Position in `succ` of the obedient successor.
    obey: usize,
}

/// The reachable part of the suspect arena from `(source, Agt)`.
///
/// Eve states are numbered in breadth-first discovery order; the Adam
/// states of Eve state `e` are numbered consecutively in move order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuspectArena {
    agents: usize,
    source: StateId,
    eve: Vec<(StateId, AgentSet)>,
    eve_index: HashMap<(StateId, AgentSet), usize>,
    /// First Adam state of each Eve state.
    adam_start: Vec<usize>,
    adam: Vec<AdamState>,
}

pub fn build_arena(game: &ConcurrentGame, source: StateId) -> SuspectArena {
    let all = game.all_agents();
    let mut arena = SuspectArena {
        agents: game.num_agents(),
        source,
        eve: vec![(source, all)],
        eve_index: HashMap::from([((source, all), 0)]),
        adam_start: Vec::new(),
        adam: Vec::new(),
    };
    let mut queue = VecDeque::from([0]);
    while let Some(e) = queue.pop_front() {
        let (s, p) = arena.eve[e];
        debug_assert_eq!(arena.adam_start.len(), e);
        arena.adam_start.push(arena.adam.len());
        for m in game.moves(s) {
            let row = suspect_row(game, s, m);
            let target = game.transition(s, m);
            let mut succ = Vec::with_capacity(game.successors(s).len());
            let mut obey = 0;
            for (k, &t) in game.successors(s).iter().enumerate() {
                let q = p.intersection(row.get(&t).copied().unwrap_or_default());
                debug_assert!(q.is_subset(p));
                if t == target {
                    debug_assert_eq!(q, p);
                    obey = k;
                }
                let next = *arena.eve_index.entry((t, q)).or_insert_with(|| {
                    arena.eve.push((t, q));
                    queue.push_back(arena.eve.len() - 1);
                    arena.eve.len() - 1
                });
                succ.push(next);
            }
            arena.adam.push(AdamState { eve: e, mv: m, succ, obey });
        }
    }
    arena
}

impl SuspectArena {
    pub fn num_agents(&self) -> usize {
        self.agents
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn num_eve(&self) -> usize {
        self.eve.len()
    }

    pub fn num_adam(&self) -> usize {
        self.adam.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.eve.len() + self.adam.len()
    }

    /// Game state and suspect set of an Eve state.
    pub fn eve_state(&self, e: usize) -> (StateId, AgentSet) {
        self.eve[e]
    }

    pub fn eve_id(&self, s: StateId, p: AgentSet) -> Option<usize> {
        self.eve_index.get(&(s, p)).copied()
    }

    /// Adam state reached when Eve proposes move `m` at Eve state `e`.
    pub fn adam_of(&self, e: usize, m: MoveId) -> usize {
        self.adam_start[e] + m
    }

    pub fn adam_states_of(&self, e: usize) -> std::ops::Range<usize> {
        let end = self.adam_start.get(e + 1).copied().unwrap_or(self.adam.len());
        self.adam_start[e]..end
    }

    /// The Eve state and proposed move an Adam state stems from.
    pub fn adam_state(&self, a: usize) -> (usize, MoveId) {
        (self.adam[a].eve, self.adam[a].mv)
    }

    pub fn adam_successors(&self, a: usize) -> &[usize] {
        &self.adam[a].succ
    }

    pub fn obey_successor(&self, a: usize) -> usize {
        self.adam[a].succ[self.adam[a].obey]
    }

    /// Game state and suspect set of any vertex.
    pub fn state_of(&self, v: Vertex) -> (StateId, AgentSet) {
        match v {
            Vertex::Eve(e) => self.eve[e],
            Vertex::Adam(a) => self.eve[self.adam[a].eve],
        }
    }

    pub fn successors(&self, v: Vertex) -> Vec<Vertex> {
        match v {
            Vertex::Eve(e) => self.adam_states_of(e).map(Vertex::Adam).collect(),
            Vertex::Adam(a) => self.adam[a].succ.iter().map(|&e| Vertex::Eve(e)).collect(),
        }
    }

    /// Dense index: Eve states first, then Adam states.
    pub fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Eve(e) => e,
            Vertex::Adam(a) => self.eve.len() + a,
        }
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        if index < self.eve.len() {
            Vertex::Eve(index)
        } else {
            Vertex::Adam(index - self.eve.len())
        }
    }

    /// Eve states grouped by suspect set, smallest sets first.
    pub fn layers(&self) -> BTreeMap<(usize, AgentSet), Vec<usize>> {
        let mut out: BTreeMap<(usize, AgentSet), Vec<usize>> = BTreeMap::new();
        for (e, &(_, p)) in self.eve.iter().enumerate() {
            out.entry((p.len(), p)).or_default().push(e);
        }
        out
    }

    /// Debug export: vertices with their owner, and edges with obedience.
    pub fn to_json(&self, game: &ConcurrentGame) -> Value {
        let agents = |p: AgentSet| p.iter().map(|i| i + 1).collect::<Vec<_>>();
        let mut vertices = Vec::with_capacity(self.num_vertices());
        let mut edges = Vec::new();
        for (e, &(s, p)) in self.eve.iter().enumerate() {
            vertices.push(json!({
                "id": format!("e{e}"),
                "owner": "eve",
                "state": game.state_name(s),
                "suspects": agents(p),
            }));
            for a in self.adam_states_of(e) {
                edges.push(json!({"from": format!("e{e}"), "to": format!("a{a}")}));
            }
        }
        for (a, st) in self.adam.iter().enumerate() {
            let (s, p) = self.eve[st.eve];
            vertices.push(json!({
                "id": format!("a{a}"),
                "owner": "adam",
                "state": game.state_name(s),
                "suspects": agents(p),
                "move": game.format_move(s, st.mv),
            }));
            for (k, &e) in st.succ.iter().enumerate() {
                edges.push(json!({"from": format!("a{a}"), "to": format!("e{e}"), "obey": k == st.obey}));
            }
        }
        json!({
            "states": game.state_names(),
            "agents": self.agents,
            "initial": "e0",
            "vertices": vertices,
            "edges": edges,
        })
    }
}

/// A lasso in the arena, alternating Eve and Adam vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArenaLasso {
    pub stem: Vec<Vertex>,
    pub cycle: Vec<Vertex>,
}

impl ArenaLasso {
    /// Checks every step, including the junction and the wrap, is an edge.
    pub fn validate(&self, arena: &SuspectArena) -> Result<(), ModelError> {
        if self.cycle.is_empty() {
            return Err(ModelError::Contract("arena lasso cycle must be nonempty".into()));
        }
        let seq: Vec<Vertex> = self.stem.iter().chain(&self.cycle).copied().collect();
        for k in 0..seq.len() {
            let from = seq[k];
            let to = if k + 1 < seq.len() { seq[k + 1] } else { self.cycle[0] };
            if !arena.successors(from).contains(&to) {
                return Err(ModelError::Contract(format!("{from:?} -> {to:?} is not an arena edge")));
            }
        }
        Ok(())
    }

    /// Game states of the Eve vertices, as a lasso of the concurrent game.
    pub fn proj1(&self, arena: &SuspectArena) -> Lasso {
        let states = |vs: &[Vertex]| -> Vec<StateId> {
            vs.iter()
                .filter(|&&v| matches!(v, Vertex::Eve(_))).map(|&v| arena.state_of(v).0)
                .collect()
        };
        Lasso::new(states(&self.stem), states(&self.cycle))
    }
}

/// The limit suspect set of an arena lasso: the common suspect set of its
/// cycle vertices.
pub fn lambda_limit(arena: &SuspectArena, lasso: &ArenaLasso) -> Result<AgentSet, ModelError> {
    let first = lasso
        .cycle
        .first()
        .ok_or_else(|| ModelError::Contract("arena lasso cycle must be nonempty".into()))?;
    let p = arena.state_of(*first).1;
    if lasso.cycle.iter().any(|&v| arena.state_of(v).1 != p) {
        return Err(ModelError::Contract("suspect sets disagree along the cycle".into()));
    }
    Ok(p)
}

/// The obedient arena play following a lasso of the game: Eve proposes the
/// least move realising each step and Adam obeys.
pub fn embed_obedient(arena: &SuspectArena, game: &ConcurrentGame, lasso: &Lasso) -> Result<ArenaLasso, ModelError> {
    lasso.validate(game)?;
    if lasso.start() != arena.source() {
        return Err(ModelError::Contract("lasso does not start at the arena source".into()));
    }
    let all = game.all_agents();
    let step = |k: usize| -> [Vertex; 2] {
        let (s, t) = (lasso.at(k), lasso.at(k + 1));
        let e = arena.eve_id(s, all).expect("obedient states are reachable");
        let m = game.moves(s).find(|&m| game.transition(s, m) == t).expect("lasso step is an edge");
        [Vertex::Eve(e), Vertex::Adam(arena.adam_of(e, m))]
    };
    let stem = (0..lasso.stem.len()).flat_map(step).collect();
    let cycle = (lasso.stem.len()..lasso.stem.len() + lasso.cycle.len()).flat_map(step).collect();
    Ok(ArenaLasso { stem, cycle })
}
