use serde::{Deserialize, Serialize};

use super::objective::{Objective, ObjectiveClass};
use super::sets::{ActionId, AgentId, AgentSet, StateId};

/// Index of a legal move at a given state. Moves are numbered in
/// lexicographic order of their action tuples, agent 1 most significant.
pub type MoveId = usize;

/// Free-form data carried alongside a game file, e.g. the threshold a
/// reduction generator chose.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<String>,
}

/// A validated concurrent game structure with one objective per agent.
///
/// Immutable after construction. The transition table is explicit: one
/// successor per legal move of every state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcurrentGame {
    pub(crate) state_names: Vec<String>,
    pub(crate) action_names: Vec<String>,
    pub(crate) agents: usize,
    /// `available[s][i]`: actions of agent `i` at `s`, in action-id order.
    pub(crate) available: Vec<Vec<Vec<ActionId>>>,
    /// `strides[s][i]`: weight of agent `i`'s action position in a move id.
    pub(crate) strides: Vec<Vec<usize>>,
    /// `table[s][m]`: successor of `s` under move `m`.
    pub(crate) table: Vec<Vec<StateId>>,
    /// Sorted, deduplicated successors of each state.
    pub(crate) successors: Vec<Vec<StateId>>,
    pub(crate) objectives: Vec<Objective>,
    pub(crate) initial: Option<StateId>,
    pub(crate) metadata: Option<GameMetadata>,
}

impl ConcurrentGame {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        state_names: Vec<String>,
        action_names: Vec<String>,
        agents: usize,
        available: Vec<Vec<Vec<ActionId>>>,
        table: Vec<Vec<StateId>>,
        objectives: Vec<Objective>,
        initial: Option<StateId>,
        metadata: Option<GameMetadata>,
    ) -> Self {
        let strides = available
            .iter()
            .map(|per_agent| {
                let mut strides = vec![1; agents];
                for i in (0..agents.saturating_sub(1)).rev() {
                    strides[i] = strides[i + 1] * per_agent[i + 1].len();
                }
                strides
            })
            .collect();
        let successors = table
            .iter()
            .map(|row| {
                let mut succ = row.clone();
                succ.sort_unstable();
                succ.dedup();
                succ
            })
            .collect();
        ConcurrentGame {
            state_names,
            action_names,
            agents,
            available,
            strides,
            table,
            successors,
            objectives,
            initial,
            metadata,
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_agents(&self) -> usize {
        self.agents
    }

    pub fn all_agents(&self) -> AgentSet {
        AgentSet::full(self.agents)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a]
    }

    pub fn action_names(&self) -> &[String] {
        &self.action_names
    }

    pub fn available(&self, s: StateId, agent: AgentId) -> &[ActionId] {
        &self.available[s][agent]
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    pub fn objective(&self, agent: AgentId) -> &Objective {
        &self.objectives[agent]
    }

    /// The declared initial state, or the first state.
    pub fn initial(&self) -> StateId {
        self.initial.unwrap_or(0)
    }

    pub fn declared_initial(&self) -> Option<StateId> {
        self.initial
    }

    pub fn metadata(&self) -> Option<&GameMetadata> {
        self.metadata.as_ref()
    }

    pub fn set_metadata(&mut self, metadata: Option<GameMetadata>) {
        self.metadata = metadata;
    }

    /// The common class of all objectives, or `None` when classes are mixed.
    pub fn objective_class(&self) -> Option<ObjectiveClass> {
        let first = self.objectives.first()?.class();
        self.objectives.iter().all(|o| o.class() == first).then_some(first)
    }

    /// Agents whose reach, safety, Büchi or coBüchi set contains `s`.
    pub fn agents_marking(&self, s: StateId) -> AgentSet {
        (0..self.agents)
            .filter(|&i| self.objectives[i].state_set().is_some_and(|f| f.contains(s)))
            .collect()
    }

    pub fn num_moves(&self, s: StateId) -> usize {
        self.table[s].len()
    }

    pub fn moves(&self, s: StateId) -> std::ops::Range<MoveId> {
        0..self.table[s].len()
    }

    pub fn transition(&self, s: StateId, m: MoveId) -> StateId {
        self.table[s][m]
    }

    pub fn successors(&self, s: StateId) -> &[StateId] {
        &self.successors[s]
    }

    pub fn has_edge(&self, s: StateId, t: StateId) -> bool {
        self.successors[s].binary_search(&t).is_ok()
    }

    /// Position of agent `i`'s action within its available list, for move `m`.
    pub fn action_position(&self, s: StateId, m: MoveId, agent: AgentId) -> usize {
        (m / self.strides[s][agent]) % self.available[s][agent].len()
    }

    pub fn move_actions(&self, s: StateId, m: MoveId) -> Vec<ActionId> {
        (0..self.agents)
            .map(|i| self.available[s][i][self.action_position(s, m, i)])
            .collect()
    }

    pub fn encode_move(&self, s: StateId, actions: &[ActionId]) -> Option<MoveId> {
        if actions.len() != self.agents {
            return None;
        }
        let mut m = 0;
        for (i, a) in actions.iter().enumerate() {
            let pos = self.available[s][i].iter().position(|x| x == a)?;
            m += pos * self.strides[s][i];
        }
        Some(m)
    }

    /// The move obtained from `m` when agent `i` switches to its action at
    /// position `pos`.
    pub fn deviate(&self, s: StateId, m: MoveId, agent: AgentId, pos: usize) -> MoveId {
        let stride = self.strides[s][agent];
        m - self.action_position(s, m, agent) * stride + pos * stride
    }

    pub fn format_move(&self, s: StateId, m: MoveId) -> String {
        let names: Vec<&str> = self.move_actions(s, m).into_iter().map(|a| self.action_name(a)).collect();
        format!("({})", names.join(","))
    }

    /// At most one agent has a real choice in every state.
    pub fn is_turn_based(&self) -> bool {
        self.available
            .iter()
            .all(|per_agent| per_agent.iter().filter(|acts| acts.len() > 1).count() <= 1)
    }

    /// Number of entries of the explicit transition table.
    pub fn table_size(&self) -> usize {
        self.table.iter().map(Vec::len).sum()
    }
}
