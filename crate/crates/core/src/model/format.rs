//! JSON game files.
//!
//! ```json
//! {
//!   "states": ["s0", "s1"],
//!   "agents": 1,
//!   "actions": ["a", "b"],
//!   "available": {"s0": [["a", "b"]], "s1": [["a"]]},
//!   "transitions": [
//!     {"from": "s0", "move": ["a"], "to": "s0"},
//!     {"from": "s0", "move": ["b"], "to": "s1"},
//!     {"from": "s1", "move": ["a"], "to": "s1"}
//!   ],
//!   "objectives": [{"type": "buchi", "accept": ["s1"]}],
//!   "initial": "s0"
//! }
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use super::game::{ConcurrentGame, GameMetadata};
use super::objective::{MullerCondition, Objective};
use super::sets::{StateId, StateSet, MAX_AGENTS};
use super::ModelError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGame {
    pub states: Vec<String>,
    pub agents: usize,
    pub actions: Vec<String>,
    pub available: IndexMap<String, Vec<Vec<String>>>,
    pub transitions: Vec<RawTransition>,
    pub objectives: Vec<RawObjective>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<GameMetadata>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTransition {
    pub from: String,
    #[serde(rename = "move")]
    pub actions: Vec<String>,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RawObjective {
    #[serde(alias = "reachability")]
    Reach { target: Vec<String> },
    #[serde(alias = "safe")]
    Safety {
        #[serde(rename = "unsafe")]
        unsafe_states: Vec<String>,
    },
    Buchi { accept: Vec<String> },
    #[serde(alias = "co-buchi")]
    Cobuchi { reject: Vec<String> },
    Parity { priority: IndexMap<String, u32> },
    Muller {
        colors: IndexMap<String, String>,
        family: Vec<Vec<String>>,
    },
}

/// One reason a game description is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoStates,
    NoAgents,
    TooManyAgents(usize),
    DuplicateState(String),
    DuplicateAction(String),
    UnknownState { context: String, state: String },
    UnknownAction { context: String, action: String },
    MissingAvailability(String),
    WrongAgentCount { state: String, found: usize },
    EmptyAvailability { state: String, agent: usize },
    IllegalMove { state: String, actions: String },
    DuplicateTransition { state: String, actions: String },
    MissingTransition { state: String, actions: String },
    ObjectiveCount { found: usize, expected: usize },
    MissingPriority { agent: usize, state: String },
    MissingColour { agent: usize, state: String },
    UnknownColour { agent: usize, colour: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStates => write!(f, "game has no states"),
            Violation::NoAgents => write!(f, "game has no agents"),
            Violation::TooManyAgents(n) => write!(f, "{n} agents exceeds the supported maximum of {MAX_AGENTS}"),
            Violation::DuplicateState(s) => write!(f, "duplicate state '{s}'"),
            Violation::DuplicateAction(a) => write!(f, "duplicate action '{a}'"),
            Violation::UnknownState { context, state } => write!(f, "unknown state '{state}' in {context}"),
            Violation::UnknownAction { context, action } => write!(f, "unknown action '{action}' in {context}"),
            Violation::MissingAvailability(s) => write!(f, "no availability entry for state {s}"),
            Violation::WrongAgentCount { state, found } => {
                write!(f, "availability at {state} lists {found} agents")
            }
            Violation::EmptyAvailability { state, agent } => {
                write!(f, "empty availability at {state} for agent {agent}")
            }
            Violation::IllegalMove { state, actions } => write!(f, "illegal move {actions} at {state}"),
            Violation::DuplicateTransition { state, actions } => {
                write!(f, "duplicate transition at {state} for move {actions}")
            }
            Violation::MissingTransition { state, actions } => {
                write!(f, "missing transition at {state} for move {actions}")
            }
            Violation::ObjectiveCount { found, expected } => {
                write!(f, "{found} objectives given for {expected} agents")
            }
            Violation::MissingPriority { agent, state } => {
                write!(f, "objective of agent {agent} has no priority for state {state}")
            }
            Violation::MissingColour { agent, state } => {
                write!(f, "objective of agent {agent} has no colour for state {state}")
            }
            Violation::UnknownColour { agent, colour } => {
                write!(f, "objective of agent {agent} uses colour '{colour}' outside its colouring")
            }
        }
    }
}

fn fmt_actions(actions: &[String]) -> String {
    format!("({})", actions.join(","))
}

impl RawGame {
    pub fn from_json(text: &str) -> Result<RawGame, ModelError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw game serializes")
    }
}

/// Validates a raw description and builds the game, or lists every
/// violation found.
pub fn validate_game(raw: &RawGame) -> Result<ConcurrentGame, ModelError> {
    let mut violations = Vec::new();
    let n = raw.agents;
    if raw.states.is_empty() {
        violations.push(Violation::NoStates);
    }
    if n == 0 {
        violations.push(Violation::NoAgents);
    }
    if n > MAX_AGENTS {
        violations.push(Violation::TooManyAgents(n));
    }
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    let mut state_ids = HashMap::new();
    for (i, s) in raw.states.iter().enumerate() {
        if state_ids.insert(s.as_str(), i).is_some() {
            violations.push(Violation::DuplicateState(s.clone()));
        }
    }
    let mut action_ids = HashMap::new();
    for (i, a) in raw.actions.iter().enumerate() {
        if action_ids.insert(a.as_str(), i).is_some() {
            violations.push(Violation::DuplicateAction(a.clone()));
        }
    }
    for key in raw.available.keys() {
        if !state_ids.contains_key(key.as_str()) {
            violations.push(Violation::UnknownState {
                context: "available".into(),
                state: key.clone(),
            });
        }
    }

    let mut available = Vec::with_capacity(raw.states.len());
    for s in &raw.states {
        let Some(per_agent) = raw.available.get(s) else {
            violations.push(Violation::MissingAvailability(s.clone()));
            available.push(vec![Vec::new(); n]);
            continue;
        };
        if per_agent.len() != n {
            violations.push(Violation::WrongAgentCount {
                state: s.clone(),
                found: per_agent.len(),
            });
        }
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let names = per_agent.get(i).map(Vec::as_slice).unwrap_or(&[]);
            let mut ids = Vec::new();
            for a in names {
                match action_ids.get(a.as_str()) {
                    Some(&id) => ids.push(id),
                    None => violations.push(Violation::UnknownAction {
                        context: format!("availability of agent {} at {s}", i + 1),
                        action: a.clone(),
                    }),
                }
            }
            ids.sort_unstable();
            ids.dedup();
            if ids.is_empty() && per_agent.len() == n {
                violations.push(Violation::EmptyAvailability {
                    state: s.clone(),
                    agent: i + 1,
                });
            }
            row.push(ids);
        }
        available.push(row);
    }
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }

    // Build a skeleton game to get move numbering, then fill the table.
    let skeleton = ConcurrentGame::assemble(
        raw.states.clone(),
        raw.actions.clone(),
        n,
        available.clone(),
        available
            .iter()
            .map(|row| vec![usize::MAX; row.iter().map(Vec::len).product()])
            .collect(),
        Vec::new(),
        None,
        None,
    );
    let mut table = skeleton.table.clone();
    for t in &raw.transitions {
        let (Some(&from), Some(&to)) = (state_ids.get(t.from.as_str()), state_ids.get(t.to.as_str())) else {
            for name in [&t.from, &t.to] {
                if !state_ids.contains_key(name.as_str()) {
                    violations.push(Violation::UnknownState {
                        context: "transitions".into(),
                        state: name.clone(),
                    });
                }
            }
            continue;
        };
        let ids: Option<Vec<_>> = t.actions.iter().map(|a| action_ids.get(a.as_str()).copied()).collect();
        let Some(m) = ids.and_then(|ids| skeleton.encode_move(from, &ids)) else {
            violations.push(Violation::IllegalMove {
                state: t.from.clone(),
                actions: fmt_actions(&t.actions),
            });
            continue;
        };
        if table[from][m] != usize::MAX {
            violations.push(Violation::DuplicateTransition {
                state: t.from.clone(),
                actions: fmt_actions(&t.actions),
            });
        }
        table[from][m] = to;
    }
    for (s, row) in table.iter().enumerate() {
        for (m, &to) in row.iter().enumerate() {
            if to == usize::MAX {
                violations.push(Violation::MissingTransition {
                    state: raw.states[s].clone(),
                    actions: skeleton.format_move(s, m),
                });
            }
        }
    }

    if raw.objectives.len() != n {
        violations.push(Violation::ObjectiveCount {
            found: raw.objectives.len(),
            expected: n,
        });
    }
    let num_states = raw.states.len();
    let mut objectives = Vec::with_capacity(n);
    for (i, obj) in raw.objectives.iter().enumerate() {
        let agent = i + 1;
        let state_set = |names: &[String], violations: &mut Vec<Violation>| {
            let mut set = StateSet::new(num_states);
            for name in names {
                match state_ids.get(name.as_str()) {
                    Some(&s) => set.insert(s),
                    None => violations.push(Violation::UnknownState {
                        context: format!("objective of agent {agent}"),
                        state: name.clone(),
                    }),
                }
            }
            set
        };
        let parsed = match obj {
            RawObjective::Reach { target } => Objective::Reach(state_set(target, &mut violations)),
            RawObjective::Safety { unsafe_states } => Objective::Safety(state_set(unsafe_states, &mut violations)),
            RawObjective::Buchi { accept } => Objective::Buchi(state_set(accept, &mut violations)),
            RawObjective::Cobuchi { reject } => Objective::CoBuchi(state_set(reject, &mut violations)),
            RawObjective::Parity { priority } => {
                check_keys(priority.keys(), &state_ids, agent, &mut violations);
                let mut p = Vec::with_capacity(num_states);
                for s in &raw.states {
                    match priority.get(s) {
                        Some(&x) => p.push(x),
                        None => {
                            violations.push(Violation::MissingPriority {
                                agent,
                                state: s.clone(),
                            });
                            p.push(0);
                        }
                    }
                }
                Objective::Parity(p)
            }
            RawObjective::Muller { colors, family } => {
                check_keys(colors.keys(), &state_ids, agent, &mut violations);
                let palette: BTreeSet<&String> = colors.values().collect();
                let colours: Vec<String> = palette.into_iter().cloned().collect();
                if colours.len() > 64 {
                    violations.push(Violation::UnknownColour {
                        agent,
                        colour: "more than 64 colours".into(),
                    });
                    continue;
                }
                let colour_id = |c: &str| colours.iter().position(|x| x == c);
                let mut colour_of = Vec::with_capacity(num_states);
                for s in &raw.states {
                    match colors.get(s) {
                        Some(c) => colour_of.push(colour_id(c).expect("colour in palette")),
                        None => {
                            violations.push(Violation::MissingColour {
                                agent,
                                state: s.clone(),
                            });
                            colour_of.push(0);
                        }
                    }
                }
                let mut masks = BTreeSet::new();
                for member in family {
                    let mut mask = 0u64;
                    for c in member {
                        match colour_id(c) {
                            Some(id) => mask |= 1 << id,
                            None => violations.push(Violation::UnknownColour {
                                agent,
                                colour: c.clone(),
                            }),
                        }
                    }
                    masks.insert(mask);
                }
                Objective::Muller(MullerCondition {
                    colours,
                    colour_of,
                    family: masks,
                })
            }
        };
        objectives.push(parsed);
    }

    let initial = match &raw.initial {
        None => None,
        Some(name) => match state_ids.get(name.as_str()) {
            Some(&s) => Some(s),
            None => {
                violations.push(Violation::UnknownState {
                    context: "initial".into(),
                    state: name.clone(),
                });
                None
            }
        },
    };

    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }
    Ok(ConcurrentGame::assemble(
        raw.states.clone(),
        raw.actions.clone(),
        n,
        available,
        table,
        objectives,
        initial,
        raw.metadata.clone(),
    ))
}

fn check_keys<'a>(
    keys: impl Iterator<Item = &'a String>,
    state_ids: &HashMap<&str, StateId>,
    agent: usize,
    violations: &mut Vec<Violation>,
) {
    for k in keys {
        if !state_ids.contains_key(k.as_str()) {
            violations.push(Violation::UnknownState {
                context: format!("objective of agent {agent}"),
                state: k.clone(),
            });
        }
    }
}

impl ConcurrentGame {
    pub fn from_json(text: &str) -> Result<ConcurrentGame, ModelError> {
        validate_game(&RawGame::from_json(text)?)
    }

    pub fn to_json(&self) -> String {
        self.to_raw().to_json()
    }

    pub fn to_raw(&self) -> RawGame {
        let names = |set: &StateSet| set.iter().map(|s| self.state_names[s].clone()).collect();
        let available = (0..self.num_states())
            .map(|s| {
                let per_agent = (0..self.agents)
                    .map(|i| self.available[s][i].iter().map(|&a| self.action_names[a].clone()).collect())
                    .collect();
                (self.state_names[s].clone(), per_agent)
            })
            .collect();
        let transitions = (0..self.num_states())
            .flat_map(|s| {
                self.moves(s).map(move |m| RawTransition {
                    from: self.state_names[s].clone(),
                    actions: self
                        .move_actions(s, m)
                        .into_iter()
                        .map(|a| self.action_names[a].clone())
                        .collect(),
                    to: self.state_names[self.table[s][m]].clone(),
                })
            })
            .collect();
        let objectives = self
            .objectives
            .iter()
            .map(|obj| match obj {
                Objective::Reach(f) => RawObjective::Reach { target: names(f) },
                Objective::Safety(f) => RawObjective::Safety { unsafe_states: names(f) },
                Objective::Buchi(f) => RawObjective::Buchi { accept: names(f) },
                Objective::CoBuchi(f) => RawObjective::Cobuchi { reject: names(f) },
                Objective::Parity(p) => RawObjective::Parity {
                    priority: self.state_names.iter().cloned().zip(p.iter().copied()).collect(),
                },
                Objective::Muller(m) => RawObjective::Muller {
                    colors: self
                        .state_names
                        .iter()
                        .cloned()
                        .zip(m.colour_of.iter().map(|&c| m.colours[c].clone()))
                        .collect(),
                    family: m
                        .family
                        .iter()
                        .map(|&mask| {
                            (0..m.colours.len())
                                .filter(|c| mask >> c & 1 == 1)
                                .map(|c| m.colours[c].clone())
                                .collect()
                        })
                        .collect(),
                },
            })
            .collect();
        RawGame {
            states: self.state_names.clone(),
            agents: self.agents,
            actions: self.action_names.clone(),
            available,
            transitions,
            objectives,
            initial: self.initial.map(|s| self.state_names[s].clone()),
            metadata: self.metadata.clone(),
        }
    }
}
