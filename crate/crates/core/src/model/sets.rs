use std::fmt;

use fixedbitset::FixedBitSet;

/// Index of a game state. States are dense indices in declaration order.
pub type StateId = usize;
/// Zero-based agent index. Agent `i` is shown to users as `i + 1`.
pub type AgentId = usize;
/// Index into the game's action list.
pub type ActionId = usize;

/// Largest number of agents an [`AgentSet`] can hold.
pub const MAX_AGENTS: usize = 64;

/// A set of game states backed by a fixed-width bit-vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet(FixedBitSet);

impl StateSet {
    pub fn new(capacity: usize) -> Self {
        StateSet(FixedBitSet::with_capacity(capacity))
    }

    pub fn full(capacity: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(capacity);
        bits.insert_range(..);
        StateSet(bits)
    }

    pub fn from_states(capacity: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut set = StateSet::new(capacity);
        for s in states {
            set.insert(s);
        }
        set
    }

    pub fn capacity(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, s: StateId) {
        self.0.insert(s);
    }

    pub fn remove(&mut self, s: StateId) {
        self.0.set(s, false);
    }

    pub fn contains(&self, s: StateId) -> bool {
        self.0.contains(s)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.0.ones()
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.0.difference_with(&other.0);
    }

    pub fn with(&self, s: StateId) -> StateSet {
        let mut next = self.clone();
        next.insert(s);
        next
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<StateId> {
        self.0.ones().next()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

/// A set of agents, one bit per agent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AgentSet(u64);

impl AgentSet {
    pub const EMPTY: AgentSet = AgentSet(0);

    pub fn full(agents: usize) -> Self {
        debug_assert!(agents <= MAX_AGENTS);
        if agents == MAX_AGENTS {
            AgentSet(u64::MAX)
        } else {
            AgentSet((1u64 << agents) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        AgentSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(agent: AgentId) -> Self {
        AgentSet(1u64 << agent)
    }

    pub fn contains(self, agent: AgentId) -> bool {
        self.0 >> agent & 1 == 1
    }

    pub fn insert(&mut self, agent: AgentId) {
        self.0 |= 1u64 << agent;
    }

    pub fn remove(&mut self, agent: AgentId) {
        self.0 &= !(1u64 << agent);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & other.0)
    }

    pub fn union(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn difference(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = AgentId> {
        let bits = self.0;
        (0..MAX_AGENTS).filter(move |i| bits >> i & 1 == 1)
    }
}

impl fmt::Debug for AgentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based, matching how agents are named to users
        f.debug_set().entries(self.iter().map(|i| i + 1)).finish()
    }
}

impl FromIterator<AgentId> for AgentSet {
    fn from_iter<T: IntoIterator<Item = AgentId>>(iter: T) -> Self {
        let mut set = AgentSet::EMPTY;
        for a in iter {
            set.insert(a);
        }
        set
    }
}

/// Per-agent payoff of a play: bit `i` is set iff agent `i` wins.
///
/// The componentwise order on profiles is the Pareto order and the number
/// of set bits is the social welfare.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WinnerProfile {
    winners: AgentSet,
    agents: usize,
}

impl WinnerProfile {
    pub fn new(winners: AgentSet, agents: usize) -> Self {
        debug_assert!(winners.is_subset(AgentSet::full(agents)));
        WinnerProfile { winners, agents }
    }

    pub fn all_winning(agents: usize) -> Self {
        WinnerProfile::new(AgentSet::full(agents), agents)
    }

    pub fn all_losing(agents: usize) -> Self {
        WinnerProfile::new(AgentSet::EMPTY, agents)
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn winners(&self) -> AgentSet {
        self.winners
    }

    pub fn losers(&self) -> AgentSet {
        AgentSet::full(self.agents).difference(self.winners)
    }

    pub fn wins(&self, agent: AgentId) -> bool {
        self.winners.contains(agent)
    }

    pub fn social_welfare(&self) -> usize {
        self.winners.len()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &WinnerProfile) -> bool {
        self.winners.is_subset(other.winners)
    }

    /// Parses a bit-string with agent 1 leftmost, e.g. `"101"`.
    pub fn from_bitstring(text: &str, agents: usize) -> Result<Self, String> {
        if text.chars().count() != agents {
            return Err(format!(
                "profile '{text}' has length {} but the game has {agents} agents",
                text.chars().count()
            ));
        }
        let mut winners = AgentSet::EMPTY;
        for (i, c) in text.chars().enumerate() {
            match c {
                '1' => winners.insert(i),
                '0' => {}
                other => return Err(format!("profile '{text}' contains '{other}', expected 0 or 1")),
            }
        }
        Ok(WinnerProfile::new(winners, agents))
    }

    pub fn to_bitstring(&self) -> String {
        (0..self.agents)
            .map(|i| if self.winners.contains(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for WinnerProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_bitstring())
    }
}

impl fmt::Display for WinnerProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}
