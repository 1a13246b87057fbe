use std::collections::BTreeSet;
use std::fmt;

use super::sets::{StateId, StateSet};
use super::ModelError;

/// The six objective classes. Reachability and safety read the set of
/// visited states; the others read only the states visited infinitely often.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveClass {
    Reach,
    Safety,
    Buchi,
    CoBuchi,
    Parity,
    Muller,
}

impl ObjectiveClass {
    pub fn depends_on_occ(self) -> bool {
        matches!(self, ObjectiveClass::Reach | ObjectiveClass::Safety)
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveClass::Reach => "reach",
            ObjectiveClass::Safety => "safety",
            ObjectiveClass::Buchi => "buchi",
            ObjectiveClass::CoBuchi => "cobuchi",
            ObjectiveClass::Parity => "parity",
            ObjectiveClass::Muller => "muller",
        }
    }

    pub const ALL: [ObjectiveClass; 6] = [
        ObjectiveClass::Reach,
        ObjectiveClass::Safety,
        ObjectiveClass::Buchi,
        ObjectiveClass::CoBuchi,
        ObjectiveClass::Parity,
        ObjectiveClass::Muller,
    ];
}

impl fmt::Display for ObjectiveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Muller condition: a colouring of states and the family of colour sets
/// that are winning when seen infinitely often.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MullerCondition {
    /// Colour names, sorted; a colour's id is its position here.
    pub(crate) colours: Vec<String>,
    /// Colour id of each state.
    pub(crate) colour_of: Vec<usize>,
    /// Winning colour sets as bitmasks over colour ids.
    pub(crate) family: BTreeSet<u64>,
}

impl MullerCondition {
    pub fn colours(&self) -> &[String] {
        &self.colours
    }

    pub fn colour_of(&self, s: StateId) -> usize {
        self.colour_of[s]
    }

    pub fn family(&self) -> impl Iterator<Item = u64> + '_ {
        self.family.iter().copied()
    }

    pub fn colour_mask(&self, states: &StateSet) -> u64 {
        states.iter().fold(0, |m, s| m | 1 << self.colour_of[s])
    }

    pub fn accepts(&self, inf: &StateSet) -> bool {
        self.family.contains(&self.colour_mask(inf))
    }

    /// The condition whose family is the complement of this one within all
    /// colour sets over the colour range.
    pub fn complement(&self) -> MullerCondition {
        let k = self.colours.len();
        let family = (0..1u64 << k).filter(|m| !self.family.contains(m)).collect();
        MullerCondition {
            colours: self.colours.clone(),
            colour_of: self.colour_of.clone(),
            family,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Win iff some target state is visited.
    Reach(StateSet),
    /// Win iff no unsafe state is ever visited.
    Safety(StateSet),
    /// Win iff some accepting state is visited infinitely often.
    Buchi(StateSet),
    /// Win iff every rejecting state is visited only finitely often.
    CoBuchi(StateSet),
    /// Win iff the least priority seen infinitely often is even.
    Parity(Vec<u32>),
    Muller(MullerCondition),
}

impl Objective {
    pub fn class(&self) -> ObjectiveClass {
        match self {
            Objective::Reach(_) => ObjectiveClass::Reach,
            Objective::Safety(_) => ObjectiveClass::Safety,
            Objective::Buchi(_) => ObjectiveClass::Buchi,
            Objective::CoBuchi(_) => ObjectiveClass::CoBuchi,
            Objective::Parity(_) => ObjectiveClass::Parity,
            Objective::Muller(_) => ObjectiveClass::Muller,
        }
    }

    /// The state set of a reach/safety/Büchi/coBüchi objective.
    pub fn state_set(&self) -> Option<&StateSet> {
        match self {
            Objective::Reach(f) | Objective::Safety(f) | Objective::Buchi(f) | Objective::CoBuchi(f) => {
                Some(f)
            }
            _ => None,
        }
    }

    /// Payoff bit for a play with the given visited and recurring states.
    /// Callers must ensure `inf ⊆ occ` and `inf ≠ ∅`; see [`eval_objective`].
    pub fn holds(&self, occ: &StateSet, inf: &StateSet) -> bool {
        match self {
            Objective::Reach(f) => occ.intersects(f),
            Objective::Safety(f) => !occ.intersects(f),
            Objective::Buchi(f) => inf.intersects(f),
            Objective::CoBuchi(f) => !inf.intersects(f),
            Objective::Parity(p) => inf.iter().map(|s| p[s]).min().is_some_and(|m| m % 2 == 0),
            Objective::Muller(m) => m.accepts(inf),
        }
    }

    /// The class-wise complement: reach and safety swap, Büchi and coBüchi
    /// swap, parity shifts every priority by one, Muller complements its family.
    pub fn complement(&self) -> Objective {
        match self {
            Objective::Reach(f) => Objective::Safety(f.clone()),
            Objective::Safety(f) => Objective::Reach(f.clone()),
            Objective::Buchi(f) => Objective::CoBuchi(f.clone()),
            Objective::CoBuchi(f) => Objective::Buchi(f.clone()),
            Objective::Parity(p) => Objective::Parity(p.iter().map(|x| x + 1).collect()),
            Objective::Muller(m) => Objective::Muller(m.complement()),
        }
    }
}

/// Evaluates an objective on an `(occ, inf)` pair, checking the pair is
/// consistent with some play.
pub fn eval_objective(obj: &Objective, occ: &StateSet, inf: &StateSet) -> Result<bool, ModelError> {
    if inf.is_empty() {
        return Err(ModelError::Contract("inf must be nonempty".into()));
    }
    if !inf.is_subset(occ) {
        return Err(ModelError::Contract("inf must be a subset of occ".into()));
    }
    Ok(obj.holds(occ, inf))
}
