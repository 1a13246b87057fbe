use std::cmp::Reverse;

use crate::graph::{achievable_profiles, pareto_front};
use crate::model::{AgentSet, ObjectiveClass, WinnerProfile};

use super::{contract, Decision, EquilibriumError, Method, Problem, Solver, Stats};

/// Decision order on candidate payoffs: more winners first, then the larger
/// bit-string (agent 1 leftmost).
pub(crate) fn decision_order(mut profiles: Vec<WinnerProfile>) -> Vec<WinnerProfile> {
    profiles.sort_by_cached_key(|p| (Reverse(p.social_welfare()), Reverse(p.to_bitstring())));
    profiles.dedup();
    profiles
}

/// Every profile `p` with `lower ≤ p ≤ upper`.
fn profiles_between(lower: WinnerProfile, upper: WinnerProfile) -> Vec<WinnerProfile> {
    let n = lower.agents();
    let free: Vec<usize> = upper.winners().difference(lower.winners()).iter().collect();
    (0..1u64 << free.len())
        .map(|mask| {
            let extra: AgentSet = free.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
            WinnerProfile::new(lower.winners().union(extra), n)
        })
        .collect()
}

impl Solver<'_> {
    fn check_profile(&self, p: WinnerProfile, what: &str) -> Result<(), EquilibriumError> {
        let n = self.game().num_agents();
        if p.agents() != n {
            return Err(contract(format!("{what} has {} entries, the game has {n} agents", p.agents())));
        }
        Ok(())
    }

    /// Is there an equilibrium whose payoff `p` satisfies `lower ≤ p ≤ upper`?
    pub fn constrained_ne_exists(&self, lower: WinnerProfile, upper: WinnerProfile) -> Result<Decision, EquilibriumError> {
        self.check_profile(lower, "lower threshold")?;
        self.check_profile(upper, "upper threshold")?;
        if !lower.le(&upper) {
            return Err(contract(format!("lower threshold {lower} is not below upper threshold {upper}")));
        }
        let candidates = decision_order(profiles_between(lower, upper));
        let (witness, stats) = self.first_ne(&candidates)?;
        Ok(Decision::new(Problem::Cne, Method::Generic, witness, stats))
    }

    /// Is there an equilibrium in which at least `v` agents win?
    ///
    /// For Muller games each winner set `W` of size exactly `v` is tested as
    /// the lower threshold of a constrained query.
    pub fn swdp(&self, v: usize) -> Result<Decision, EquilibriumError> {
        let n = self.game().num_agents();
        if v > n {
            return Err(contract(format!("threshold {v} exceeds the number of agents {n}")));
        }
        if self.game().objective_class() == Some(ObjectiveClass::Muller) {
            let top = WinnerProfile::all_winning(n);
            let sets = decision_order(
                profiles_between(WinnerProfile::all_losing(n), top)
                    .into_iter()
                    .filter(|p| p.social_welfare() == v)
                    .collect(),
            );
            let mut stats = Stats::default();
            for w in sets {
                let d = self.constrained_ne_exists(w, top)?;
                stats.absorb(d.stats);
                if d.answer {
                    return Ok(Decision::new(Problem::Swdp, Method::Generic, d.witness, stats));
                }
            }
            return Ok(Decision::new(Problem::Swdp, Method::Generic, None, stats));
        }
        let candidates = decision_order(
            profiles_between(WinnerProfile::all_losing(n), WinnerProfile::all_winning(n))
                .into_iter()
                .filter(|p| p.social_welfare() >= v)
                .collect(),
        );
        let (witness, stats) = self.first_ne(&candidates)?;
        Ok(Decision::new(Problem::Swdp, Method::Generic, witness, stats))
    }

    /// Is there an equilibrium whose payoff is Pareto optimal among the
    /// payoffs of all plays?
    pub fn podp(&self) -> Result<Decision, EquilibriumError> {
        let front = pareto_front(&achievable_profiles(self.game(), self.source()));
        let candidates = decision_order(front.into_iter().collect());
        let (witness, stats) = self.first_ne(&candidates)?;
        Ok(Decision::new(Problem::Podp, Method::Exact, witness, stats))
    }

    /// The count-based procedure: find the largest `m` for which an
    /// equilibrium with `m` winners exists by binary search, then answer no
    /// iff some play has more than `m` winners.
    pub fn podp_count_variant(&self) -> Result<Decision, EquilibriumError> {
        let mut stats = Stats::default();
        let base = self.swdp(0)?;
        stats.absorb(base.stats);
        if !base.answer {
            return Ok(Decision::new(Problem::Podp, Method::CountVariant, None, stats));
        }
        let (mut lo, mut hi) = (0, self.game().num_agents());
        let mut best = base.witness;
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            let d = self.swdp(mid)?;
            stats.absorb(d.stats);
            if d.answer {
                lo = mid;
                best = d.witness;
            } else {
                hi = mid - 1;
            }
        }
        let max_any = achievable_profiles(self.game(), self.source())
            .iter()
            .map(WinnerProfile::social_welfare)
            .max()
            .unwrap_or(0);
        let witness = if max_any > lo { None } else { best };
        Ok(Decision::new(Problem::Podp, Method::CountVariant, witness, stats))
    }
}
