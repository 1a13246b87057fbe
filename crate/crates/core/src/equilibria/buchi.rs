use std::collections::{BTreeSet, BinaryHeap, HashSet};
use std::cmp::Reverse;

use crate::graph::{strongly_connected_components, tarjan_sccs, MoveGraph};
use crate::model::{profile_of, ObjectiveClass, StateSet, WinnerProfile};

use super::{contract, Decision, EquilibriumError, Method, Problem, Solver, Stats};

impl Solver<'_> {
    fn require_buchi(&self) -> Result<(), EquilibriumError> {
        if self.game().objective_class() != Some(ObjectiveClass::Buchi) {
            return Err(contract("the SCC method needs Büchi objectives for every agent"));
        }
        Ok(())
    }

    /// Payoffs of the recurrent SCCs reachable from the source, as sets.
    fn top_sccs(&self) -> Vec<StateSet> {
        let graph = MoveGraph::new(self.game());
        let sccs = tarjan_sccs(&graph, self.source());
        sccs.recurrent().map(|c| sccs.states(c, self.game().num_states())).collect()
    }

    fn scc_profile(&self, c: &StateSet) -> WinnerProfile {
        profile_of(self.game(), c, c)
    }

    /// Tests `profile` as both thresholds of a constrained query.
    fn exact_profile(&self, profile: WinnerProfile, stats: &mut Stats) -> Result<Decision, EquilibriumError> {
        let d = self.constrained_ne_exists(profile, profile)?;
        stats.absorb(d.stats);
        Ok(d)
    }

    /// SWDP for Büchi games through SCC ranks.
    ///
    /// Strongly connected sets are explored by decreasing rank (the number of
    /// agents whose Büchi set they meet), starting from the reachable SCCs.
    /// When the payoff of a set `C` is not an equilibrium payoff, the SCCs of
    /// `C ∖ F_i` are explored for every agent `i` winning in `C`, since a
    /// play recurring in `C` with a smaller winner set avoids some such `F_i`.
    pub fn swdp_buchi(&self, v: usize) -> Result<Decision, EquilibriumError> {
        self.require_buchi()?;
        let n = self.game().num_agents();
        if v > n {
            return Err(contract(format!("threshold {v} exceeds the number of agents {n}")));
        }
        let states = self.game().num_states();
        let mut stats = Stats::default();
        let mut tested = HashSet::new();
        let mut seen = HashSet::new();
        let mut heap: BinaryHeap<(usize, Reverse<StateSet>)> = BinaryHeap::new();
        for c in self.top_sccs() {
            if seen.insert(c.clone()) {
                heap.push((self.scc_profile(&c).social_welfare(), Reverse(c)));
            }
        }
        while let Some((rank, Reverse(c))) = heap.pop() {
            if rank < v {
                break;
            }
            let profile = self.scc_profile(&c);
            if tested.insert(profile) {
                let d = self.exact_profile(profile, &mut stats)?;
                if d.answer {
                    return Ok(Decision::new(Problem::Swdp, Method::BuchiScc, d.witness, stats));
                }
            }
            for i in profile.winners().iter() {
                let mut rest = c.clone();
                rest.difference_with(self.game().objective(i).state_set().expect("Büchi set"));
                for sub in self.sub_sccs(&rest, states) {
                    if seen.insert(sub.clone()) {
                        heap.push((self.scc_profile(&sub).social_welfare(), Reverse(sub)));
                    }
                }
            }
        }
        Ok(Decision::new(Problem::Swdp, Method::BuchiScc, None, stats))
    }

    /// The rank scan without refinement: only the reachable SCCs themselves
    /// are tested, from the highest rank down to `v`.
    pub fn swdp_buchi_unrefined(&self, v: usize) -> Result<Decision, EquilibriumError> {
        self.require_buchi()?;
        let mut stats = Stats::default();
        for profile in self.ranked_scc_profiles() {
            if profile.social_welfare() < v {
                break;
            }
            let d = self.exact_profile(profile, &mut stats)?;
            if d.answer {
                return Ok(Decision::new(Problem::Swdp, Method::BuchiScc, d.witness, stats));
            }
        }
        Ok(Decision::new(Problem::Swdp, Method::BuchiScc, None, stats))
    }

    /// PODP for Büchi games by the SCC scan: only the SCCs of the highest
    /// rank are tested; yes iff one of their payoffs is an equilibrium payoff.
    pub fn podp_buchi_scc(&self) -> Result<Decision, EquilibriumError> {
        self.require_buchi()?;
        let mut stats = Stats::default();
        let profiles = self.ranked_scc_profiles();
        let Some(top) = profiles.first().map(WinnerProfile::social_welfare) else {
            return Ok(Decision::new(Problem::Podp, Method::BuchiScc, None, stats));
        };
        for profile in profiles.into_iter().take_while(|p| p.social_welfare() == top) {
            let d = self.exact_profile(profile, &mut stats)?;
            if d.answer {
                return Ok(Decision::new(Problem::Podp, Method::BuchiScc, d.witness, stats));
            }
        }
        Ok(Decision::new(Problem::Podp, Method::BuchiScc, None, stats))
    }

    /// Distinct payoffs of the reachable recurrent SCCs, by decreasing rank.
    fn ranked_scc_profiles(&self) -> Vec<WinnerProfile> {
        let profiles: BTreeSet<WinnerProfile> = self.top_sccs().iter().map(|c| self.scc_profile(c)).collect();
        super::decide::decision_order(profiles.into_iter().collect())
    }

    fn sub_sccs(&self, within: &StateSet, states: usize) -> Vec<StateSet> {
        let game = self.game();
        let succ = |s: usize| -> Vec<usize> {
            game.successors(s).iter().copied().filter(|&t| within.contains(t)).collect()
        };
        strongly_connected_components(states, within.iter(), succ)
            .into_iter()
            .filter(|c| c.len() > 1 || game.has_edge(c[0], c[0]))
            .map(|c| StateSet::from_states(states, c))
            .collect()
    }
}
