use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::arena::{build_arena, SuspectArena};
use crate::graph::{find_play, AllEdges, MoveGraph};
use crate::model::{payoff_of_lasso, AgentSet, ConcurrentGame, Lasso, StateId, WinnerProfile};
use crate::zerosum::{solve, Backend, SolveError, WinningRegion};

use super::{contract, EquilibriumError, Stats};

/// Shared state for deciding equilibrium questions about one game from one
/// source state: the suspect arena and a cache of winning regions.
pub struct Solver<'g> {
    game: &'g ConcurrentGame,
    source: StateId,
    arena: SuspectArena,
    graph: MoveGraph,
    backend: Backend,
    regions: Mutex<HashMap<AgentSet, Arc<WinningRegion>>>,
    pool: Option<Arc<rayon::ThreadPool>>,
}

/// What examining one candidate profile found.
enum Outcome {
    /// No play at all has this payoff.
    Unachievable,
    /// The region was consulted and no equilibrium play has this payoff.
    Absent,
    Found(Lasso),
}

impl<'g> Solver<'g> {
    pub fn new(game: &'g ConcurrentGame, source: StateId) -> Self {
        Solver {
            game,
            source,
            arena: build_arena(game, source),
            graph: MoveGraph::new(game),
            backend: Backend::Fixpoint,
            regions: Mutex::new(HashMap::new()),
            pool: None,
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self.regions.lock().expect("region cache").clear();
        self
    }

    /// Runs profile checks on a dedicated pool of `workers` threads.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().ok().map(Arc::new);
        self
    }

    pub fn game(&self) -> &'g ConcurrentGame {
        self.game
    }

    pub fn source(&self) -> StateId {
        self.source
    }

    pub fn arena(&self) -> &SuspectArena {
        &self.arena
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn region(&self, losers: AgentSet) -> Result<Arc<WinningRegion>, SolveError> {
        if let Some(r) = self.regions.lock().expect("region cache").get(&losers) {
            return Ok(r.clone());
        }
        let region = Arc::new(solve(&self.arena, self.game, losers, self.backend)?);
        Ok(self.regions.lock().expect("region cache").entry(losers).or_insert(region).clone())
    }

    /// Whether the obedient step `s → t` may be taken after a history that
    /// touched the reach/safety sets of `touched`: some move realising it
    /// leads to an Adam vertex Eve wins.
    pub(crate) fn good_step(&self, region: &WinningRegion, s: StateId, t: StateId, touched: AgentSet) -> bool {
        let Some(e) = self.arena.eve_id(s, self.game.all_agents()) else {
            return false;
        };
        self.graph.moves_between(s, t).iter().any(|&m| {
            let adam = self.arena.num_eve() + self.arena.adam_of(e, m);
            region.eve_wins(adam, touched) == Some(true)
        })
    }

    /// An equilibrium outcome with payoff exactly `profile`, if one exists.
    pub fn ne_with_profile(&self, profile: WinnerProfile) -> Result<Option<Lasso>, SolveError> {
        match self.examine(profile)? {
            Outcome::Found(l) => Ok(Some(l)),
            _ => Ok(None),
        }
    }

    fn examine(&self, profile: WinnerProfile) -> Result<Outcome, SolveError> {
        if find_play(self.game, self.source, profile, &AllEdges).is_none() {
            return Ok(Outcome::Unachievable);
        }
        let region = self.region(profile.losers())?;
        if !region.initial_wins() {
            return Ok(Outcome::Absent);
        }
        let filter = |s: StateId, t: StateId, touched: AgentSet| self.good_step(&region, s, t, touched);
        Ok(match find_play(self.game, self.source, profile, &filter) {
            Some(l) => Outcome::Found(l),
            None => Outcome::Absent,
        })
    }

    /// The first candidate, in order, that is the payoff of an equilibrium.
    /// Candidates are examined in parallel chunks; the result and the
    /// statistics are those of a sequential scan.
    pub(crate) fn first_ne(
        &self,
        candidates: &[WinnerProfile],
    ) -> Result<(Option<(Lasso, WinnerProfile)>, Stats), EquilibriumError> {
        let chunk = self.pool.as_ref().map_or_else(rayon::current_num_threads, |p| p.current_num_threads()) * 2;
        let mut stats = Stats::default();
        let mut consulted = BTreeSet::new();
        for block in candidates.chunks(chunk.max(1)) {
            let run = || block.par_iter().map(|&p| self.examine(p)).collect::<Vec<_>>();
            let results = match &self.pool {
                Some(pool) => pool.install(run),
                None => run(),
            };
            for (&p, outcome) in block.iter().zip(results) {
                stats.profiles_examined += 1;
                let outcome = outcome?;
                if !matches!(outcome, Outcome::Unachievable) {
                    consulted.insert(p.losers());
                }
                stats.regions_solved = consulted.len();
                if let Outcome::Found(lasso) = outcome {
                    return Ok((Some((lasso, p)), stats));
                }
            }
        }
        Ok((None, stats))
    }

    /// Whether the lasso is the outcome of a Nash equilibrium from the source.
    ///
    /// Every step must be realisable by a move whose Adam vertex Eve wins for
    /// the lasso's losers, given what the history visited so far. The cycle is
    /// checked twice: once with the visited set growing along it, once with
    /// the final one.
    pub fn verify(&self, lasso: &Lasso) -> Result<bool, EquilibriumError> {
        lasso.validate(self.game)?;
        if lasso.start() != self.source {
            return Err(contract("lasso does not start at the source state"));
        }
        let profile = payoff_of_lasso(self.game, lasso)?;
        let region = self.region(profile.losers())?;
        let steps = lasso.stem.len() + 2 * lasso.cycle.len();
        let mut touched = AgentSet::EMPTY;
        for k in 0..steps {
            let (s, t) = (lasso.at(k), lasso.at(k + 1));
            touched = touched.union(self.game.agents_marking(s));
            if !self.good_step(&region, s, t, touched) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
