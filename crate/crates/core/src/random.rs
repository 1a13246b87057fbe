//! Seeded random concurrent games for differential and property testing.

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{validate_game, ConcurrentGame, ObjectiveClass, RawGame, RawObjective, RawTransition};

/// Shape of the games drawn by [`random_game`]. Sizes are upper bounds;
/// each game draws its own sizes uniformly from `1..=max`.
#[derive(Clone, Copy, Debug)]
pub struct RandomGameConfig {
    pub class: ObjectiveClass,
    pub max_states: usize,
    pub max_agents: usize,
    pub max_actions: usize,
    /// Probability that a state belongs to an agent's objective set.
    pub density: f64,
}

impl RandomGameConfig {
    pub fn small(class: ObjectiveClass) -> Self {
        RandomGameConfig {
            class,
            max_states: 5,
            max_agents: 3,
            max_actions: 2,
            density: 0.4,
        }
    }
}

pub fn random_game_seeded(seed: u64, config: &RandomGameConfig) -> ConcurrentGame {
    random_game(&mut ChaCha8Rng::seed_from_u64(seed), config)
}

pub fn random_game(rng: &mut impl Rng, config: &RandomGameConfig) -> ConcurrentGame {
    let n = rng.gen_range(1..=config.max_states);
    let agents = rng.gen_range(1..=config.max_agents);
    let states: Vec<String> = (0..n).map(|s| format!("s{s}")).collect();
    let actions: Vec<String> = (0..config.max_actions).map(|a| format!("a{a}")).collect();

    let mut available = IndexMap::new();
    let mut transitions = Vec::new();
    for s in &states {
        let per_agent: Vec<Vec<String>> = (0..agents)
            .map(|_| actions[..rng.gen_range(1..=config.max_actions)].to_vec())
            .collect();
        let mut moves: Vec<Vec<String>> = vec![Vec::new()];
        for acts in &per_agent {
            moves = moves
                .into_iter()
                .flat_map(|prefix| {
                    acts.iter().map(move |a| {
                        let mut m = prefix.clone();
                        m.push(a.clone());
                        m
                    })
                })
                .collect();
        }
        for m in moves {
            let to = states.choose(rng).expect("at least one state").clone();
            transitions.push(RawTransition {
                from: s.clone(),
                actions: m,
                to,
            });
        }
        available.insert(s.clone(), per_agent);
    }

    let subset = |rng: &mut dyn rand::RngCore| -> Vec<String> {
        states.iter().filter(|_| rng.gen_bool(config.density)).cloned().collect()
    };
    let objectives = (0..agents)
        .map(|_| match config.class {
            ObjectiveClass::Reach => RawObjective::Reach { target: subset(rng) },
            ObjectiveClass::Safety => RawObjective::Safety { unsafe_states: subset(rng) },
            ObjectiveClass::Buchi => RawObjective::Buchi { accept: subset(rng) },
            ObjectiveClass::CoBuchi => RawObjective::Cobuchi { reject: subset(rng) },
            ObjectiveClass::Parity => RawObjective::Parity {
                priority: states.iter().map(|s| (s.clone(), rng.gen_range(0..4))).collect(),
            },
            ObjectiveClass::Muller => {
                let palette = ["blue", "green", "red"];
                let k = rng.gen_range(1..=palette.len());
                let colors: IndexMap<String, String> =
                    states.iter().map(|s| (s.clone(), palette[rng.gen_range(0..k)].to_string())).collect();
                let mut used: Vec<String> = colors.values().cloned().collect();
                used.sort();
                used.dedup();
                let family = (1u32..1 << used.len())
                    .filter(|_| rng.gen_bool(0.5))
                    .map(|mask| (0..used.len()).filter(|c| mask >> c & 1 == 1).map(|c| used[c].clone()).collect())
                    .collect();
                RawObjective::Muller { colors, family }
            }
        })
        .collect();

    let raw = RawGame {
        states,
        agents,
        actions,
        available,
        transitions,
        objectives,
        initial: None,
        metadata: None,
    };
    validate_game(&raw).expect("generated games are valid")
}
