use super::*;
use crate::arena::build_arena;
use crate::model::ObjectiveClass;
use crate::random::{random_game_seeded, RandomGameConfig};

fn all_loser_sets(agents: usize) -> impl Iterator<Item = AgentSet> {
    (0..1u64 << agents).map(AgentSet::from_bits)
}

#[test]
fn fixpoint_matches_oracle_on_random_games() {
    for class in ObjectiveClass::ALL {
        let cfg = RandomGameConfig::small(class);
        for seed in 0..40 {
            let g = random_game_seeded(seed, &cfg);
            let arena = build_arena(&g, 0);
            for l in all_loser_sets(g.num_agents()) {
                let fast = solve_eve_region(&arena, &g, l).unwrap();
                let slow = lar_oracle_solve(&arena, &g, l, DEFAULT_ORACLE_BUDGET).unwrap();
                assert_eq!(fast, slow, "class {class}, seed {seed}, losers {l:?}");
            }
        }
    }
}

#[test]
fn empty_loser_set_is_won_everywhere() {
    for class in ObjectiveClass::ALL {
        let g = random_game_seeded(7, &RandomGameConfig::small(class));
        let arena = build_arena(&g, 0);
        let r = solve_eve_region(&arena, &g, AgentSet::EMPTY).unwrap();
        assert!(r.adam_keys().is_empty());
        assert!(r.initial_wins());
    }
}

#[test]
fn oracle_budget_is_reported() {
    let g = random_game_seeded(3, &RandomGameConfig::small(ObjectiveClass::Parity));
    let arena = build_arena(&g, 0);
    assert_eq!(
        lar_oracle_solve(&arena, &g, g.all_agents(), 1),
        Err(SolveError::OracleInfeasible { budget: 1 })
    );
}

#[test]
fn one_state_obey_loop_is_won_by_eve() {
    let g = ConcurrentGame::from_json(
        r#"{"states":["s"],"agents":1,"actions":["a"],"available":{"s":[["a"]]},
        "transitions":[{"from":"s","move":["a"],"to":"s"}],
        "objectives":[{"type":"buchi","accept":["s"]}]}"#,
    )
    .unwrap();
    let arena = build_arena(&g, 0);
    let r = lar_oracle_solve(&arena, &g, AgentSet::EMPTY, DEFAULT_ORACLE_BUDGET).unwrap();
    assert!(r.initial_wins());
    // with agent 1 a loser, the only play is won by agent 1
    assert!(!solve_eve_region(&arena, &g, g.all_agents()).unwrap().initial_wins());
}

#[test]
fn buchi_with_every_cycle_hitting_a_loser_target_is_lost() {
    // both states accepting for agent 1, agent 2 controls the choice
    let g = ConcurrentGame::from_json(
        r#"{"states":["a","b"],"agents":2,"actions":["x","y"],
        "available":{"a":[["x"],["x","y"]],"b":[["x"],["x","y"]]},
        "transitions":[{"from":"a","move":["x","x"],"to":"a"},{"from":"a","move":["x","y"],"to":"b"},
                       {"from":"b","move":["x","x"],"to":"b"},{"from":"b","move":["x","y"],"to":"a"}],
        "objectives":[{"type":"buchi","accept":["a","b"]},{"type":"buchi","accept":["b"]}]}"#,
    )
    .unwrap();
    let arena = build_arena(&g, 0);
    let r = solve_eve_region(&arena, &g, g.all_agents()).unwrap();
    assert!(!r.initial_wins());
    assert_eq!(r, lar_oracle_solve(&arena, &g, g.all_agents(), DEFAULT_ORACLE_BUDGET).unwrap());
}

/// Hand-analysed parity instance. From `s`, agent 1 picks `p` (priority 1)
/// or `q` (priority 2); both loop back to `s` (priority 3 for agent 1).
/// Agent 2 has all priorities 0 and is never a loser that matters.
#[test]
fn parity_hand_example() {
    let g = ConcurrentGame::from_json(
        r#"{"states":["s","p","q"],"agents":2,"actions":["x","y"],
        "available":{"s":[["x","y"],["x"]],"p":[["x"],["x"]],"q":[["x"],["x"]]},
        "transitions":[{"from":"s","move":["x","x"],"to":"p"},{"from":"s","move":["y","x"],"to":"q"},
                       {"from":"p","move":["x","x"],"to":"s"},{"from":"q","move":["x","x"],"to":"s"}],
        "objectives":[{"type":"parity","priority":{"s":3,"p":1,"q":2}},
                      {"type":"parity","priority":{"s":0,"p":0,"q":0}}]}"#,
    )
    .unwrap();
    let arena = build_arena(&g, 0);
    // Agent 1 as a loser: Eve must keep agent 1's minimum odd. Agent 1 can
    // deviate to q forever (min priority 2, even), so Eve loses at (s, Agt).
    let r = solve_eve_region(&arena, &g, AgentSet::singleton(0)).unwrap();
    assert!(!r.initial_wins());
    // Agent 2 always wins, so Eve cannot make it lose.
    let r = solve_eve_region(&arena, &g, AgentSet::singleton(1)).unwrap();
    assert!(!r.initial_wins());
    let r = solve_eve_region(&arena, &g, AgentSet::EMPTY).unwrap();
    assert!(r.initial_wins());
    for l in all_loser_sets(2) {
        assert_eq!(
            solve_eve_region(&arena, &g, l).unwrap(),
            lar_oracle_solve(&arena, &g, l, DEFAULT_ORACLE_BUDGET).unwrap()
        );
    }
}

#[test]
fn mixed_classes_are_rejected() {
    let g = ConcurrentGame::from_json(
        r#"{"states":["s"],"agents":2,"actions":["a"],"available":{"s":[["a"],["a"]]},
        "transitions":[{"from":"s","move":["a","a"],"to":"s"}],
        "objectives":[{"type":"buchi","accept":["s"]},{"type":"reach","target":["s"]}]}"#,
    )
    .unwrap();
    let arena = build_arena(&g, 0);
    assert!(matches!(solve_eve_region(&arena, &g, AgentSet::EMPTY), Err(SolveError::Contract(_))));
}
