use super::*;
use crate::graph::{achievable_profiles, enumerate_lassos, pareto_front};
use crate::model::{AgentSet, ObjectiveClass};
use crate::random::{random_game_seeded, RandomGameConfig};
use crate::zerosum::{Backend, DEFAULT_ORACLE_BUDGET};

fn game(json: &str) -> ConcurrentGame {
    ConcurrentGame::from_json(json).unwrap()
}

fn bits(s: &str) -> WinnerProfile {
    WinnerProfile::from_bitstring(s, s.len()).unwrap()
}

fn pennies(class: &str, key: &str) -> ConcurrentGame {
    game(&format!(
        r#"{{"states":["s","h","t"],"agents":2,"actions":["H","T"],
        "available":{{"s":[["H","T"],["H","T"]],"h":[["H"],["H"]],"t":[["H"],["H"]]}},
        "transitions":[{{"from":"s","move":["H","H"],"to":"h"}},{{"from":"s","move":["T","T"],"to":"h"}},
                       {{"from":"s","move":["H","T"],"to":"t"}},{{"from":"s","move":["T","H"],"to":"t"}},
                       {{"from":"h","move":["H","H"],"to":"h"}},{{"from":"t","move":["H","H"],"to":"t"}}],
        "objectives":[{{"type":"{class}","{key}":["h"]}},{{"type":"{class}","{key}":["t"]}}]}}"#
    ))
}

/// Agent 1 picks `l` or `r` at `s`; `l` and `r` loop. At `l` agent 3 can
/// break away to the sink `z`. Büchi sets: agent 1 {l, r}, agent 2 {l},
/// agent 3 {z}.
fn breakaway() -> ConcurrentGame {
    game(
        r#"{"states":["s","l","r","z"],"agents":3,"actions":["x","y"],
        "available":{"s":[["x","y"],["x"],["x"]],"l":[["x"],["x"],["x","y"]],"r":[["x"],["x"],["x"]],"z":[["x"],["x"],["x"]]},
        "transitions":[{"from":"s","move":["x","x","x"],"to":"l"},{"from":"s","move":["y","x","x"],"to":"r"},
                       {"from":"l","move":["x","x","x"],"to":"l"},{"from":"l","move":["x","x","y"],"to":"z"},
                       {"from":"r","move":["x","x","x"],"to":"r"},{"from":"z","move":["x","x","x"],"to":"z"}],
        "objectives":[{"type":"buchi","accept":["l","r"]},{"type":"buchi","accept":["l"]},{"type":"buchi","accept":["z"]}]}"#,
    )
}

/// `a` loops (agent 1's Büchi set) or agent 1 moves to `b` (agent 2's set),
/// which returns to `a` unless agent 3 moves to the sink `z` (agent 3's set).
fn rank_gap() -> ConcurrentGame {
    game(
        r#"{"states":["a","b","z"],"agents":3,"actions":["x","y"],
        "available":{"a":[["x","y"],["x"],["x"]],"b":[["x"],["x"],["x","y"]],"z":[["x"],["x"],["x"]]},
        "transitions":[{"from":"a","move":["x","x","x"],"to":"a"},{"from":"a","move":["y","x","x"],"to":"b"},
                       {"from":"b","move":["x","x","x"],"to":"a"},{"from":"b","move":["x","x","y"],"to":"z"},
                       {"from":"z","move":["x","x","x"],"to":"z"}],
        "objectives":[{"type":"buchi","accept":["a"]},{"type":"buchi","accept":["b"]},{"type":"buchi","accept":["z"]}]}"#,
    )
}

#[test]
fn all_winning_lasso_is_an_equilibrium() {
    let g = game(
        r#"{"states":["s"],"agents":2,"actions":["a","b"],"available":{"s":[["a","b"],["a"]]},
        "transitions":[{"from":"s","move":["a","a"],"to":"s"},{"from":"s","move":["b","a"],"to":"s"}],
        "objectives":[{"type":"buchi","accept":["s"]},{"type":"buchi","accept":["s"]}]}"#,
    );
    assert!(verify_ne_lasso(&g, 0, &Lasso::new(vec![], vec![0])).unwrap());
}

#[test]
fn matching_pennies_has_no_equilibrium() {
    for (class, key) in [("reach", "target"), ("buchi", "accept")] {
        let g = pennies(class, key);
        for lasso in enumerate_lassos(&g, 0, 4, 4) {
            assert!(!verify_ne_lasso(&g, 0, &lasso).unwrap());
        }
        for lower in ["00", "01", "10", "11"] {
            assert!(!constrained_ne_exists(&g, 0, bits(lower), bits("11")).unwrap().answer);
        }
        assert!(!swdp(&g, 0, 0).unwrap().answer);
        assert!(!podp(&g, 0).unwrap().answer);
    }
    let g = pennies("buchi", "accept");
    for v in 1..=2 {
        assert!(!swdp_buchi(&g, 0, v).unwrap().answer);
    }
}

#[test]
fn unconstrained_query_finds_an_equilibrium() {
    let g = breakaway();
    let d = constrained_ne_exists(&g, 0, bits("000"), bits("111")).unwrap();
    assert!(d.answer);
    let (lasso, p) = d.witness.clone().unwrap();
    assert_eq!(p, bits("100"));
    assert!(verify_ne_lasso(&g, 0, &lasso).unwrap());
    assert!(swdp(&g, 0, 0).unwrap().answer);
}

#[test]
fn pareto_optimal_payoffs_may_all_be_unstable() {
    let g = breakaway();
    assert_eq!(
        pareto_front(&achievable_profiles(&g, 0)),
        [bits("110"), bits("001")].into_iter().collect()
    );
    assert!(!podp(&g, 0).unwrap().answer);
    assert!(!podp_count_variant(&g, 0).unwrap().answer);
    assert!(swdp(&g, 0, 1).unwrap().answer);
    assert!(!swdp(&g, 0, 2).unwrap().answer);
}

#[test]
fn rank_scan_without_refinement_misses_an_equilibrium() {
    let g = rank_gap();
    let solver = Solver::new(&g, 0);
    let generic = solver.swdp(1).unwrap();
    assert!(generic.answer);
    assert_eq!(generic.witness.as_ref().unwrap().1, bits("100"));
    assert!(solver.swdp_buchi(1).unwrap().answer);
    assert!(!solver.swdp_buchi_unrefined(1).unwrap().answer);
}

#[test]
fn contract_errors() {
    let g = breakaway();
    assert!(constrained_ne_exists(&g, 0, bits("100"), bits("011")).is_err());
    assert!(constrained_ne_exists(&g, 0, bits("00"), bits("11")).is_err());
    assert!(swdp(&g, 0, 4).is_err());
    assert!(swdp_buchi(&pennies("reach", "target"), 0, 1).is_err());
    assert!(verify_ne_lasso(&g, 0, &Lasso::new(vec![], vec![1])).is_err());
}

#[test]
fn decision_json_shape() {
    let g = breakaway();
    let d = swdp(&g, 0, 1).unwrap();
    let v = d.to_json(&g);
    assert_eq!(v["problem"], "swdp");
    assert_eq!(v["answer"], true);
    assert_eq!(v["method"], "generic");
    assert_eq!(v["witness"]["profile"], "100");
    assert_eq!(v["witness"]["stem"], serde_json::json!(["s"]));
    assert_eq!(v["witness"]["cycle"], serde_json::json!(["r"]));
    assert_eq!(serde_json::to_string(&v).unwrap(), serde_json::to_string(&swdp(&g, 0, 1).unwrap().to_json(&g)).unwrap());
}

#[test]
fn random_games_satisfy_decider_invariants() {
    for class in ObjectiveClass::ALL {
        let cfg = RandomGameConfig::small(class);
        for seed in 0..15 {
            let g = random_game_seeded(seed, &cfg);
            let n = g.num_agents();
            let fast = Solver::new(&g, 0);
            let slow = Solver::new(&g, 0).with_backend(Backend::LarOracle { budget: DEFAULT_ORACLE_BUDGET });
            let front = pareto_front(&achievable_profiles(&g, 0));

            let mut previous = true;
            for v in 0..=n {
                let d = fast.swdp(v).unwrap();
                assert_eq!(d, slow.swdp(v).unwrap(), "class {class} seed {seed} v {v}");
                assert!(previous || !d.answer, "swdp not monotone");
                previous = d.answer;
                if let Some((lasso, p)) = &d.witness {
                    assert!(fast.verify(lasso).unwrap());
                    assert!(p.social_welfare() >= v);
                }
            }
            let d = fast.podp().unwrap();
            assert_eq!(d, slow.podp().unwrap());
            if let Some((lasso, p)) = &d.witness {
                assert!(front.contains(p));
                assert!(fast.verify(lasso).unwrap());
            }

            let bounded = bounded_ne_profiles(&fast, g.num_states().pow(2), g.num_states().pow(2)).unwrap();
            for bits in 0..1u64 << n {
                let p = WinnerProfile::new(AgentSet::from_bits(bits), n);
                let found = fast.ne_with_profile(p).unwrap();
                assert_eq!(found.is_some(), bounded.contains_key(&p), "class {class} seed {seed} profile {p}");
                if let Some(l) = found {
                    assert!(fast.verify(&l).unwrap());
                    assert!(fast.swdp(p.social_welfare()).unwrap().answer);
                }
                if let Some(l) = bounded.get(&p) {
                    assert!(fast.verify(l).unwrap());
                }
            }

            if class == ObjectiveClass::Buchi {
                for v in 0..=n {
                    assert_eq!(fast.swdp_buchi(v).unwrap().answer, fast.swdp(v).unwrap().answer);
                }
            }
        }
    }
}
