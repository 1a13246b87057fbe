//! Games built from CNF formulas whose equilibrium questions encode
//! satisfiability, plus DIMACS parsing and a truth-table SAT check.

use indexmap::IndexMap;
use rand::Rng;
use thiserror::Error;

use crate::model::{validate_game, ConcurrentGame, GameMetadata, RawGame, RawObjective, RawTransition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: malformed header, expected `p cnf <vars> <clauses>`")]
    MalformedHeader { line: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: unexpected token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {literal} out of range for {vars} variables")]
    LiteralOutOfRange { line: usize, literal: i64, vars: usize },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses, body has {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("{vars} variables exceed the brute-force bound of {bound}")]
    TooManyVariables { vars: usize, bound: usize },
}

/// A CNF formula over variables `1..=num_vars`. Literals are nonzero
/// integers whose sign is the polarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Builds a formula, dropping repeated literals within a clause.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Self {
        let clauses = clauses
            .into_iter()
            .map(|c| {
                let mut out: Vec<i32> = Vec::with_capacity(c.len());
                for l in c {
                    if !out.contains(&l) {
                        out.push(l);
                    }
                }
                out
            })
            .collect();
        CnfFormula { num_vars, clauses }
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// `assignment` bit `k` is the value of variable `k + 1`.
    pub fn satisfied_by(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                value == (l > 0)
            })
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula, ReductionError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] if header.is_none() => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(ReductionError::MalformedHeader { line })?);
            continue;
        }
        let (vars, _) = header.ok_or(ReductionError::MissingHeader)?;
        for token in trimmed.split_whitespace() {
            let literal: i64 = token.parse().map_err(|_| ReductionError::BadToken {
                line,
                token: token.to_string(),
            })?;
            if literal == 0 {
                if current.is_empty() {
                    return Err(ReductionError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if literal.unsigned_abs() as usize > vars {
                return Err(ReductionError::LiteralOutOfRange { line, literal, vars });
            }
            current.push(literal as i32);
        }
    }
    let (vars, declared) = header.ok_or(ReductionError::MissingHeader)?;
    if !current.is_empty() {
        return Err(ReductionError::MissingTerminator);
    }
    if clauses.len() != declared {
        return Err(ReductionError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula::new(vars, clauses))
}

pub const DEFAULT_SAT_BOUND: usize = 20;

/// Truth-table satisfiability for formulas with at most `bound` variables.
pub fn brute_force_sat(formula: &CnfFormula, bound: usize) -> Result<bool, ReductionError> {
    if formula.num_vars > bound.min(63) {
        return Err(ReductionError::TooManyVariables {
            vars: formula.num_vars,
            bound,
        });
    }
    Ok((0..1u64 << formula.num_vars).any(|a| formula.satisfied_by(a)))
}

/// A random formula with `1..=max_vars` variables, `1..=max_clauses`
/// clauses and clauses of `1..=width` literals.
pub fn random_cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize, width: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            (0..rng.gen_range(1..=width))
                .map(|_| {
                    let v = rng.gen_range(1..=n) as i32;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses)
}

/// A generated game and the social-welfare threshold that encodes
/// satisfiability.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub game: ConcurrentGame,
    pub threshold: usize,
}

/// Turn-based game skeleton: every state owned by agent 0, whose actions
/// select a successor; every other agent has one action everywhere.
struct Builder {
    agents: usize,
    states: Vec<String>,
    succ: Vec<Vec<usize>>,
}

impl Builder {
    fn new(agents: usize) -> Self {
        Builder {
            agents,
            states: Vec::new(),
            succ: Vec::new(),
        }
    }

    fn state(&mut self, name: String) -> usize {
        self.states.push(name);
        self.succ.push(Vec::new());
        self.states.len() - 1
    }

    fn edge(&mut self, from: usize, to: usize) {
        self.succ[from].push(to);
    }

    fn names(&self, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
        ids.into_iter().map(|s| self.states[s].clone()).collect()
    }

    fn finish(self, objectives: Vec<RawObjective>, threshold: usize, reduction: &str) -> Reduction {
        let width = self.succ.iter().map(Vec::len).max().unwrap_or(1);
        let actions: Vec<String> = (0..width).map(|a| format!("a{a}")).collect();
        let mut available = IndexMap::new();
        let mut transitions = Vec::new();
        for (s, succ) in self.succ.iter().enumerate() {
            let mut per_agent = vec![actions[..succ.len()].to_vec()];
            per_agent.extend((1..self.agents).map(|_| vec![actions[0].clone()]));
            available.insert(self.states[s].clone(), per_agent);
            for (k, &t) in succ.iter().enumerate() {
                let mut mv = vec![actions[k].clone()];
                mv.extend((1..self.agents).map(|_| actions[0].clone()));
                transitions.push(RawTransition {
                    from: self.states[s].clone(),
                    actions: mv,
                    to: self.states[t].clone(),
                });
            }
        }
        let raw = RawGame {
            initial: Some(self.states[0].clone()),
            states: self.states,
            agents: self.agents,
            actions,
            available,
            transitions,
            objectives,
            metadata: Some(GameMetadata {
                threshold: Some(threshold),
                reduction: Some(reduction.to_string()),
            }),
        };
        let game = validate_game(&raw).expect("reduction games are valid");
        Reduction { game, threshold }
    }
}

/// The `(m+1)`-agent reachability game: a chain of choices between `x_k`
/// and `¬x_k` ending in an absorbing state. Agent 0 owns every state and
/// targets all of them; agent `j` targets the literal states satisfying
/// clause `j`. Threshold `m + 1`.
pub fn sat_to_reach_game(formula: &CnfFormula) -> Reduction {
    let n = formula.num_vars;
    let mut b = Builder::new(formula.num_clauses() + 1);
    let choice: Vec<usize> = (1..=n).map(|k| b.state(format!("c{k}"))).collect();
    let pos: Vec<usize> = (1..=n).map(|k| b.state(format!("x{k}"))).collect();
    let neg: Vec<usize> = (1..=n).map(|k| b.state(format!("nx{k}"))).collect();
    let end = b.state("end".to_string());
    for k in 0..n {
        let next = if k + 1 < n { choice[k + 1] } else { end };
        b.edge(choice[k], pos[k]);
        b.edge(choice[k], neg[k]);
        b.edge(pos[k], next);
        b.edge(neg[k], next);
    }
    b.edge(end, end);
    let mut objectives = vec![RawObjective::Reach {
        target: b.names(0..b.states.len()),
    }];
    for clause in &formula.clauses {
        let target = clause
            .iter()
            .map(|&l| {
                let k = l.unsigned_abs() as usize - 1;
                if l > 0 {
                    pos[k]
                } else {
                    neg[k]
                }
            })
            .collect::<Vec<_>>();
        objectives.push(RawObjective::Reach { target: b.names(target) });
    }
    b.finish(objectives, formula.num_clauses() + 1, "sat-reach")
}

/// The cyclic layered game `V_0 → V_1 → … → V_{n+m} → V_0` with
/// `V_0 = {s}`, `V_k = {x_k, ¬x_k}` and `V_{n+j}` the literals of clause
/// `j`. Agent 0 owns every state and has nothing to avoid; agents `2k-1` and
/// `2k` avoid the positive and negative occurrences of `x_k`. Threshold `n + 1`.
fn layered_sat_game(formula: &CnfFormula, objective: fn(Vec<String>) -> RawObjective, reduction: &str) -> Reduction {
    let n = formula.num_vars;
    let mut b = Builder::new(2 * n + 1);
    let mut layers: Vec<Vec<usize>> = vec![vec![b.state("s".to_string())]];
    let mut marked: Vec<Vec<usize>> = vec![Vec::new(); 2 * n + 1];
    for k in 1..=n {
        let x = b.state(format!("x{k}"));
        let nx = b.state(format!("nx{k}"));
        marked[2 * k - 1].push(x);
        marked[2 * k].push(nx);
        layers.push(vec![x, nx]);
    }
    for (j, clause) in formula.clauses.iter().enumerate() {
        let mut layer = Vec::new();
        for (p, &l) in clause.iter().enumerate() {
            let st = b.state(format!("l{}_{}", j + 1, p + 1));
            let k = l.unsigned_abs() as usize;
            marked[if l > 0 { 2 * k - 1 } else { 2 * k }].push(st);
            layer.push(st);
        }
        layers.push(layer);
    }
    for i in 0..layers.len() {
        let next = layers[(i + 1) % layers.len()].clone();
        for &from in &layers[i] {
            for &to in &next {
                b.edge(from, to);
            }
        }
    }
    let objectives = marked.into_iter().map(|ids| objective(b.names(ids))).collect();
    b.finish(objectives, n + 1, reduction)
}

pub fn sat_to_safety_game(formula: &CnfFormula) -> Reduction {
    layered_sat_game(formula, |unsafe_states| RawObjective::Safety { unsafe_states }, "sat-safety")
}

/// As [`sat_to_safety_game`], with the avoided sets read as coBüchi sets.
pub fn sat_to_cobuchi_game(formula: &CnfFormula) -> Reduction {
    layered_sat_game(formula, |reject| RawObjective::Cobuchi { reject }, "sat-cobuchi")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{podp, swdp};

    fn cnf(n: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(n, clauses.iter().map(|c| c.to_vec()).collect())
    }

    /// Independent check: DPLL with unit propagation.
    fn dpll(clauses: &[Vec<i32>]) -> bool {
        if clauses.is_empty() {
            return true;
        }
        if clauses.iter().any(Vec::is_empty) {
            return false;
        }
        let lit = clauses
            .iter()
            .find(|c| c.len() == 1)
            .map(|c| c[0])
            .unwrap_or(clauses[0][0]);
        let assign = |l: i32| -> Vec<Vec<i32>> {
            clauses
                .iter()
                .filter(|c| !c.contains(&l))
                .map(|c| c.iter().copied().filter(|&x| x != -l).collect())
                .collect()
        };
        dpll(&assign(lit)) || dpll(&assign(-lit))
    }

    #[test]
    fn parses_single_clause() {
        assert_eq!(parse_dimacs("p cnf 1 1\n1 0").unwrap(), cnf(1, &[&[1]]));
    }

    #[test]
    fn parses_two_clauses_with_comments() {
        let f = parse_dimacs("c example\np cnf 2 2\n1 -2 0\n-1 0\n").unwrap();
        assert_eq!(f, cnf(2, &[&[1, -2], &[-1]]));
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn clauses_may_span_lines() {
        assert_eq!(parse_dimacs("p cnf 3 1\n1 2\n-3 0\n").unwrap(), cnf(3, &[&[1, 2, -3]]));
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(
            parse_dimacs("p cnf 3 3\n1 0\n2 0\n"),
            Err(ReductionError::ClauseCountMismatch { declared: 3, found: 2 })
        );
        assert!(matches!(parse_dimacs("p cnf x 1\n1 0"), Err(ReductionError::MalformedHeader { .. })));
        assert!(matches!(parse_dimacs("p dnf 1 1\n1 0"), Err(ReductionError::MalformedHeader { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\n2 0"), Err(ReductionError::LiteralOutOfRange { .. })));
        assert_eq!(parse_dimacs("p cnf 1 1\n1"), Err(ReductionError::MissingTerminator));
        assert_eq!(parse_dimacs("1 0"), Err(ReductionError::MissingHeader));
        assert!(matches!(parse_dimacs("p cnf 1 1\n0"), Err(ReductionError::EmptyClause { .. })));
        assert!(matches!(parse_dimacs("p cnf 1 1\n1 a 0"), Err(ReductionError::BadToken { .. })));
    }

    #[test]
    fn brute_force_basics() {
        assert!(brute_force_sat(&cnf(1, &[&[1]]), DEFAULT_SAT_BOUND).unwrap());
        assert!(!brute_force_sat(&cnf(1, &[&[1], &[-1]]), DEFAULT_SAT_BOUND).unwrap());
        assert!(brute_force_sat(&cnf(21, &[&[1]]), DEFAULT_SAT_BOUND).is_err());
    }

    #[test]
    fn brute_force_agrees_with_dpll() {
        let mut rng = rand::rngs::mock::StepRng::new(0, 0x9e37_79b9_7f4a_7c15);
        for _ in 0..300 {
            let f = random_cnf(&mut rng, 6, 8, 3);
            assert_eq!(brute_force_sat(&f, DEFAULT_SAT_BOUND).unwrap(), dpll(&f.clauses), "{f:?}");
        }
    }

    #[test]
    fn generated_games_are_turn_based_and_agent_zero_always_wins() {
        let f = cnf(2, &[&[1, -2], &[2]]);
        for r in [sat_to_reach_game(&f), sat_to_safety_game(&f), sat_to_cobuchi_game(&f)] {
            let g = &r.game;
            assert!(g.is_turn_based());
            for s in 0..g.num_states() {
                for i in 1..g.num_agents() {
                    assert_eq!(g.available(s, i).len(), 1);
                }
            }
            assert_eq!(g.metadata().unwrap().threshold, Some(r.threshold));
            assert_eq!(ConcurrentGame::from_json(&g.to_json()).unwrap(), *g);
        }
        assert_eq!(sat_to_reach_game(&f).game.num_agents(), 3);
        assert_eq!(sat_to_safety_game(&f).game.num_agents(), 5);
    }

    #[test]
    fn small_formulas() {
        let sat = cnf(1, &[&[1]]);
        let unsat = cnf(1, &[&[1], &[-1]]);
        let r = sat_to_reach_game(&sat);
        assert!(swdp(&r.game, 0, 2).unwrap().answer);
        assert!(podp(&r.game, 0).unwrap().answer);
        let r = sat_to_reach_game(&unsat);
        assert!(!swdp(&r.game, 0, 3).unwrap().answer);
        // agent 0 decides every play, so each maximal winner set is an equilibrium
        let d = podp(&r.game, 0).unwrap();
        assert!(d.answer);
        assert_eq!(d.witness.unwrap().1.social_welfare(), 2);
        for build in [sat_to_safety_game, sat_to_cobuchi_game] {
            assert!(swdp(&build(&sat).game, 0, 2).unwrap().answer);
            assert!(!swdp(&build(&unsat).game, 0, 2).unwrap().answer);
        }
    }
}
