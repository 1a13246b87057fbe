use fixedbitset::FixedBitSet;

use crate::model::StateSet;

use super::attractor::attractor;
use super::{GameGraph, Player};

fn minus(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.difference_with(b);
    out
}

fn within(a: &FixedBitSet, mask: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.intersect_with(mask);
    out
}

/// Eve wins iff the play eventually stops visiting `bad`.
///
/// `mask` must induce a subgame in which every vertex has a successor.
/// Returns Eve's and Adam's regions, which partition `mask`.
pub fn cobuchi_eve(graph: &GameGraph, mask: &FixedBitSet, bad: &FixedBitSet) -> (FixedBitSet, FixedBitSet) {
    let mut rest = mask.clone();
    let mut eve = FixedBitSet::with_capacity(graph.len());
    loop {
        let forced = attractor(graph, Player::Adam, &rest, &within(bad, &rest));
        let safe = minus(&rest, &forced);
        if safe.is_clear() {
            return (eve, rest);
        }
        let won = attractor(graph, Player::Eve, &rest, &safe);
        eve.union_with(&won);
        rest.difference_with(&won);
    }
}

/// Eve wins iff every target set is visited infinitely often. With no
/// targets Eve wins everywhere.
pub fn generalized_buchi_eve(
    graph: &GameGraph,
    mask: &FixedBitSet,
    targets: &[FixedBitSet],
) -> (FixedBitSet, FixedBitSet) {
    let mut rest = mask.clone();
    let mut adam = FixedBitSet::with_capacity(graph.len());
    'outer: loop {
        for t in targets {
            let reach = attractor(graph, Player::Eve, &rest, &within(t, &rest));
            let avoid = minus(&rest, &reach);
            if !avoid.is_clear() {
                let lost = attractor(graph, Player::Adam, &rest, &avoid);
                adam.union_with(&lost);
                rest.difference_with(&lost);
                continue 'outer;
            }
        }
        return (rest, adam);
    }
}

/// Solves a game whose winner is decided by the set of colours seen
/// infinitely often: Eve wins iff `eve_wins` holds for that set. Colours
/// are game states, given per vertex by `colour`.
pub fn mcnaughton(
    graph: &GameGraph,
    mask: &FixedBitSet,
    num_colours: usize,
    colour: &dyn Fn(usize) -> usize,
    eve_wins: &dyn Fn(&StateSet) -> bool,
) -> (FixedBitSet, FixedBitSet) {
    let empty = FixedBitSet::with_capacity(graph.len());
    if mask.is_clear() {
        return (empty.clone(), empty);
    }
    let seen = StateSet::from_states(num_colours, mask.ones().map(colour));
    let p = if eve_wins(&seen) { Player::Eve } else { Player::Adam };
    for c in seen.iter() {
        let mut hits = FixedBitSet::with_capacity(graph.len());
        for v in mask.ones().filter(|&v| colour(v) == c) {
            hits.insert(v);
        }
        let attracted = attractor(graph, p, mask, &hits);
        let (sub_eve, sub_adam) = mcnaughton(graph, &minus(mask, &attracted), num_colours, colour, eve_wins);
        let opponent_part = if p == Player::Eve { sub_adam } else { sub_eve };
        if opponent_part.is_clear() {
            continue;
        }
        let lost = attractor(graph, p.opponent(), mask, &opponent_part);
        let (mut eve, mut adam) = mcnaughton(graph, &minus(mask, &lost), num_colours, colour, eve_wins);
        match p {
            Player::Eve => adam.union_with(&lost),
            Player::Adam => eve.union_with(&lost),
        }
        return (eve, adam);
    }
    match p {
        Player::Eve => (mask.clone(), empty),
        Player::Adam => (empty, mask.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &x in xs {
            s.insert(x);
        }
        s
    }

    /// 0 (Eve) -> 1 or 2; 1 (Adam) -> 0 or 1; 2 (Adam) -> 2.
    fn small() -> GameGraph {
        let mut g = GameGraph::new();
        g.add_vertex(Player::Eve);
        g.add_vertex(Player::Adam);
        g.add_vertex(Player::Adam);
        for (a, b) in [(0, 1), (0, 2), (1, 0), (1, 1), (2, 2)] {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn cobuchi_escapes_to_safe_sink() {
        let g = small();
        let (eve, adam) = cobuchi_eve(&g, &g.full_mask(), &set(3, &[1]));
        assert_eq!(eve, set(3, &[0, 2]));
        assert_eq!(adam, set(3, &[1]));
    }

    #[test]
    fn generalized_buchi_needs_every_target() {
        let g = small();
        let full = g.full_mask();
        // Adam may loop at 1 forever
        let (eve, _) = generalized_buchi_eve(&g, &full, &[set(3, &[2])]);
        assert_eq!(eve, set(3, &[0, 2]));
        // 2 never returns to 0
        let (eve, adam) = generalized_buchi_eve(&g, &full, &[set(3, &[0])]);
        assert!(eve.is_clear());
        assert_eq!(adam, full);
        let (eve, _) = generalized_buchi_eve(&g, &full, &[]);
        assert_eq!(eve, full);
    }

    #[test]
    fn mcnaughton_matches_cobuchi() {
        let g = small();
        let full = g.full_mask();
        let colour = |v: usize| v;
        let avoid_one = |inf: &StateSet| !inf.contains(1);
        let (eve, adam) = mcnaughton(&g, &full, 3, &colour, &avoid_one);
        assert_eq!((eve, adam), cobuchi_eve(&g, &full, &set(3, &[1])));
    }
}
