use fixedbitset::FixedBitSet;

use super::attractor::attractor;
use super::{GameGraph, Player};

/// Zielonka's recursive algorithm for max-parity games: Eve wins a play
/// iff the largest priority seen infinitely often is even.
///
/// `mask` must induce a subgame in which every vertex has a successor.
pub fn zielonka(graph: &GameGraph, mask: &FixedBitSet, priority: &[u32]) -> (FixedBitSet, FixedBitSet) {
    let empty = FixedBitSet::with_capacity(graph.len());
    let Some(top) = mask.ones().map(|v| priority[v]).max() else {
        return (empty.clone(), empty);
    };
    let p = if top % 2 == 0 { Player::Eve } else { Player::Adam };
    let mut highest = FixedBitSet::with_capacity(graph.len());
    for v in mask.ones().filter(|&v| priority[v] == top) {
        highest.insert(v);
    }
    let attracted = attractor(graph, p, mask, &highest);
    let mut sub = mask.clone();
    sub.difference_with(&attracted);
    let (sub_eve, sub_adam) = zielonka(graph, &sub, priority);
    let opponent_part = if p == Player::Eve { sub_adam } else { sub_eve };
    if opponent_part.is_clear() {
        return match p {
            Player::Eve => (mask.clone(), empty),
            Player::Adam => (empty, mask.clone()),
        };
    }
    let lost = attractor(graph, p.opponent(), mask, &opponent_part);
    let mut rest = mask.clone();
    rest.difference_with(&lost);
    let (mut eve, mut adam) = zielonka(graph, &rest, priority);
    match p {
        Player::Eve => adam.union_with(&lost),
        Player::Adam => eve.union_with(&lost),
    }
    (eve, adam)
}
