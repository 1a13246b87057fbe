use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use super::{GameGraph, Player};

/// The set of vertices in `mask` from which `player` forces a visit to
/// `target ∩ mask`, playing inside the subgame induced by `mask`.
///
/// An opponent vertex is attracted once all of its successors inside
/// `mask` are; one without such successors is never attracted.
pub fn attractor(graph: &GameGraph, player: Player, mask: &FixedBitSet, target: &FixedBitSet) -> FixedBitSet {
    let mut attr = target.clone();
    attr.intersect_with(mask);
    let mut remaining: Vec<usize> = vec![0; graph.len()];
    for v in mask.ones() {
        if graph.owner(v) != player {
            remaining[v] = graph.successors(v).iter().filter(|&&w| mask.contains(w)).count();
        }
    }
    let mut queue: VecDeque<usize> = attr.ones().collect();
    while let Some(u) = queue.pop_front() {
        for &p in graph.predecessors(u) {
            if !mask.contains(p) || attr.contains(p) {
                continue;
            }
            let pulled = if graph.owner(p) == player {
                true
            } else {
                remaining[p] -= 1;
                remaining[p] == 0
            };
            if pulled {
                attr.insert(p);
                queue.push_back(p);
            }
        }
    }
    attr
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive fixpoint: add vertices one round at a time until stable.
    fn naive(graph: &GameGraph, player: Player, mask: &FixedBitSet, target: &FixedBitSet) -> FixedBitSet {
        let mut attr = target.clone();
        attr.intersect_with(mask);
        loop {
            let mut next = attr.clone();
            for v in mask.ones() {
                let inside: Vec<usize> = graph.successors(v).iter().copied().filter(|&w| mask.contains(w)).collect();
                let ok = if graph.owner(v) == player {
                    inside.iter().any(|&w| attr.contains(w))
                } else {
                    !inside.is_empty() && inside.iter().all(|&w| attr.contains(w))
                };
                if ok {
                    next.insert(v);
                }
            }
            if next == attr {
                return attr;
            }
            attr = next;
        }
    }

    fn six() -> GameGraph {
        let owners = [Player::Eve, Player::Adam, Player::Eve, Player::Adam, Player::Eve, Player::Adam];
        let mut g = GameGraph::new();
        for o in owners {
            g.add_vertex(o);
        }
        for (a, b) in [(0, 1), (0, 2), (1, 0), (1, 3), (2, 3), (3, 4), (3, 5), (4, 4), (5, 0), (5, 2)] {
            g.add_edge(a, b);
        }
        g
    }

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &x in xs {
            s.insert(x);
        }
        s
    }

    #[test]
    fn matches_naive_fixpoint_on_handcrafted_arena() {
        let g = six();
        let full = g.full_mask();
        for player in [Player::Eve, Player::Adam] {
            for bits in 0u32..64 {
                let target = set(6, &(0..6).filter(|i| bits >> i & 1 == 1).collect::<Vec<_>>());
                assert_eq!(attractor(&g, player, &full, &target), naive(&g, player, &full, &target));
                let mask = set(6, &[0, 1, 2, 3]);
                assert_eq!(attractor(&g, player, &mask, &target), naive(&g, player, &mask, &target));
            }
        }
    }

    #[test]
    fn trivial_targets() {
        let g = six();
        let full = g.full_mask();
        assert_eq!(attractor(&g, Player::Eve, &full, &full), full);
        let empty = FixedBitSet::with_capacity(6);
        assert_eq!(attractor(&g, Player::Eve, &full, &empty), empty);
    }
}
