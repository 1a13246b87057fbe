use std::collections::VecDeque;

use crate::model::{ConcurrentGame, Lasso, StateId};

/// Lazily enumerates every canonical lasso from `source` with at most
/// `stem_bound` stem states and between 1 and `cycle_bound` cycle states.
///
/// Each play is produced once, in depth-first order of the underlying walk.
pub fn enumerate_lassos(
    game: &ConcurrentGame,
    source: StateId,
    stem_bound: usize,
    cycle_bound: usize,
) -> LassoIter<'_> {
    LassoIter {
        game,
        max_len: stem_bound + cycle_bound,
        stem_bound,
        cycle_bound,
        walk: vec![source],
        cursor: vec![0],
        pending: VecDeque::new(),
        fresh: true,
    }
}

pub struct LassoIter<'g> {
    game: &'g ConcurrentGame,
    max_len: usize,
    stem_bound: usize,
    cycle_bound: usize,
    walk: Vec<StateId>,
    /// Next successor index to try for each walk position.
    cursor: Vec<usize>,
    pending: VecDeque<Lasso>,
    /// Whether the current walk's splits have not been emitted yet.
    fresh: bool,
}

impl LassoIter<'_> {
    fn emit_splits(&mut self) {
        let len = self.walk.len();
        let last = self.walk[len - 1];
        for t in len.saturating_sub(self.cycle_bound)..len.min(self.stem_bound + 1) {
            if !self.game.has_edge(last, self.walk[t]) {
                continue;
            }
            let lasso = Lasso::new(self.walk[..t].to_vec(), self.walk[t..].to_vec());
            if lasso.is_canonical() {
                self.pending.push_back(lasso);
            }
        }
    }

    /// Moves to the next walk in depth-first order; false when exhausted.
    fn advance(&mut self) -> bool {
        loop {
            let Some(&top) = self.walk.last() else { return false };
            let k = *self.cursor.last().expect("cursor tracks walk");
            let succ = self.game.successors(top);
            if self.walk.len() < self.max_len && k < succ.len() {
                *self.cursor.last_mut().unwrap() += 1;
                self.walk.push(succ[k]);
                self.cursor.push(0);
                return true;
            }
            self.walk.pop();
            self.cursor.pop();
        }
    }
}

impl Iterator for LassoIter<'_> {
    type Item = Lasso;

    fn next(&mut self) -> Option<Lasso> {
        loop {
            if let Some(l) = self.pending.pop_front() {
                return Some(l);
            }
            if self.walk.is_empty() {
                return None;
            }
            if self.fresh {
                self.fresh = false;
                self.emit_splits();
                continue;
            }
            if !self.advance() {
                return None;
            }
            self.fresh = true;
        }
    }
}
