use crate::model::{profile_of, ConcurrentGame, ObjectiveClass, StateId, StateSet, WinnerProfile};

use super::MoveGraph;

/// Tarjan's algorithm over an implicit digraph, restricted to the vertices
/// reachable from `roots`. Components come out in reverse topological order
/// (every component precedes the components that can reach it), each sorted.
pub fn strongly_connected_components<F, I>(
    num_vertices: usize,
    roots: impl IntoIterator<Item = usize>,
    successors: F,
) -> Vec<Vec<usize>>
where
    F: Fn(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; num_vertices];
    let mut lowlink = vec![0; num_vertices];
    let mut on_stack = vec![false; num_vertices];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;
    // (vertex, its successors, next successor position)
    let mut call_stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();

    for root in roots {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        lowlink[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call_stack.push((root, successors(root).into_iter().collect(), 0));

        while let Some((v, succ, pos)) = call_stack.last_mut() {
            let v = *v;
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    lowlink[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, successors(w).into_iter().collect(), 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call_stack.pop();
            if let Some((parent, _, _)) = call_stack.last() {
                lowlink[*parent] = lowlink[*parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// The SCCs of a game's move graph reachable from a source state.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    /// Components in reverse topological order.
    pub components: Vec<Vec<StateId>>,
    /// Component index of each reachable state.
    pub component_of: Vec<Option<usize>>,
    /// Singleton components without a self-loop: no play can stay there.
    pub transient: Vec<bool>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn states(&self, c: usize, num_states: usize) -> StateSet {
        StateSet::from_states(num_states, self.components[c].iter().copied())
    }

    /// Indices of components some play can stay in forever.
    pub fn recurrent(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.components.len()).filter(|&c| !self.transient[c])
    }

    /// Number of agents whose Büchi set meets the component, or `None` when
    /// some objective is not Büchi.
    pub fn rank(&self, game: &ConcurrentGame, c: usize) -> Option<usize> {
        if game.objective_class() != Some(ObjectiveClass::Buchi) {
            return None;
        }
        Some(self.winner_profile(game, c).social_welfare())
    }

    /// Payoff of a play whose recurring states are exactly the component.
    pub fn winner_profile(&self, game: &ConcurrentGame, c: usize) -> WinnerProfile {
        let set = self.states(c, game.num_states());
        profile_of(game, &set, &set)
    }
}

pub fn tarjan_sccs(graph: &MoveGraph, source: StateId) -> SccDecomposition {
    let n = graph.num_states();
    let components =
        strongly_connected_components(n, [source], |s| graph.successors(s).to_vec());
    let mut component_of = vec![None; n];
    for (c, comp) in components.iter().enumerate() {
        for &s in comp {
            component_of[s] = Some(c);
        }
    }
    let transient = components
        .iter()
        .map(|comp| comp.len() == 1 && !graph.successors(comp[0]).contains(&comp[0]))
        .collect();
    SccDecomposition {
        components,
        component_of,
        transient,
    }
}
