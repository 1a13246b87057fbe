//! Pure Nash equilibria with social-welfare and Pareto constraints in
//! concurrent games with ω-regular objectives.
//!
//! The solving pipeline: a [`ConcurrentGame`](model::ConcurrentGame) is
//! turned into a two-player [suspect arena](arena::SuspectArena); for a set
//! of losing agents, Eve's winning region in that arena
//! ([`zerosum::solve_eve_region`]) tells which plays are outcomes of Nash
//! equilibria; the [`equilibria`] deciders search such plays under payoff
//! constraints.

pub mod arena;
pub mod equilibria;
pub mod graph;
pub mod model;
pub mod random;
pub mod reductions;
pub mod zerosum;
