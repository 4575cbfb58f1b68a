//! Core of the `macroplan` toolkit.
//!
//! Everything here is allocation-only (`no_std` + `alloc`): value-vector
//! states and goals, the black-box simulator contract, budgeted best-first
//! search, focused macro-action learning and the benchmark domains
//! (Suitcase Lock, sliding-tile puzzle, Rubik's cube, ground STRIPS).
//!
//! File formats, statistics and the experiment driver live in the std
//! companion crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod domains;
mod error;
pub mod macros;
pub mod perm;
pub mod rng;
pub mod search;
pub mod sim;
pub mod state;

pub use error::Error;
pub use macros::{
    attach_macros, dedup_by_net_effect, generate_random_macros, learn_focused_macros, Augmented,
    LearnParams, Macro, MacroDomain, MacroLibrary, MacroScore, Provenance, StateSampler,
};
pub use perm::Permutation;
pub use search::{
    best_first_search, best_first_search_with, gbfs_goal_count, NodeId, SearchResult, SearchSpace,
    TieBreak,
};
pub use sim::{apply_plan, macro_effect_size, ActionId, Domain, Simulator};
pub use state::{effect_size, goal_count, net_effect, Goal, State, Value};

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) type FastSet<T> = hashbrown::HashSet<T, foldhash::fast::FixedState>;
