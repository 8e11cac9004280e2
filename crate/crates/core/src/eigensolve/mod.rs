//! Roots of `H_D^d(ε)` across increasing `D`, their sequences, convergence
//! and state labels.

mod converge;
mod label;
mod parallel;
mod roots;
mod solve;
mod track;

pub use converge::{assess_convergence, ConvergenceReport, MIN_SEQUENCE_LEN, SETTLE_DIGITS};
pub use label::{label_states, EigenvalueReport};
pub use parallel::{default_threads, par_map};
pub use roots::{find_roots, FindOptions, Root, RootSet, RootStatus, Window};
pub use solve::{default_window, solve, Solution, SolveConfig, GUARD_DIGITS};
pub use track::{track_sequences, RootSequence};
