//! Sampling best-first search (S-BFS) for numeric planning problems with
//! continuous control variables.
//!
//! The crate is organized bottom-up:
//!
//! * [`model`]: problems, states, decisions and transition semantics;
//! * [`dsl`]: the s-expression problem format, validation and plan output;
//! * [`heuristics`]: goal counting;
//! * [`sampling`]: systematic, uniform and heuristic-guided samplers;
//! * [`search`]: the S-BFS engine, its invariant checks and an MCTS baseline;
//! * [`domains`]: benchmark instance generators;
//! * [`harness`]: suites, CSV records and reports behind the `plan` binary.

pub mod domains;
pub mod dsl;
pub mod harness;
pub mod heuristics;
pub mod model;
pub mod sampling;
pub mod search;
