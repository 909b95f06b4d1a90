//! Exact combinatorics and Monte Carlo experiments for Ramsey properties of
//! the binomial random graph `G(n, p)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: host graphs, seeded `G(n, p)` sampling, graph6 and edge-list IO.
//! * [`pattern`]: exact 2-density analysis of small pattern graphs.
//! * [`counting`]: copy enumeration and the derived counting families.
//! * [`arrowing`]: the decision procedure for `G -> (F)_2^e`.
//! * [`booster`]: focus sets, bad embeddings, normal families, index
//!   consistency, activated sets and the booster hypergraph.
//! * [`regularity`]: sparse regularity verification.
//! * [`experiments`]: threshold estimation, typical-property rates, the Janson
//!   bound and the proof-constant calculator.
//! * [`cli`]: the `ramsey-lab` command line.

pub mod arrowing;
pub mod booster;
pub mod cli;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod pattern;
pub mod rational;
pub mod regularity;

pub use error::{LabError, Result};
pub use graph::{EdgeId, Graph, Seed};
pub use rational::Rational;
