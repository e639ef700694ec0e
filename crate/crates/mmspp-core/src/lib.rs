//! Solvers for the minimum-max-out-degree routing problem on tree-shaped
//! networks ("min-degree sort point problem", MMSPP).
//!
//! An instance is a directed graph `D` whose underlying undirected graph is a
//! tree, together with a set of commodities `(s_k, t_k)` such that `D`
//! contains a directed `s_k,t_k`-path `P_k`. A feasible solution is a
//! subgraph `H` of the transitive closure of `D` such that every commodity
//! admits a directed `s_k,t_k`-path inside `H ∩ cl(P_k)` — i.e. each
//! commodity is routed along a monotone sequence of shortcut hops over its
//! own network path. The objective is to minimize the maximum out-degree of
//! `H`.
//!
//! The crate provides:
//!
//! - [`instance`]: the validated instance model, shape classification and
//!   feasibility checking,
//! - [`witness`]: witness-set lower bounds — machine-checkable certificates
//!   that no feasible solution can beat a given degree bound,
//! - [`single_source`]: an exact solver for single-source instances (local
//!   search with an exchange log, plus an `O(n log n)` target-degree
//!   routine used under binary search),
//! - [`out_tree`]: an additive-1 solver for multi-source out-trees built on
//!   claw contraction, returning failure witnesses at the last infeasible
//!   target,
//! - [`tree_framework`]: a centroid-decomposition framework for general
//!   trees with pluggable junction solvers, and a direct 2-approximation
//!   for stars,
//! - [`oracle`]: an exact exponential-time reference solver, exhaustive
//!   witness maximization and a seeded search for instances where the best
//!   witness bound is strictly below the optimum,
//! - [`generators`]: deterministic seeded random instances plus structured
//!   families (hitting-set reductions, partition brooms, star gap family).
//!
//! The crate is `no_std` (with `alloc`): everything operates on in-memory
//! instances. Text formats, file IO and the command-line front end live in
//! the companion `mmspp-cli` crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod generators;
pub mod instance;
pub mod oracle;
pub mod out_tree;
pub mod report;
pub mod single_source;
#[cfg(test)]
pub(crate) mod test_util;
pub mod tree_framework;
pub mod witness;

pub use error::{FeasibilityError, GeneratorError, InstanceError, OracleError, SolveError};
pub use instance::{Arc, Commodity, Instance, ShapeClass, Solution};
pub use report::{SolveReport, SolveStats, SolveStatus};
pub use witness::{CertificateKind, Violation, WitnessCertificate};
