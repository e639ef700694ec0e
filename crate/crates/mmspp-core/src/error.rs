//! Error types shared across the crate.

use alloc::string::String;
use core::fmt;

use crate::instance::Arc;

/// Rejections raised while constructing or normalizing an [`crate::Instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceError {
    /// The node list is empty.
    NoNodes,
    /// Two nodes carry the same name.
    DuplicateName(String),
    /// An arc or commodity references a node index outside the node list.
    NodeOutOfRange(u32),
    /// An arc has equal tail and head.
    SelfLoop(u32),
    /// The same (tail, head) pair appears twice in the arc list.
    DuplicateArc(Arc),
    /// The underlying undirected graph is not connected; carries a node
    /// unreachable from node 0.
    Disconnected(u32),
    /// A commodity's sink is not reachable from its source in the network.
    NoPath {
        /// The unreachable commodity's source.
        source: u32,
        /// Its sink.
        sink: u32,
    },
    /// Normalization removed every commodity (all were trivial/duplicates).
    NoCommodities,
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NoNodes => write!(f, "instance has no nodes"),
            InstanceError::DuplicateName(n) => write!(f, "duplicate node name {n:?}"),
            InstanceError::NodeOutOfRange(u) => write!(f, "node index {u} out of range"),
            InstanceError::SelfLoop(u) => write!(f, "self-loop at node {u}"),
            InstanceError::DuplicateArc(a) => {
                write!(f, "duplicate arc ({}, {})", a.tail, a.head)
            }
            InstanceError::Disconnected(u) => {
                write!(f, "underlying graph is disconnected (node {u} unreachable)")
            }
            InstanceError::NoPath { source, sink } => {
                write!(f, "no directed path from {source} to {sink} for a commodity")
            }
            InstanceError::NoCommodities => {
                write!(f, "no commodities left after normalization")
            }
        }
    }
}

/// Rejections raised by feasibility checking of a candidate solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    /// A solution arc does not lie in the transitive closure of the network.
    ArcNotInClosure(Arc),
    /// A solution arc references a node index outside the instance.
    NodeOutOfRange(u32),
    /// Routing semantics (unique commodity paths) need a tree network.
    NotATree,
}

impl fmt::Display for FeasibilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityError::ArcNotInClosure(a) => write!(
                f,
                "solution arc ({}, {}) is not in the closure of the network",
                a.tail, a.head
            ),
            FeasibilityError::NodeOutOfRange(u) => write!(f, "node index {u} out of range"),
            FeasibilityError::NotATree => {
                write!(f, "feasibility checking requires a tree instance")
            }
        }
    }
}

/// Rejections raised by the solvers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The instance does not have the shape the solver requires.
    WrongShape {
        /// What the solver needed (e.g. "single-source tree").
        expected: &'static str,
        /// What classification found instead.
        found: String,
    },
    /// A degree target outside the valid range for the operation (zero, or
    /// too small for a requested contraction).
    BadTarget(u32),
    /// The instance is not normalized (trivial/duplicate commodities or
    /// sink-less leaves present).
    NotNormalized,
    /// A certificate handed to a lifting step does not hold for the
    /// instance it claims to bound.
    InvalidCertificate(String),
    /// A contraction would dissolve every commodity; the claw's own arcs
    /// already solve that instance and there is nothing left to recurse on.
    ContractionDissolved,
    /// A plugged junction solver failed on a sub-instance.
    Junction(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::WrongShape { expected, found } => {
                write!(f, "solver requires a {expected} instance, got {found}")
            }
            SolveError::BadTarget(t) => write!(f, "unusable degree target {t}"),
            SolveError::NotNormalized => write!(f, "instance is not normalized"),
            SolveError::InvalidCertificate(why) => {
                write!(f, "certificate does not hold: {why}")
            }
            SolveError::ContractionDissolved => write!(
                f,
                "contraction dissolves every commodity; the claw arcs solve this instance"
            ),
            SolveError::Junction(why) => write!(f, "junction solver failed: {why}"),
        }
    }
}

/// Rejections raised by the exact oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The instance exceeds the configured node or commodity caps, or the
    /// enumeration counter passed its budget mid-search.
    LimitsExceeded(String),
    /// A limit field was zero.
    BadLimits,
    /// The oracle only handles tree instances.
    NotATree,
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::LimitsExceeded(what) => write!(f, "oracle limits exceeded: {what}"),
            OracleError::BadLimits => write!(f, "oracle limits must all be positive"),
            OracleError::NotATree => write!(f, "oracle requires a tree instance"),
        }
    }
}

/// Rejections raised by the instance generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    /// Parameters cannot produce a valid instance (e.g. more sources than
    /// candidate nodes, or a node budget too small for the shape).
    InfeasibleParams(String),
    /// A structured input failed validation (empty set, zero budget, ...).
    InvalidInput(String),
    /// The requested family size exceeds the supported cap.
    TooLarge(String),
}

impl fmt::Display for GeneratorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorError::InfeasibleParams(s) => write!(f, "infeasible parameters: {s}"),
            GeneratorError::InvalidInput(s) => write!(f, "invalid input: {s}"),
            GeneratorError::TooLarge(s) => write!(f, "size cap exceeded: {s}"),
        }
    }
}
