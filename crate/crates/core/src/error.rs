use thiserror::Error;

/// Errors raised while constructing or validating graphs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0}-{1} joins two vertices on the same side")]
    NotBipartite(usize, usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge endpoint {0} does not reference a declared vertex")]
    DanglingEndpoint(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0} not found")]
    EdgeNotFound(usize),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Errors raised by matching enumeration and flip-graph search.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("matching does not belong to this graph (hash mismatch)")]
    MatchingMismatch,
    #[error("edge set is not a perfect matching: vertex {0} covered {1} times")]
    NotPerfect(usize, usize),
    #[error("cap of {cap} exceeded; found {found} so far")]
    CapExceeded { cap: usize, found: usize },
    #[error("search budget of {0} explored states exceeded")]
    BudgetExceeded(usize),
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
}

/// A single violation inside a flip sequence, reported with its index.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FlipViolation {
    #[error("step {0}: edge set is not a single cycle")]
    NotACycle(usize),
    #[error("step {0}: cycle is not alternating w.r.t. the running matching")]
    NotAlternating(usize),
    #[error("step {0}: flipping does not yield a perfect matching")]
    NotPerfectAfterFlip(usize),
}

/// Errors raised by gadget constructors and classifiers.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GadgetError {
    #[error("scale parameter invalid: {0}")]
    ScaleInvalid(String),
    #[error("logical edge {0:?} not found")]
    LogicalEdgeNotFound((usize, usize)),
    #[error("matching belongs to a different graph")]
    WrongGraph,
    #[error("edge set is not a single cycle")]
    NotACycle,
    #[error("state is not semi-default")]
    StateNotSemiDefault,
    #[error("no well-behaved sequence within {0} flips")]
    Unreached(usize),
}

/// Errors raised by the reduction pipelines.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("instance invalid: {0}")]
    InstanceInvalid(String),
    #[error("profile invalid: {0}")]
    ProfileInvalid(String),
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("pattern invalid: {0}")]
    PatternInvalid(String),
    #[error("no Hamiltonian cycle respecting pattern {0:?}")]
    HamProviderFailed(Vec<usize>),
    #[error("cycle is not regular")]
    NotRegular,
    #[error("clause {0} has more than 3 literals")]
    ClauseTooLarge(usize),
    #[error("graph not Hamiltonian")]
    NotHamiltonian,
    #[error("graph too large for exhaustive search: {0}")]
    InfeasibleScale(String),
}

/// Errors raised by the brute-force oracles.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("pattern enumeration supports at most {0} designated pairs")]
    TooManyPairs(usize),
    #[error("assignment enumeration supports at most {0} variables")]
    TooManyVariables(usize),
    #[error("walk is not a closed walk: {0}")]
    InvalidWalk(String),
}
