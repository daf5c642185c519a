//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum HullError {
    #[error("need at least {needed} points for a full-dimensional hull, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("point dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input is not full-dimensional (flat hull)")]
    Degenerate,
    #[error("internal hull error: {0}")]
    Internal(&'static str),
}

#[derive(Error, Debug)]
pub enum GeometryError {
    #[error("dimension {n} outside the supported range 2..=6")]
    DimensionOutOfRange { n: usize },
    #[error("polytope is not simple: vertex {vertex} lies on {facet_count} facets, expected {dimension}")]
    NotSimple {
        vertex: usize,
        facet_count: usize,
        dimension: usize,
    },
    #[error("vertex {vertex} does not lie on the hyperplane of facet {facet}")]
    VertexOffPlane { vertex: usize, facet: usize },
    #[error("vertex {vertex} violates the halfspace of facet {facet}")]
    HalfspaceViolated { vertex: usize, facet: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("convex hull construction failed: {0}")]
    HullFailed(HullError),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

#[derive(Error, Debug)]
pub enum ClassifyError {
    #[error("facet normal lies in no normal cone, even with slack")]
    UnassignedNormal,
    #[error("negative remainder volume {0:.3e} beyond tolerance: simplices overlap")]
    NegativeRemainder(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Error, Debug)]
pub enum EvalError {
    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),
    #[error("regime violation: {0}")]
    WrongRegime(String),
    #[error("need at least {needed} grid points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("divergent catalog entry: {0}")]
    Divergent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Error, Debug)]
pub enum PlanError {
    #[error("invalid plan: {0}")]
    Invalid(String),
    #[error("unknown polytope {0:?}: expected cube-N, simplex-N, prism-N or a file path")]
    UnknownPolytope(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed json in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("hull failed in replication {replication} at N={n}: {source}")]
    ReplicationFailed {
        n: u64,
        replication: u64,
        source: HullError,
    },
}
