use std::path::PathBuf;

use thiserror::Error;

use crate::configs::CurveConfig;
use crate::lattice::LatticeVector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("cannot parse lattice vector from {0:?}")]
    Vector(String),
    #[error("cannot parse rational from {0:?}: {1}")]
    Rational(String, String),
    #[error("cannot parse homology class from {0:?}: expected \"d:c1,...,cn\"")]
    Class(String),
    #[error("cannot parse curve configuration: {0}")]
    Config(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("outgoing vector {0} is outside the cone a > 0, b <= a")]
    OutOfCone(LatticeVector),
    #[error("{0} is not an admissible incoming vector (need y1 <= -1 and y2 > y1)")]
    InvalidIncoming(LatticeVector),
    #[error("component {0} is empty")]
    EmptyComponent(usize),
    #[error("incoming edge refers to component {index}, but there are only {count}")]
    IncomingComponent { index: usize, count: usize },
    #[error("expected a configuration without an incoming edge")]
    UnexpectedIncoming,
    #[error("expected a configuration with an incoming edge")]
    MissingIncoming,
    #[error("expected a connected configuration, got {0} components")]
    NotConnected(usize),
    #[error("sweep order is invalid at position {0}")]
    BadOrder(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("non-triangular dependency: solving {target} requires unsolved {dependency}")]
    NonTriangular {
        target: CurveConfig,
        dependency: CurveConfig,
    },
    #[error("dependency cycle detected at {0}")]
    Cycle(CurveConfig),
    #[error("no admissible pivot in {0} although its genus is non-negative")]
    NoPivot(CurveConfig),
    #[error("{pivot} cannot serve as pivot of {config}")]
    BadPivot { config: CurveConfig, pivot: LatticeVector },
    #[error("invariant of {0} is not available in the table")]
    Missing(CurveConfig),
    #[error("enumeration bound must be finite and non-negative, got max_degree = {0}")]
    Bounds(i64),
    #[error("homology class has {found} exceptional coefficients but {expected} points were blown up")]
    ClassLength { expected: usize, found: usize },
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: corrupt record at line {line}: {reason}")]
    Corrupt { path: PathBuf, line: usize, reason: String },
    #[error("{path}: version mismatch (file has {found}, expected {expected})")]
    Version { path: PathBuf, found: u32, expected: u32 },
    #[error("table entry {0} is still in progress")]
    Unsolved(CurveConfig),
}
