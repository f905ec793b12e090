//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KmError {
    #[error("not a generalized Cartan matrix at entry ({row},{col}): {reason}")]
    NotGcm {
        row: usize,
        col: usize,
        reason: String,
    },
    #[error("GCM admits no symmetrizer")]
    NotSymmetrizable,
    #[error("weight is not dominant (pairing with coroot {index} is {value})")]
    NotDominant { index: usize, value: i64 },
    #[error("depth window {have} too small, need at least {need}")]
    DepthTooSmall { need: usize, have: usize },
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),
    #[error("no Bruhat upper bound within length bound {0}")]
    EmptyWithinBound(usize),
    #[error("integral word lattice unstable at p={p}, lambda={lambda:?}, depth={depth:?}: {detail}")]
    UnstableLattice {
        p: u64,
        lambda: Vec<i64>,
        depth: Vec<i64>,
        detail: String,
    },
    #[error("unknown preset or label: {0}")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, KmError>;
