use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("subcharacteristic condition violated: lambda = {lambda} must exceed {bound}")]
    Subcharacteristic { lambda: f64, bound: f64 },

    #[error("entropy pair is only available for the linear flux")]
    NonlinearEntropy,

    #[error("grid mismatch: expected {expected} cells, got {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("limit state violates the algebraic closure by {violation:e} at cell {cell}")]
    ClosureViolation { cell: usize, violation: f64 },

    #[error("non-finite value in {field} at cell {cell} (t = {t})")]
    Unstable {
        field: &'static str,
        cell: usize,
        t: f64,
    },

    #[error("grid resolution guard failed: dx = {dx} exceeds eps = {eps}")]
    ResolutionGuard { dx: f64, eps: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
