use thiserror::Error;

use crate::lattice::Site;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("site {site} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        site: Site,
        expected: usize,
        found: usize,
    },

    #[error("{a} and {b} are not nearest neighbours")]
    NotAnEdge { a: Site, b: Site },

    #[error("site {0} is already part of the animal")]
    AlreadyPresent(Site),

    #[error("site {0} is not adjacent to the animal")]
    NotAdjacent(Site),

    #[error("{what} budget exceeded: needed {needed}, limit {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("argument out of domain: {0}")]
    Domain(String),

    /// The solver converged but the closed-form bracket does not hold.
    /// `below_regime` is set when the input is under the "large enough" guard,
    /// in which case the failure says nothing about solver correctness.
    #[error("bracket violated at s = {s}: {detail} (below regime guard: {below_regime})")]
    Bracket {
        s: f64,
        detail: String,
        below_regime: bool,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("observed outcome {0} has zero probability under the reference distribution")]
    UnexpectedOutcome(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
