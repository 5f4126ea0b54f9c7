//! Eden growth and first-passage percolation on Z^d.
//!
//! - `lattice`:   sites, edges, lattice animals with incremental perimeter bookkeeping.
//! - `eden`:      the Eden growth chain (perimeter-edge-weighted site selection).
//! - `fpp`:       exponential first-passage percolation, its growth timeline and
//!                the chi-square comparison with the exact Eden law.
//! - `histories`: exact enumeration of lattice animal histories, hook-length
//!                counts of tree orderings, exact Eden distributions.
//! - `bounds`:    perimeter-bound exponent, tail functions, auxiliary time
//!                solvers, log-log scaling fits.
//! - `cli`:       the `edenlab` experiment runner.
//!
//! All randomness is seeded; see [`rng`] for how per-run streams are derived.

pub mod bounds;
pub mod cli;
pub mod eden;
pub mod error;
pub mod fpp;
pub mod histories;
pub mod lattice;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use lattice::{Edge, LatticeAnimal, PerimeterMetric, Site};
