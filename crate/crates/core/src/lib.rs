//! Simulation of growing preferential-attachment networks and nonparametric
//! estimation of the attachment function from a single network snapshot.
//!
//! The crate is organized around the growth model in [`sim`]: at each
//! time-step a network either gains a new isolated node or a new directed
//! edge whose destination is drawn with probability proportional to the
//! attachment value `A_k` of its current in-degree `k`. The estimation side
//! lives in [`estimate`]:
//!
//! - a baseline tail-ratio estimator that works from one snapshot but
//!   severely underestimates `A_k` at large `k`,
//! - the bias-corrected one-shot estimator (unbinned and binned) that fixes
//!   this by estimating per-degree existence probabilities through rounds of
//!   model simulations,
//! - a full-timeline maximum-likelihood estimator for time-resolved data,
//! - a sliding-window estimator for the node-arrival rate `p(t)`.
//!
//! [`fit`] provides parametric fits (power-law exponent, logarithmic
//! damping, degree-distribution tail exponent) and the closed-form
//! asymptotic degree distribution used as a validation oracle.
//! [`net`] holds the snapshot/trace data model and edge-list ingestion,
//! and [`diagnostics`] bundles simulation-based consistency checks.

pub mod diagnostics;
pub mod error;
pub mod estimate;
pub mod fit;
pub mod net;
pub mod sim;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
