//! Attachment-function estimators.

mod baseline;
mod likelihood;
mod oneshot;
pub mod report;
mod types;
mod window;

pub use baseline::estimate_baseline;
pub use likelihood::{estimate_mle_full, log_likelihood, MleOptions, MleResult};
pub use oneshot::{estimate_existence_round, estimate_oneshot, estimate_oneshot_binned};
pub use types::{AttachmentEstimate, BinningScheme, EstimateRecord, OneshotConfig};
pub use window::estimate_pt_window;

#[cfg(test)]
pub(crate) use oneshot::estimate_from_existence;
