//! Growth-model simulation: attachment functions, weighted destination
//! sampling and the step-by-step growth engine.

mod attachment;
mod fenwick;
mod growth;
mod state;

pub use attachment::AttachmentFunction;
pub use fenwick::FenwickTree;
pub use growth::{derive_seed, hat_p, simulate, SGConfig, Schedule, SimOutput};
pub use state::SimState;

pub(crate) use growth::grow_histogram;
