//! Network snapshots, growth traces and edge-list ingestion.

mod histogram;
mod ingest;
mod snapshot;
mod trace;

pub use histogram::DegreeHistogram;
pub use ingest::{
    read_edge_list, read_event_file, read_timed_edge_list, read_trace_file, write_edge_list,
    write_event_file, write_timed_edge_list, write_trace_file,
};
pub use snapshot::Snapshot;
pub use trace::{EventSequence, EventToken, GrowthEvent, GrowthTrace};
