//! Dependency-aware container placement engine.
//!
//! The crate models a cloud of container zones behind a three-tier fat-tree
//! network and runs a three-stage placement pipeline over it:
//!
//! 1. capacity-aware round-robin deployment ([`scheduler`]),
//! 2. local-search reduction of cross-zone dependency edges ([`optimizer`]),
//! 3. rebalancing of independent applications ([`optimizer`]).
//!
//! Traffic is priced per fat-tree edge ([`topology`]) and every stage is
//! summarised into a [`metrics::MetricsReport`]. [`pipeline::run_pipeline`]
//! wires the stages together, including late arrival batches.
//!
//! The crate is `no_std` + `alloc`; all I/O, file formats and the CLI live in
//! the companion `zonesched` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod metrics;
pub mod model;
pub mod optimizer;
pub mod pipeline;
pub mod scheduler;
pub mod topology;

pub use metrics::MetricsReport;
pub use model::{
    ApplicationSpec, CostParams, DependencyGraph, Placement, Scenario, ValidationError, ZoneSpec,
};
pub use optimizer::{CutSchedule, MoveReason, MoveRecord};
pub use pipeline::{run_pipeline, PipelineError, RunReport};
pub use topology::{PathClass, PathProfile, Topology};
