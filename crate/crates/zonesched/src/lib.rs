//! Scenario runner for the zonesched placement engine: JSON scenario files
//! in, CSV or text stage reports out, plus synthetic dependency matrices.

pub mod cli;
pub mod report;
pub mod scenario;
pub mod synth;
