//! Just-in-time defect prediction experiments at desk scale.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! - [`miner`] turns a git clone into labeled, release-assigned [`CommitRecord`]s.
//! - [`preprocess`] engineers features, selects a subset with CFS and balances
//!   classes with SMOTE.
//! - [`sampling`] materializes the training window for each policy.
//! - [`learners`] trains the six classifiers.
//! - [`metrics`] scores predictions on a release.
//! - [`stats`] ranks treatments with Scott-Knott and counts wins.
//! - [`rig`] orchestrates everything and writes results, tables and plots.
//!
//! Work that fans out over cells, trees or bootstrap iterations goes through
//! [`exec::Execution`], which uses rayon when the `parallel` feature is on and
//! falls back to a plain loop otherwise. Results are identical either way.

pub mod error;
pub mod exec;
pub mod learners;
pub mod metrics;
pub mod miner;
pub mod preprocess;
pub mod rig;
pub mod sampling;
pub mod seed;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use miner::{CommitRecord, Label, ReleaseInfo};
pub use preprocess::Dataset;
