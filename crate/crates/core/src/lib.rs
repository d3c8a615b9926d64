//! Simulator for offline payment-channel payments carried over mobile
//! wireless mesh networks.
//!
//! The pipeline runs mobility traces through [`scenario`] (ingest, resample,
//! distances), builds proximity graphs and the occurrence-thresholded mesh in
//! [`meshgen`], derives channel topologies in [`assign`], and replays seeded
//! payment workloads against funded channels in [`payment`]. [`experiment`]
//! drives parameter sweeps and aggregates the results.

pub mod assign;
pub mod cli;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod meshgen;
pub mod par;
pub mod payment;
pub mod scenario;

pub use graph::{Graph, GraphError, Vertex};
