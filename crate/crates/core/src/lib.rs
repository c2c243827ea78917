//! Budgeted exploration of partially observed networks.
//!
//! Given a hidden ground-truth graph and an incomplete initial sample, the
//! simulator repeatedly picks an observed node to probe so as to discover as
//! many nodes as possible within a fixed budget. Node selection is pluggable:
//! a nonparametric kNN-UCB bandit, its greedy and epsilon-greedy variants, a
//! linear UCB bandit, maximum observed degree, and uniform random probing.
//!
//! The crate also ships the synthetic graph generators (preferential
//! attachment and a community benchmark with tunable mixing), the two initial
//! samplers (random-neighbor chaining and BFS), and an experiment harness
//! with CSV/SVG reporting. The `netprobe` binary exposes all of it as CLI
//! subcommands; see the README for the config file format.

pub mod error;
pub mod features;
pub mod generate;
pub mod graph;
pub mod knn;
pub mod state;

pub use error::{Error, Result};
