//! Global minimum vertex-cut solver for vertex-weighted undirected graphs.
//!
//! The crate computes a minimum-weight vertex set whose removal disconnects a
//! graph. It combines exact flow-based primitives with randomized sampling
//! drivers: isolating-cut sampling over weight classes, high-degree probing,
//! and a terminal-based refinement pipeline that maintains a fractional-grain
//! flow over a split graph and repeatedly sparsifies its residual network.
//!
//! Entry points:
//! * [`driver::solve`] — full solver with report and optional verification.
//! * [`cut::brute_force_global_min_cut`] — exhaustive oracle for small `n`.
//! * [`graph::WeightedGraph`] — the problem instance, parsed from a
//!   DIMACS-style `p vcut` file.

pub mod cut;
pub mod driver;
pub mod error;
pub mod estimators;
pub mod flow;
pub mod graph;
pub mod isolating;
pub mod rng;
pub mod sampling;
pub mod subroutine;

pub use error::Error;
pub use graph::{ParamBlock, SplitGraph, WeightedGraph};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
