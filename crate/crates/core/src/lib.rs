// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Differentially private query mechanisms viewed as information-theoretic
//! channels.
//!
//! A mechanism is a [`ChannelMatrix`] from databases (or query answers) to
//! reported outputs. The crate measures min-entropy leakage and binary-gain
//! utility, checks ε-differential privacy against an [`AdjacencyGraph`],
//! evaluates the leakage and utility bounds that ε implies, and builds the
//! mechanisms that attain them.
//!
//! ```
//! use dpleak::{channel, dp, mechanism};
//!
//! let m = mechanism::build_tight_leakage(1, 3, 2f64.ln()).unwrap();
//! let b = dp::bound_whole_database(1, 3, 2f64.ln()).unwrap();
//! assert!((channel::capacity(&m) - b.bound_bits).abs() < 1e-12);
//! ```
//!
//! ε is on the natural-log scale everywhere; entropies and bounds are in bits.

pub mod channel;
pub mod dp;
pub mod error;
pub mod graph;
pub mod io;
pub mod mechanism;
pub mod oracle;
pub mod par;
pub mod query;
pub mod report;
pub mod transforms;

pub use channel::{Alphabet, ChannelMatrix, LeakageFigures, PriorDistribution};
pub use dp::{BoundKind, BoundReport, DpVerdict};
pub use error::{Error, HypothesisFailure, Result};
pub use graph::{AdjacencyGraph, Automorphism, GraphKind};
pub use mechanism::{OptimalMechanismParams, OptimalOptions};
pub use par::Execution;
pub use query::{DatabaseUniverse, QueryModel, UtilityFigures};
pub use report::{AnalysisReport, Report};
pub use transforms::CollapseTrace;
