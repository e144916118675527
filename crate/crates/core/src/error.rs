// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

use crate::channel::Violation;

pub type Result<T> = std::result::Result<T, Error>;

/// Why a structural precondition of a construction or transform failed.
#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisFailure {
    Disconnected,
    NoSingleOrbitAutomorphism,
    /// `|Border_d(node)|` was `size`, expected 0 or `expected`.
    BorderIrregular {
        node: usize,
        distance: usize,
        size: usize,
        expected: usize,
    },
    DiagonalNotMaximal {
        column: usize,
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    NotDifferentiallyPrivate,
    NotSingleOrbit,
    NotSupergraph,
    SizeMismatch {
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disconnected => write!(f, "graph is disconnected"),
            Self::NoSingleOrbitAutomorphism => {
                write!(f, "no single-orbit automorphism available")
            }
            Self::BorderIrregular {
                node,
                distance,
                size,
                expected,
            } => write!(
                f,
                "border irregular: |Border_{distance}({node})| = {size}, expected 0 or {expected}"
            ),
            Self::DiagonalNotMaximal { column } => {
                write!(
                    f,
                    "diagonal entry of column {column} is not the column maximum"
                )
            }
            Self::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            Self::NotDifferentiallyPrivate => {
                write!(
                    f,
                    "matrix is not differentially private for any finite epsilon"
                )
            }
            Self::NotSingleOrbit => write!(f, "automorphism does not have a single orbit"),
            Self::NotSupergraph => write!(f, "supplied graph does not contain the original edges"),
            Self::SizeMismatch { expected, found } => {
                write!(f, "expected {expected} nodes, found {found}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: expected [{expected}], found [{found}]")]
    AlphabetMismatch { expected: String, found: String },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid channel matrix: {}", format_violations(.0))]
    InvalidMatrix(Vec<Violation>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed graph spec: {0}")]
    GraphSpec(String),
    #[error("permutation is not an automorphism: edge ({0}, {1}) maps to a non-edge")]
    NotAutomorphism(usize, usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(HypothesisFailure),
    #[error("antipodal doubling needs e^(2 eps) >= 2, got eps = {eps}")]
    DoublingInapplicable { eps: f64 },
    #[error("matrix has more rows ({rows}) than columns ({cols})")]
    MoreRowsThanColumns { rows: usize, cols: usize },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("bisection failed: {0}")]
    BisectionFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
