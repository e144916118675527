// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Channel matrices, input distributions and the min-entropy family:
//! H∞(X), H∞(X|Z), leakage I∞ and capacity C∞, all in bits.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on each row sum of a channel matrix and on the total
/// mass of a distribution.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

/// Ordered set of distinct element names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must not be empty".into()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {l:?}")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// Labels `"0"`, `"1"`, ..., `"n-1"`.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sub-alphabet with the given indices, in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.labels[i].clone()))
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.labels.join(","))
    }
}

/// Probability distribution over an alphabet (the attacker's side information
/// when placed on the channel input).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorDistribution {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl PriorDistribution {
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for {} labels",
                probs.len(),
                alphabet.len()
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} = {p} is not a probability"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(PriorDistribution { alphabet, probs })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.len();
        PriorDistribution {
            alphabet,
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn max_prob(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }
}

/// A single problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NegativeEntry {
        row: usize,
        col: usize,
        value: f64,
    },
    NonFinite {
        row: usize,
        col: usize,
    },
    RowSum {
        row: usize,
        deviation: f64,
    },
    RaggedRow {
        row: usize,
        len: usize,
        expected: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NegativeEntry { row, col, value } => {
                write!(f, "row {row} col {col}: negative entry {value}")
            }
            Violation::NonFinite { row, col } => write!(f, "row {row} col {col}: not finite"),
            Violation::RowSum { row, deviation } => {
                write!(f, "row {row}: sum deviates from 1 by {deviation:e}")
            }
            Violation::RaggedRow { row, len, expected } => {
                write!(f, "row {row}: {len} entries, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks nonnegativity (strict, no tolerance) and row sums within `tol`.
pub fn validate(rows: &[Vec<f64>], tol: f64) -> Validation {
    let expected = rows.first().map_or(0, Vec::len);
    let mut violations = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != expected {
            violations.push(Violation::RaggedRow {
                row: i,
                len: row.len(),
                expected,
            });
            continue;
        }
        let mut bad = false;
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() {
                violations.push(Violation::NonFinite { row: i, col: j });
                bad = true;
            } else if x < 0.0 {
                violations.push(Violation::NegativeEntry {
                    row: i,
                    col: j,
                    value: x,
                });
            }
        }
        if !bad {
            let deviation = row.iter().sum::<f64>() - 1.0;
            if deviation.abs() > tol {
                violations.push(Violation::RowSum { row: i, deviation });
            }
        }
    }
    Validation { violations }
}

/// Row-stochastic matrix, `entry(i, j) = p(output_j | input_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelMatrix {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<Vec<f64>>,
}

impl ChannelMatrix {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != input.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rows for {} input labels",
                rows.len(),
                input.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != output.len()) {
            return Err(Error::InvalidParameter(format!(
                "row of length {} for {} output labels",
                r.len(),
                output.len()
            )));
        }
        let v = validate(&rows, STOCHASTIC_TOLERANCE);
        if !v.passed() {
            return Err(Error::InvalidMatrix(v.violations));
        }
        Ok(ChannelMatrix {
            input,
            output,
            rows,
        })
    }

    /// Matrix with indexed labels on both sides.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        Self::new(Alphabet::indexed(n)?, Alphabet::indexed(m)?, rows)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    /// Constructor for transforms whose outputs are stochastic by construction.
    pub(crate) fn from_parts(input: Alphabet, output: Alphabet, rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(validate(&rows, 1e-7).passed());
        ChannelMatrix {
            input,
            output,
            rows,
        }
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.output.len()
    }

    pub fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    pub fn column_max(&self, j: usize) -> f64 {
        self.column(j).fold(0.0, f64::max)
    }

    /// Lowest row index attaining the column maximum.
    pub fn column_argmax(&self, j: usize) -> usize {
        let mut best = 0;
        for i in 1..self.n_rows() {
            if self.rows[i][j] > self.rows[best][j] {
                best = i;
            }
        }
        best
    }

    pub fn column_max_sum(&self) -> f64 {
        (0..self.n_cols()).map(|j| self.column_max(j)).sum()
    }

    pub fn is_zero_column(&self, j: usize) -> bool {
        self.column(j).all(|x| x == 0.0)
    }

    pub fn nonzero_columns(&self) -> usize {
        (0..self.n_cols())
            .filter(|&j| !self.is_zero_column(j))
            .count()
    }

    pub fn validate(&self, tol: f64) -> Validation {
        validate(&self.rows, tol)
    }

    /// Appends zero columns until there are `cols` outputs.
    pub fn pad_zero_columns(&self, cols: usize) -> Result<Self> {
        if cols <= self.n_cols() {
            return Ok(self.clone());
        }
        let mut labels = self.output.labels().to_vec();
        let mut k = 0;
        while labels.len() < cols {
            let l = format!("pad{k}");
            k += 1;
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.resize(cols, 0.0);
                r
            })
            .collect();
        Ok(Self::from_parts(
            self.input.clone(),
            Alphabet::new(labels)?,
            rows,
        ))
    }

    /// Removes every all-zero column.
    pub fn drop_zero_columns(&self) -> Self {
        let keep: Vec<usize> = (0..self.n_cols())
            .filter(|&j| !self.is_zero_column(j))
            .collect();
        self.select_columns(&keep)
    }

    /// Columns in the given order; `order` must hold distinct valid indices.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        let output = self
            .output
            .select(order)
            .expect("selected columns are distinct");
        let rows = self
            .rows
            .iter()
            .map(|r| order.iter().map(|&j| r[j]).collect())
            .collect();
        Self::from_parts(self.input.clone(), output, rows)
    }

    /// Rows in the given order (a sub-channel).
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let input = self.input.select(idx)?;
        let rows = idx.iter().map(|&i| self.rows[i].clone()).collect();
        Ok(Self::from_parts(input, self.output.clone(), rows))
    }

    pub fn with_input(mut self, input: Alphabet) -> Result<Self> {
        if input.len() != self.n_rows() {
            return Err(Error::InvalidParameter("relabel: wrong input size".into()));
        }
        self.input = input;
        Ok(self)
    }
}

/// Min-entropy, leakage and capacity of one (prior, channel) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeakageFigures {
    pub h_inf_prior: f64,
    pub h_inf_posterior: f64,
    pub leakage: f64,
    pub capacity: f64,
}

/// `-log2 max_x p(x)`.
pub fn min_entropy(p: &PriorDistribution) -> f64 {
    -p.max_prob().log2()
}

/// Posterior one-try success probability `Σ_z max_x p(x) m[x][z]`.
pub fn posterior_vulnerability(p: &PriorDistribution, m: &ChannelMatrix) -> Result<f64> {
    p.alphabet().ensure_same(m.input())?;
    let probs = p.probs();
    Ok((0..m.n_cols())
        .map(|j| {
            m.rows()
                .iter()
                .zip(probs)
                .map(|(r, &px)| px * r[j])
                .fold(0.0, f64::max)
        })
        .sum())
}

/// `H∞(X|Z) = -log2 Σ_z max_x p(x)·m[x][z]`.
pub fn conditional_min_entropy(p: &PriorDistribution, m: &ChannelMatrix) -> Result<f64> {
    Ok(-posterior_vulnerability(p, m)?.log2())
}

/// `log2 Σ_z max_x m[x][z]`, the maximum leakage over all priors.
pub fn capacity(m: &ChannelMatrix) -> f64 {
    m.column_max_sum().log2()
}

pub fn min_entropy_leakage(p: &PriorDistribution, m: &ChannelMatrix) -> Result<LeakageFigures> {
    let h_inf_prior = min_entropy(p);
    let h_inf_posterior = conditional_min_entropy(p, m)?;
    Ok(LeakageFigures {
        h_inf_prior,
        h_inf_posterior,
        leakage: h_inf_prior - h_inf_posterior,
        capacity: capacity(m),
    })
}

/// Joint table `p(x)·m[x][z]`.
pub fn joint(p: &PriorDistribution, m: &ChannelMatrix) -> Result<Vec<Vec<f64>>> {
    p.alphabet().ensure_same(m.input())?;
    Ok(m.rows()
        .iter()
        .zip(p.probs())
        .map(|(r, &px)| r.iter().map(|&x| px * x).collect())
        .collect())
}
