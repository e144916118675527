// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Column surgery on channels: collapsing `M[l→k]`, reduction to a square
//! matrix with column maxima on the diagonal, averaging over Hamming distance
//! classes or automorphism orbits, and reduction to `r` nonzero columns.
//!
//! Every transform replaces columns by sums of columns, so ε-DP w.r.t. any
//! adjacency on the rows is kept.

use std::fmt;

use crate::channel::{Alphabet, ChannelMatrix};
use crate::error::{Error, HypothesisFailure, Result};
use crate::graph::{AdjacencyGraph, Automorphism};
use crate::query::DatabaseUniverse;

/// Relative slack for "entry is a column maximum".
const MAX_SLACK: f64 = 1e-12;

fn hypothesis(f: HypothesisFailure) -> Error {
    Error::HypothesisViolated(f)
}

/// `M[l→k]`: column `k` becomes `M_k + M_l`, column `l` becomes zero.
pub fn collapse_column(m: &ChannelMatrix, l: usize, k: usize) -> Result<ChannelMatrix> {
    let cols = m.n_cols();
    if l >= cols || k >= cols {
        return Err(Error::Index(format!(
            "column {l} or {k} with {cols} columns"
        )));
    }
    if l == k {
        return Err(Error::InvalidParameter(
            "cannot collapse a column into itself".into(),
        ));
    }
    let mut rows = m.rows().to_vec();
    collapse_in_place(&mut rows, l, k);
    Ok(ChannelMatrix::from_parts(
        m.input().clone(),
        m.output().clone(),
        rows,
    ))
}

fn collapse_in_place(rows: &mut [Vec<f64>], l: usize, k: usize) {
    for row in rows {
        row[k] += row[l];
        row[l] = 0.0;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEvent {
    Assign { row: usize, col: usize },
    Merge { from: usize, into: usize },
}

/// Audit log of the square reduction. Column indices refer to the input matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollapseTrace {
    /// `rho[i]` is the original column that ends up on row `i`'s diagonal.
    pub rho: Vec<usize>,
    pub events: Vec<TraceEvent>,
}

impl CollapseTrace {
    pub fn merges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.events.iter().filter_map(|e| match *e {
            TraceEvent::Merge { from, into } => Some((from, into)),
            TraceEvent::Assign { .. } => None,
        })
    }
}

impl fmt::Display for CollapseTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            match e {
                TraceEvent::Assign { row, col } => writeln!(f, "assign {row} -> {col}")?,
                TraceEvent::Merge { from, into } => writeln!(f, "merge {from} -> {into}")?,
            }
        }
        Ok(())
    }
}

/// Square reduction with zero columns dropped.
pub fn to_square_diagonal_max(m: &ChannelMatrix) -> Result<(ChannelMatrix, CollapseTrace)> {
    to_square_diagonal_max_with(m, true)
}

/// Columns are scanned left to right. Each nonzero column `j` goes to the
/// lowest row `i` holding its maximum: it becomes `ρ(i)` if row `i` has no
/// column yet, otherwise it is collapsed into `ρ(i)`. Rows left without a
/// column then take the remaining zero columns in index order.
///
/// The first `n` result columns are `ρ(0..n)`. With `drop_zero_columns` false
/// the leftover all-zero columns follow in index order.
pub fn to_square_diagonal_max_with(
    m: &ChannelMatrix,
    drop_zero_columns: bool,
) -> Result<(ChannelMatrix, CollapseTrace)> {
    let (n, cols) = (m.n_rows(), m.n_cols());
    if n > cols {
        return Err(Error::MoreRowsThanColumns { rows: n, cols });
    }
    let mut rows = m.rows().to_vec();
    let mut rho: Vec<Option<usize>> = vec![None; n];
    let mut events = Vec::new();
    for j in 0..cols {
        if m.is_zero_column(j) {
            continue;
        }
        let i = m.column_argmax(j);
        match rho[i] {
            None => {
                rho[i] = Some(j);
                events.push(TraceEvent::Assign { row: i, col: j });
            }
            Some(k) => {
                collapse_in_place(&mut rows, j, k);
                events.push(TraceEvent::Merge { from: j, into: k });
            }
        }
    }
    let used: Vec<bool> = (0..cols).map(|j| rho.contains(&Some(j))).collect();
    let mut free = (0..cols).filter(|&j| !used[j]);
    let rho: Vec<usize> = rho
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.unwrap_or_else(|| {
                let j = free
                    .next()
                    .expect("columns >= rows leaves a free column per row");
                events.push(TraceEvent::Assign { row: i, col: j });
                j
            })
        })
        .collect();
    let mut order = rho.clone();
    if !drop_zero_columns {
        order.extend((0..cols).filter(|j| !rho.contains(j)));
    }
    let out = ChannelMatrix::from_parts(m.input().clone(), m.output().clone(), rows);
    Ok((out.select_columns(&order), CollapseTrace { rho, events }))
}

/// Verifies `m[j][j]` is the maximum of column `j` for every `j`.
pub fn check_diagonal_max(m: &ChannelMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(hypothesis(HypothesisFailure::NotSquare {
            rows: m.n_rows(),
            cols: m.n_cols(),
        }));
    }
    for j in 0..m.n_cols() {
        let d = m.entry(j, j);
        if m.column_max(j) > d + MAX_SLACK * d.max(1e-300) {
            return Err(hypothesis(HypothesisFailure::DiagonalNotMaximal {
                column: j,
            }));
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Entry `(h,k)` becomes the mean of all entries at Hamming distance
/// `d(h,k)`: `S_d / (n·C(u,d)(v-1)^d)`.
///
/// Requires a square matrix over the universe with column maxima on the
/// diagonal and finite ε w.r.t. the Hamming graph.
pub fn hamming_symmetrize(m: &ChannelMatrix, universe: &DatabaseUniverse) -> Result<ChannelMatrix> {
    let n = universe.size();
    if m.n_rows() != n || m.n_cols() != n {
        return Err(hypothesis(HypothesisFailure::SizeMismatch {
            expected: n,
            found: m.n_rows().max(m.n_cols()),
        }));
    }
    check_diagonal_max(m)?;
    let g = AdjacencyGraph::hamming_over(universe).with_nodes(m.input().clone())?;
    if !crate::dp::min_epsilon(m, &g)?.is_finite() {
        return Err(hypothesis(HypothesisFailure::NotDifferentiallyPrivate));
    }
    let (u, v) = (universe.u(), universe.v());
    let digits: Vec<Vec<usize>> = (0..n).map(|x| universe.decode(x)).collect();
    let dist = |a: usize, b: usize| {
        digits[a]
            .iter()
            .zip(&digits[b])
            .filter(|(x, y)| x != y)
            .count()
    };
    let mut sums = vec![0.0; u + 1];
    for i in 0..n {
        for j in 0..n {
            sums[dist(i, j)] += m.entry(i, j);
        }
    }
    let class: Vec<f64> = (0..=u)
        .map(|d| sums[d] / (n as f64 * binomial(u, d) * ((v - 1) as f64).powi(d as i32)))
        .collect();
    let rows = (0..n)
        .map(|h| (0..n).map(|k| class[dist(h, k)]).collect())
        .collect();
    Ok(ChannelMatrix::from_parts(
        m.input().clone(),
        m.output().clone(),
        rows,
    ))
}

/// `M'_{h,k} = (1/n) Σ_i M_{σ^i(h), σ^i(k)}` for a single-orbit automorphism `σ`.
pub fn automorphism_symmetrize(m: &ChannelMatrix, a: &Automorphism<'_>) -> Result<ChannelMatrix> {
    let n = a.perm().len();
    if m.n_rows() != n || m.n_cols() != n {
        return Err(hypothesis(HypothesisFailure::SizeMismatch {
            expected: n,
            found: m.n_rows().max(m.n_cols()),
        }));
    }
    if !a.single_orbit() {
        return Err(hypothesis(HypothesisFailure::NotSingleOrbit));
    }
    check_diagonal_max(m)?;
    let powers = a.powers();
    let rows = (0..n)
        .map(|h| {
            (0..n)
                .map(|k| powers.iter().map(|p| m.entry(p[h], p[k])).sum::<f64>() / n as f64)
                .collect()
        })
        .collect();
    Ok(ChannelMatrix::from_parts(
        m.input().clone(),
        m.output().clone(),
        rows,
    ))
}

/// Merges columns until exactly `r` are nonzero: the `t`-th smallest-maximum
/// column goes into the `t`-th largest, ordering by `(max, index)`. When more
/// than half the columns must go, this repeats in rounds.
pub fn reduce_range(m: &ChannelMatrix, r: usize) -> Result<ChannelMatrix> {
    let nz = m.nonzero_columns();
    if r < 1 || r > nz {
        return Err(Error::InvalidParameter(format!(
            "r = {r} with {nz} nonzero columns"
        )));
    }
    let mut cur = m.clone();
    loop {
        let live: Vec<usize> = (0..cur.n_cols())
            .filter(|&j| !cur.is_zero_column(j))
            .collect();
        let nz = live.len();
        if nz <= r {
            return Ok(cur);
        }
        let k = (nz - r).min(nz / 2);
        let mut order = live;
        let maxima: Vec<f64> = (0..cur.n_cols()).map(|j| cur.column_max(j)).collect();
        order.sort_by(|&a, &b| maxima[a].total_cmp(&maxima[b]).then(a.cmp(&b)));
        let mut rows = cur.rows().to_vec();
        for t in 0..k {
            collapse_in_place(&mut rows, order[t], order[nz - 1 - t]);
        }
        cur = ChannelMatrix::from_parts(cur.input().clone(), cur.output().clone(), rows);
    }
}

/// Output alphabet of a square matrix relabeled to its inputs.
pub fn square_with_input_labels(m: &ChannelMatrix) -> Result<ChannelMatrix> {
    if !m.is_square() {
        return Err(hypothesis(HypothesisFailure::NotSquare {
            rows: m.n_rows(),
            cols: m.n_cols(),
        }));
    }
    let out: Alphabet = m.input().clone();
    Ok(ChannelMatrix::from_parts(
        m.input().clone(),
        out,
        m.rows().to_vec(),
    ))
}
