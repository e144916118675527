// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! ε-differential privacy of channels, the whole-database, range-restricted
//! and per-individual leakage bounds, and individual channels `K_{D⁻}`.
//!
//! ε is always on the natural-log scale; bounds are in bits.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use serde::Serialize;

use crate::channel::{self, ChannelMatrix, PriorDistribution};
use crate::error::{Error, Result};
use crate::graph::AdjacencyGraph;
use crate::par::{self, Execution};
use crate::query::DatabaseUniverse;

/// Slack used when comparing a queried ε with a measured one.
pub const EPS_TOLERANCE: f64 = 1e-9;

/// Rows `row ∼ other` and the column where `m[row][col] / m[other][col]` peaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub row: usize,
    pub other: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DpVerdict {
    pub eps: f64,
    pub min_epsilon: f64,
    pub witness: Option<Witness>,
    pub satisfies: bool,
}

/// `ln(a/b)` with `0/0` ignored and `c/0` infinite.
fn log_ratio(a: f64, b: f64) -> Option<f64> {
    match (a > 0.0, b > 0.0) {
        (false, _) => None,
        (true, false) => Some(f64::INFINITY),
        (true, true) => Some((a / b).ln()),
    }
}

/// Largest log-ratio between two rows, with its column (lowest on ties).
fn row_pair_max(a: &[f64], b: &[f64]) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (z, (&x, &y)) in a.iter().zip(b).enumerate() {
        if let Some(r) = log_ratio(x, y) {
            if best.is_none_or(|(v, _)| r > v) {
                best = Some((r, z));
            }
        }
    }
    best
}

fn max_over_pairs(
    exec: Execution,
    m: &ChannelMatrix,
    pairs: &[(usize, usize)],
) -> (f64, Option<Witness>) {
    let best = par::max_by_range(
        exec,
        pairs.len(),
        |i| {
            let (a, b) = pairs[i];
            row_pair_max(m.row(a), m.row(b))
        },
        |x, y| match (x, y) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => x.0.total_cmp(&y.0),
        },
    );
    match best {
        Some((i, Some((r, column)))) if r > 0.0 => {
            let (row, other) = pairs[i];
            (r, Some(Witness { row, other, column }))
        }
        _ => (0.0, None),
    }
}

fn directed_edges(g: &AdjacencyGraph) -> Vec<(usize, usize)> {
    g.edges()
        .into_iter()
        .flat_map(|(a, b)| [(a, b), (b, a)])
        .collect()
}

/// Smallest ε for which `m` is ε-DP w.r.t. `g`, with a witness when positive.
pub fn min_epsilon_with(
    exec: Execution,
    m: &ChannelMatrix,
    g: &AdjacencyGraph,
) -> Result<(f64, Option<Witness>)> {
    g.nodes().ensure_same(m.input())?;
    Ok(max_over_pairs(exec, m, &directed_edges(g)))
}

pub fn min_epsilon(m: &ChannelMatrix, g: &AdjacencyGraph) -> Result<f64> {
    Ok(min_epsilon_with(Execution::default(), m, g)?.0)
}

pub fn verify_dp_with(
    exec: Execution,
    m: &ChannelMatrix,
    g: &AdjacencyGraph,
    eps: f64,
) -> Result<DpVerdict> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps must be >= 0, got {eps}"
        )));
    }
    let (min_epsilon, witness) = min_epsilon_with(exec, m, g)?;
    Ok(DpVerdict {
        eps,
        min_epsilon,
        witness,
        satisfies: eps >= min_epsilon - EPS_TOLERANCE,
    })
}

pub fn verify_dp(m: &ChannelMatrix, g: &AdjacencyGraph, eps: f64) -> Result<DpVerdict> {
    verify_dp_with(Execution::default(), m, g, eps)
}

/// Largest log-ratio over every ordered pair of distinct rows.
pub fn all_pairs_epsilon(m: &ChannelMatrix) -> f64 {
    let n = m.n_rows();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    max_over_pairs(Execution::default(), m, &pairs).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    WholeDatabase,
    RangeRestricted,
    Individual,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundKind::WholeDatabase => "whole_database",
            BoundKind::RangeRestricted => "range_restricted",
            BoundKind::Individual => "individual",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_bits: f64,
    pub kind: BoundKind,
    pub eps: f64,
    pub u: Option<usize>,
    pub v: Option<usize>,
    pub r: Option<usize>,
    /// `⌊log_v r⌋` for the range-restricted bound.
    pub ell: Option<usize>,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eps must be finite and >= 0, got {eps}"
        )))
    }
}

fn check_uv(u: usize, v: usize) -> Result<()> {
    if u < 1 {
        return Err(Error::InvalidParameter("u must be at least 1".into()));
    }
    if v < 2 {
        return Err(Error::InvalidParameter("v must be at least 2".into()));
    }
    Ok(())
}

/// `ln(1 + (v-1)e^{-ε})`, the per-individual normalizer.
fn ln_row_mass(v: usize, eps: f64) -> f64 {
    ((v - 1) as f64 * (-eps).exp()).ln_1p()
}

/// `B(u,v,ε) = u·log2(v·e^ε / (v-1+e^ε))`.
pub fn bound_whole_database(u: usize, v: usize, eps: f64) -> Result<BoundReport> {
    check_uv(u, v)?;
    check_eps(eps)?;
    let bits = if eps == 0.0 {
        0.0
    } else {
        (u as f64 * ((v as f64).ln() - ln_row_mass(v, eps)) / LN_2).max(0.0)
    };
    Ok(BoundReport {
        bound_bits: bits,
        kind: BoundKind::WholeDatabase,
        eps,
        u: Some(u),
        v: Some(v),
        r: None,
        ell: None,
    })
}

/// Largest `ℓ` with `v^ℓ ≤ r`, exact in integers.
fn floor_log(v: usize, r: usize) -> usize {
    let mut ell = 0;
    let mut p: usize = 1;
    while let Some(next) = p.checked_mul(v).filter(|&n| n <= r) {
        p = next;
        ell += 1;
    }
    ell
}

/// Bound for mechanisms with at most `r` distinct outputs:
/// `log2(r·e^{εu} / ((v-1+e^ε)^ℓ - e^{εℓ} + e^{εu}))`, `ℓ = ⌊log_v r⌋`.
/// An `r` beyond `v^u` is clamped to `v^u`, where the value equals `B(u,v,ε)`.
pub fn bound_range_restricted(u: usize, v: usize, eps: f64, r: usize) -> Result<BoundReport> {
    check_uv(u, v)?;
    check_eps(eps)?;
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let full = u32::try_from(u).ok().and_then(|u| v.checked_pow(u));
    let r = full.map_or(r, |f| r.min(f));
    let ell = floor_log(v, r).min(u);
    // divide through by e^{εu} to stay finite for large u·ε
    let tail = (-eps * (u - ell) as f64).exp() * (ell as f64 * ln_row_mass(v, eps)).exp_m1();
    let bits = ((r as f64).ln() - tail.ln_1p()) / LN_2;
    Ok(BoundReport {
        bound_bits: bits.max(0.0),
        kind: BoundKind::RangeRestricted,
        eps,
        u: Some(u),
        v: Some(v),
        r: Some(r),
        ell: Some(ell),
    })
}

/// `log2 e^ε`.
pub fn bound_individual(eps: f64) -> Result<BoundReport> {
    check_eps(eps)?;
    Ok(BoundReport {
        bound_bits: eps / LN_2,
        kind: BoundKind::Individual,
        eps,
        u: None,
        v: None,
        r: None,
        ell: None,
    })
}

/// Rows of `m` whose databases agree with `d_minus` off `target`, in
/// target-value order. `d_minus` lists the other individuals by position.
pub fn individual_channel(
    m: &ChannelMatrix,
    universe: &DatabaseUniverse,
    target: usize,
    d_minus: &[usize],
) -> Result<ChannelMatrix> {
    if m.n_rows() != universe.size() {
        return Err(Error::InvalidParameter(format!(
            "matrix has {} rows, universe has {} databases",
            m.n_rows(),
            universe.size()
        )));
    }
    m.select_rows(&universe.individual_rows(target, d_minus)?)
}

/// Every `(target, d_minus)` pair of a universe, targets outermost.
pub fn individual_contexts(universe: &DatabaseUniverse) -> Vec<(usize, Vec<usize>)> {
    let (u, v) = (universe.u(), universe.v());
    let others = v.pow((u - 1) as u32);
    let mut out = Vec::with_capacity(u * others);
    for target in 0..u {
        for k in 0..others {
            let mut rest = vec![0; u - 1];
            let mut k = k;
            for d in rest.iter_mut() {
                *d = k % v;
                k /= v;
            }
            out.push((target, rest));
        }
    }
    out
}

/// Outcome of the all-pairs ε-ratio leakage check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RatioBoundVerdict {
    /// Some pair of rows is further apart than `e^ε`.
    HypothesisNotMet {
        all_pairs_epsilon: f64,
    },
    Holds {
        leakage: f64,
        bound: f64,
    },
    Violated {
        leakage: f64,
        bound: f64,
    },
}

/// If all rows (not only adjacent ones) are within ratio `e^ε`, leakage under
/// `p` is at most `ε·log2 e`.
pub fn check_epsilon_ratio_bound(
    m: &ChannelMatrix,
    p: &PriorDistribution,
    eps: f64,
) -> Result<RatioBoundVerdict> {
    check_eps(eps)?;
    let leakage = channel::min_entropy_leakage(p, m)?.leakage;
    let all_pairs_epsilon = all_pairs_epsilon(m);
    if eps < all_pairs_epsilon - EPS_TOLERANCE {
        return Ok(RatioBoundVerdict::HypothesisNotMet { all_pairs_epsilon });
    }
    let bound = eps / LN_2;
    Ok(if leakage <= bound + EPS_TOLERANCE {
        RatioBoundVerdict::Holds { leakage, bound }
    } else {
        RatioBoundVerdict::Violated { leakage, bound }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub v: usize,
    pub eps: f64,
    pub bound_bits: f64,
}

/// `B(u,v,ε)` on an ascending grid, one block per `v`.
pub fn curve_bound(u: usize, vs: &[usize], grid: &[f64]) -> Result<Vec<CurvePoint>> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "eps grid must be strictly ascending".into(),
        ));
    }
    let mut out = Vec::with_capacity(vs.len() * grid.len());
    for &v in vs {
        for &eps in grid {
            out.push(CurvePoint {
                v,
                eps,
                bound_bits: bound_whole_database(u, v, eps)?.bound_bits,
            });
        }
    }
    Ok(out)
}

/// `count` evenly spaced points from `0` to `max` inclusive.
pub fn linear_grid(max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count)
            .map(|i| max * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
