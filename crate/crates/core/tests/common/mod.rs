// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference computations shared by the integration tests. These evaluate the
//! textbook expressions directly and never call the library's numeric code.

#![allow(dead_code)]

use std::path::PathBuf;

use dpleak::ChannelMatrix;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

/// `log2 Σ_z max_x m[x][z]`.
pub fn capacity_direct(m: &ChannelMatrix) -> f64 {
    let rows = m.rows();
    (0..m.n_cols())
        .map(|z| rows.iter().map(|r| r[z]).fold(0.0, f64::max))
        .sum::<f64>()
        .log2()
}

/// `Σ_z max_y p(y)h[y][z]`.
pub fn utility_direct(p: &[f64], h: &ChannelMatrix) -> f64 {
    (0..h.n_cols())
        .map(|z| {
            (0..h.n_rows())
                .map(|y| p[y] * h.entry(y, z))
                .fold(0.0, f64::max)
        })
        .sum()
}

/// `u·log2(v·e^ε / (v−1+e^ε))`.
pub fn whole_database_direct(u: usize, v: usize, eps: f64) -> f64 {
    let e = eps.exp();
    u as f64 * (v as f64 * e / (v as f64 - 1.0 + e)).log2()
}

/// `(e^ε)^n(1−e^ε) / ((e^ε)^n(1−e^ε) + c(1−(e^ε)^n))`.
pub fn alpha_direct(n: usize, c: usize, eps: f64) -> f64 {
    let e = eps.exp();
    let en = e.powi(n as i32);
    en * (1.0 - e) / (en * (1.0 - e) + c as f64 * (1.0 - en))
}

/// Largest `ln(a/b)` over ordered adjacent pairs; `c/0` is infinite.
pub fn min_epsilon_direct(m: &ChannelMatrix, edges: &[(usize, usize)]) -> f64 {
    let mut best = 0.0f64;
    for &(a, b) in edges {
        for (x, y) in [(a, b), (b, a)] {
            for z in 0..m.n_cols() {
                let (p, q) = (m.entry(x, z), m.entry(y, z));
                if p > 0.0 {
                    best = best.max(if q > 0.0 { (p / q).ln() } else { f64::INFINITY });
                }
            }
        }
    }
    best
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| {
            assert_eq!(x.len(), y.len());
            x.iter().zip(y).map(|(p, q)| (p - q).abs())
        })
        .fold(0.0, f64::max)
}

/// Rows given as `numerator/denominator` pairs.
pub fn fractions(rows: &[&[(u32, u32)]]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| r.iter().map(|&(a, b)| a as f64 / b as f64).collect())
        .collect()
}
