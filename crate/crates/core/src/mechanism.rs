// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Mechanism constructors: the leakage-maximizing ε-DP channel on `Val^u`,
//! the utility-maximizing oblivious mechanism on a graph of answers, and the
//! truncated geometric mechanism.

use std::f64::consts::LN_2;

use crate::channel::{Alphabet, ChannelMatrix};
use crate::error::{Error, HypothesisFailure, Result};
use crate::graph::{
    augment_to_regular_borders, canonical_single_orbit_automorphism, check_automorphism,
    check_supergraph, AdjacencyGraph,
};
use crate::query::DatabaseUniverse;

fn check_eps(eps: f64) -> Result<()> {
    if eps >= 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "eps must be finite and >= 0, got {eps}"
        )))
    }
}

/// Square channel on `Val^u` with entry `α·e^{-ε·d(x,z)}`, `d` the Hamming
/// distance and `α = (e^ε/(v-1+e^ε))^u`. Its capacity is exactly `B(u,v,ε)`.
pub fn build_tight_leakage(u: usize, v: usize, eps: f64) -> Result<ChannelMatrix> {
    build_tight_leakage_over(&DatabaseUniverse::digits(u, v)?, eps)
}

pub fn build_tight_leakage_over(universe: &DatabaseUniverse, eps: f64) -> Result<ChannelMatrix> {
    check_eps(eps)?;
    let (u, v, n) = (universe.u(), universe.v(), universe.size());
    let decay = (-eps).exp();
    let alpha = (-(u as f64) * ((v - 1) as f64 * decay).ln_1p()).exp();
    let by_distance: Vec<f64> = (0..=u).map(|d| alpha * decay.powi(d as i32)).collect();
    let digits: Vec<Vec<usize>> = (0..n).map(|x| universe.decode(x)).collect();
    let rows = (0..n)
        .map(|x| {
            (0..n)
                .map(|z| {
                    let d = digits[x]
                        .iter()
                        .zip(&digits[z])
                        .filter(|(a, b)| a != b)
                        .count();
                    by_distance[d]
                })
                .collect()
        })
        .collect();
    let labels = universe.labels();
    ChannelMatrix::new(labels.clone(), labels, rows)
}

/// Diagonal value of the optimal mechanism in closed form,
/// `(e^ε)^n(1-e^ε) / ((e^ε)^n(1-e^ε) + c(1-(e^ε)^n))`, evaluated as
/// `expm1(ε) / (expm1(ε) - c·expm1(-nε))` to stay finite.
pub fn alpha_closed_form(n: usize, c: usize, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "closed form needs finite eps > 0, got {eps}; use the sum form"
        )));
    }
    if n < 1 || c < 1 {
        return Err(Error::InvalidParameter("n and c must be at least 1".into()));
    }
    let a = eps.exp_m1();
    Ok(a / (a - c as f64 * (-(n as f64) * eps).exp_m1()))
}

/// `1 / (1 + c·Σ_{d=1..n} e^{-εd})`, valid at `ε = 0`.
pub fn alpha_sum_form(n: usize, c: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let mut counts = vec![c; n + 1];
    counts[0] = 1;
    Ok(alpha_from_borders(&counts, eps))
}

/// `1 / Σ_d counts[d]·e^{-εd}`.
fn alpha_from_borders(counts: &[usize], eps: f64) -> f64 {
    let decay = (-eps).exp();
    1.0 / counts
        .iter()
        .enumerate()
        .map(|(d, &k)| k as f64 * decay.powi(d as i32))
        .sum::<f64>()
}

#[derive(Debug, Clone, Default)]
pub struct OptimalOptions {
    /// Single-orbit automorphism to use instead of the built-in rotation.
    pub automorphism: Option<Vec<usize>>,
    /// Fall back to a supergraph that meets the hypotheses when `g` does not.
    pub augment: bool,
    /// Explicit supergraph to build on; implies augmentation.
    pub supergraph: Option<AdjacencyGraph>,
}

#[derive(Debug, Clone)]
pub struct OptimalMechanismParams {
    /// The graph whose distances define the matrix.
    pub graph: AdjacencyGraph,
    pub eps: f64,
    pub alpha: f64,
    /// Eccentricity of every node.
    pub n: usize,
    /// Border constant, or 2 on an even ring.
    pub c: Option<usize>,
    /// The antipodal cell of an even ring carries twice the far weight.
    pub antipodal_doubled: bool,
    /// Graph actually used when augmentation replaced the input.
    pub supergraph: Option<AdjacencyGraph>,
    /// False when the matrix was built on a supergraph or via the even-ring
    /// doubling, where better ε-DP mechanisms can exist.
    pub optimal_guaranteed: bool,
}

enum Shape {
    /// `|Border_d| = c` for every realized `d > 0`.
    Regular { c: usize },
    /// Even cycle: antipodal cell doubled.
    EvenRing,
}

fn classify(w: &AdjacencyGraph, eps: f64, automorphism: Option<&[usize]>) -> Result<Shape> {
    if !w.is_connected() {
        return Err(Error::HypothesisViolated(HypothesisFailure::Disconnected));
    }
    if w.is_cycle() && w.n().is_multiple_of(2) {
        if eps > 0.0 && (2.0 * eps).exp() < 2.0 {
            return Err(Error::DoublingInapplicable { eps });
        }
        return Ok(Shape::EvenRing);
    }
    let c = w.border_constant().map_err(Error::HypothesisViolated)?;
    let single = match automorphism {
        Some(p) => check_automorphism(w, p.to_vec())?.single_orbit(),
        None => canonical_single_orbit_automorphism(w).is_some_and(|a| a.single_orbit()),
    };
    if !single && w.n() > 1 {
        return Err(Error::HypothesisViolated(
            HypothesisFailure::NoSingleOrbitAutomorphism,
        ));
    }
    Ok(Shape::Regular { c })
}

/// Entry `α/(e^ε)^{dist(y,z)}` on the nodes of `g`. On even rings the
/// antipodal entry is doubled (requires `e^{2ε} ≥ 2`). α normalizes rows;
/// at `ε = 0` every row is uniform.
pub fn build_optimal_utility(
    g: &AdjacencyGraph,
    eps: f64,
    options: &OptimalOptions,
) -> Result<(ChannelMatrix, OptimalMechanismParams)> {
    check_eps(eps)?;
    let automorphism = options.automorphism.as_deref();
    let (w, augmented, shape) = if let Some(sup) = &options.supergraph {
        check_supergraph(g, sup)?;
        let shape = classify(sup, eps, automorphism)?;
        (sup.clone(), (sup != g).then(|| sup.clone()), shape)
    } else {
        match classify(g, eps, automorphism) {
            Ok(shape) => (g.clone(), None, shape),
            Err(Error::HypothesisViolated(_) | Error::DoublingInapplicable { .. })
                if options.augment =>
            {
                let mut sup = augment_to_regular_borders(g);
                let shape = match classify(&sup, eps, None) {
                    Ok(s) => s,
                    // an even ring below the doubling threshold falls back to the clique
                    Err(Error::DoublingInapplicable { .. }) => {
                        sup = AdjacencyGraph::clique_on(g.nodes().clone());
                        classify(&sup, eps, None)?
                    }
                    Err(e) => return Err(e),
                };
                (sup.clone(), (sup != *g).then_some(sup), shape)
            }
            Err(e) => return Err(e),
        }
    };

    let size = w.n();
    let n = w.eccentricity(0).unwrap_or(0);
    let doubled = matches!(shape, Shape::EvenRing) && eps > 0.0;
    let c = match shape {
        Shape::Regular { c } => Some(c),
        Shape::EvenRing => Some(2),
    };
    let rows: Vec<Vec<f64>>;
    let alpha;
    if eps == 0.0 {
        alpha = 1.0 / size as f64;
        rows = vec![vec![alpha; size]; size];
    } else {
        let mut counts = w.border_sizes(0);
        if doubled {
            counts[n] *= 2;
        }
        alpha = alpha_from_borders(&counts, eps);
        let decay = (-eps).exp();
        let cell: Vec<f64> = (0..=n)
            .map(|d| {
                let weight = if doubled && d == n { 2.0 } else { 1.0 };
                weight * alpha * decay.powi(d as i32)
            })
            .collect();
        rows = (0..size)
            .map(|y| {
                (0..size)
                    .map(|z| cell[w.dist(y, z).expect("graph is connected")])
                    .collect()
            })
            .collect();
    }
    let nodes = g.nodes().clone();
    let m = ChannelMatrix::new(nodes.clone(), nodes, rows)?;
    let optimal_guaranteed = augmented.is_none() && !doubled;
    Ok((
        m,
        OptimalMechanismParams {
            graph: w,
            eps,
            alpha,
            n,
            c,
            antipodal_doubled: doubled,
            supergraph: augmented,
            optimal_guaranteed,
        },
    ))
}

/// Truncated geometric mechanism on `{0..n_max}`: `((1-λ)/(1+λ))·λ^{|z-y|}`
/// inside, with the tails folded into `z = 0` and `z = n_max`.
pub fn build_geometric(n_max: usize, lambda: f64) -> Result<ChannelMatrix> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in (0,1), got {lambda}"
        )));
    }
    let inner = (1.0 - lambda) / (1.0 + lambda);
    let edge = 1.0 / (1.0 + lambda);
    let rows = (0..=n_max)
        .map(|y| {
            (0..=n_max)
                .map(|z| {
                    if z == 0 {
                        edge * lambda.powi(y as i32)
                    } else if z == n_max {
                        edge * lambda.powi((n_max - y) as i32)
                    } else {
                        inner * lambda.powi(y.abs_diff(z) as i32)
                    }
                })
                .collect()
        })
        .collect();
    let labels = Alphabet::indexed(n_max + 1)?;
    ChannelMatrix::new(labels.clone(), labels, rows)
}

/// `ln(1/λ)`, the ε a geometric mechanism provides on the line.
pub fn geometric_epsilon(lambda: f64) -> f64 {
    -lambda.ln()
}

/// `e^{-ε}`, the λ giving a geometric mechanism exactly ε.
pub fn geometric_lambda(eps: f64) -> f64 {
    (-eps).exp()
}

/// `log2 e^ε` expressed through `ln 2`, for callers reporting in bits.
pub fn eps_in_bits(eps: f64) -> f64 {
    eps / LN_2
}
