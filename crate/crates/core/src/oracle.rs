// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference computations for small instances, and a seeded
//! sampler of ε-DP channels.
//!
//! Nothing here calls the fast paths in [`crate::channel`], [`crate::dp`] or
//! [`crate::query`], except the final `verify_dp` that certifies a sample.
//! Randomness is ChaCha8 seeded from a `u64`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{Alphabet, ChannelMatrix, PriorDistribution};
use crate::error::{Error, Result};
use crate::graph::AdjacencyGraph;
use crate::par::{self, Execution};
use crate::query::GainTable;

/// Largest `rows·cols` accepted by the enumeration oracles.
pub const ENUMERATION_LIMIT: usize = 4096;
/// Subset checks of Def. 1 run only up to this many columns.
pub const SUBSET_COLUMN_LIMIT: usize = 10;
/// Largest remap space searched exhaustively.
pub const REMAP_SEARCH_LIMIT: u64 = 10_000_000;

fn guard(m: &ChannelMatrix) -> Result<()> {
    let cells = m.n_rows() * m.n_cols();
    if cells > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "{cells} cells exceeds {ENUMERATION_LIMIT}"
        )));
    }
    Ok(())
}

fn check_prior(p: &PriorDistribution, m: &ChannelMatrix) -> Result<()> {
    if p.alphabet() != m.input() {
        return Err(Error::AlphabetMismatch {
            expected: m.input().to_string(),
            found: p.alphabet().to_string(),
        });
    }
    Ok(())
}

/// Min-entropy leakage by Bayes inversion: output marginal `p(z)`, posterior
/// `p(x|z)`, then `-log2 max p(x) + log2 Σ_z p(z)·max_x p(x|z)`.
pub fn leakage_by_enumeration(p: &PriorDistribution, m: &ChannelMatrix) -> Result<f64> {
    guard(m)?;
    check_prior(p, m)?;
    let prior = p.probs();
    let mut expected_posterior_max = 0.0;
    for z in 0..m.n_cols() {
        let pz: f64 = (0..m.n_rows()).map(|x| prior[x] * m.entry(x, z)).sum();
        if pz == 0.0 {
            continue;
        }
        let best = (0..m.n_rows())
            .map(|x| prior[x] * m.entry(x, z) / pz)
            .fold(0.0, f64::max);
        expected_posterior_max += pz * best;
    }
    let prior_max = prior.iter().copied().fold(0.0, f64::max);
    Ok(expected_posterior_max.log2() - prior_max.log2())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleDpVerdict {
    /// Every singleton output set respects the ratio.
    pub satisfies: bool,
    /// First violating `(row, other, column)` in edge-then-column order.
    pub witness: Option<(usize, usize, usize)>,
    /// Result of checking every nonempty output set, when columns allow.
    pub satisfies_all_subsets: Option<bool>,
}

/// Def. 1 checked directly: `P[S|x] ≤ e^ε P[S|x']` for every edge, both
/// orientations, with `e^{ε+1e-9}` slack.
pub fn dp_by_enumeration(
    m: &ChannelMatrix,
    g: &AdjacencyGraph,
    eps: f64,
) -> Result<OracleDpVerdict> {
    guard(m)?;
    if g.nodes() != m.input() {
        return Err(Error::AlphabetMismatch {
            expected: m.input().to_string(),
            found: g.nodes().to_string(),
        });
    }
    let factor = (eps + 1e-9).exp();
    let mut pairs = Vec::new();
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            pairs.push((a, b));
        }
    }
    let mut witness = None;
    'outer: for &(a, b) in &pairs {
        for z in 0..m.n_cols() {
            if m.entry(a, z) > factor * m.entry(b, z) {
                witness = Some((a, b, z));
                break 'outer;
            }
        }
    }
    let cols = m.n_cols();
    let satisfies_all_subsets = (cols <= SUBSET_COLUMN_LIMIT).then(|| {
        pairs.iter().all(|&(a, b)| {
            (1u32..(1 << cols)).all(|mask| {
                let mass = |x: usize| -> f64 {
                    (0..cols)
                        .filter(|z| mask >> z & 1 == 1)
                        .map(|z| m.entry(x, z))
                        .sum()
                };
                mass(a) <= factor * mass(b)
            })
        })
    });
    Ok(OracleDpVerdict {
        satisfies: witness.is_none(),
        witness,
        satisfies_all_subsets,
    })
}

/// Smallest ε via `ln a − ln b` over every adjacent ordered pair and column.
pub fn min_epsilon_by_enumeration(m: &ChannelMatrix, g: &AdjacencyGraph) -> Result<f64> {
    guard(m)?;
    let mut best = 0.0f64;
    for a in 0..g.n() {
        for &b in g.neighbors(a) {
            for z in 0..m.n_cols() {
                let (x, y) = (m.entry(a, z), m.entry(b, z));
                if x > 0.0 {
                    best = best.max(if y > 0.0 {
                        x.ln() - y.ln()
                    } else {
                        f64::INFINITY
                    });
                }
            }
        }
    }
    Ok(best)
}

/// Exhaustive search over all `|Y|^|Z|` remaps for the best expected gain.
/// Remaps are visited in lexicographic order; the first maximum is kept.
pub fn best_remap_by_search(
    p: &PriorDistribution,
    h: &ChannelMatrix,
    gain: &GainTable,
) -> Result<(Vec<usize>, f64)> {
    check_prior(p, h)?;
    let (ny, nz) = (h.n_rows(), h.n_cols());
    if gain.size() != ny {
        return Err(Error::InvalidParameter(
            "gain table does not match the answers".into(),
        ));
    }
    let space = (ny as u64)
        .checked_pow(nz as u32)
        .filter(|&s| s <= REMAP_SEARCH_LIMIT);
    if space.is_none() {
        return Err(Error::TooLarge(format!("{ny}^{nz} remaps")));
    }
    let prior = p.probs();
    // value[z][g]: contribution of column z when guessing g
    let value: Vec<Vec<f64>> = (0..nz)
        .map(|z| {
            (0..ny)
                .map(|g| {
                    (0..ny)
                        .map(|y| prior[y] * h.entry(y, z) * gain.gain(y, g))
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut remap = vec![0usize; nz];
    let mut best = (remap.clone(), f64::NEG_INFINITY);
    loop {
        let total: f64 = remap.iter().enumerate().map(|(z, &g)| value[z][g]).sum();
        if total > best.1 {
            best = (remap.clone(), total);
        }
        // odometer with the last column least significant
        let mut pos = nz;
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            remap[pos] += 1;
            if remap[pos] < ny {
                break;
            }
            remap[pos] = 0;
        }
    }
}

/// Seeded random row-stochastic matrix with peaked rows.
pub fn random_channel(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let sharpness: f64 = 1.0 + 7.0 * rng.gen::<f64>();
    (0..rows)
        .map(|_| {
            let w: Vec<f64> = (0..cols)
                .map(|_| rng.gen::<f64>().powf(sharpness) + 1e-12)
                .collect();
            let s: f64 = w.iter().sum();
            w.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

pub fn random_prior(seed: u64, alphabet: &Alphabet) -> PriorDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..alphabet.len())
        .map(|_| rng.gen::<f64>() + 1e-3)
        .collect();
    let s: f64 = w.iter().sum();
    PriorDistribution::new(alphabet.clone(), w.into_iter().map(|x| x / s).collect())
        .expect("normalized weights form a distribution")
}

#[derive(Debug, Clone)]
pub struct SamplerConfig {
    pub seed: u64,
    pub target_eps: f64,
    /// Adjacency on the rows.
    pub graph: AdjacencyGraph,
    pub cols: usize,
    pub bisection_tolerance: f64,
    pub max_iterations: usize,
}

impl SamplerConfig {
    pub fn new(seed: u64, target_eps: f64, graph: AdjacencyGraph, cols: usize) -> Self {
        SamplerConfig {
            seed,
            target_eps,
            graph,
            cols,
            bisection_tolerance: 1e-10,
            max_iterations: 200,
        }
    }

    pub fn rows(&self) -> usize {
        self.graph.n()
    }
}

fn mix(base: &[Vec<f64>], t: f64) -> Vec<Vec<f64>> {
    base.iter()
        .map(|row| {
            let share = t / row.len() as f64;
            row.iter().map(|&p| (1.0 - t) * p + share).collect()
        })
        .collect()
}

/// Whether the `t`-mixture of `base` keeps every adjacent ratio within `bound`.
fn mixture_within(base: &[Vec<f64>], edges: &[(usize, usize)], t: f64, bound: f64) -> bool {
    let share = t / base[0].len() as f64;
    edges.iter().all(|&(a, b)| {
        base[a].iter().zip(&base[b]).all(|(&p, &q)| {
            let (x, y) = ((1.0 - t) * p + share, (1.0 - t) * q + share);
            x <= bound * y && y <= bound * x
        })
    })
}

/// Random channel pulled toward uniform rows until it is `target_eps`-DP on
/// the config graph. The mixing weight is found by bisection and the result
/// is certified by `verify_dp`.
pub fn sample_dp_channel(cfg: &SamplerConfig) -> Result<ChannelMatrix> {
    if !(cfg.target_eps > 0.0 && cfg.target_eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "target eps must be > 0, got {}",
            cfg.target_eps
        )));
    }
    if cfg.cols < 1 {
        return Err(Error::InvalidParameter("need at least one column".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let base = random_channel(&mut rng, cfg.rows(), cfg.cols);
    let input = cfg.graph.nodes().clone();
    let output = Alphabet::indexed(cfg.cols)?;
    let build = |t: f64| ChannelMatrix::from_parts(input.clone(), output.clone(), mix(&base, t));
    let edges = cfg.graph.edges();
    // strictly inside the target so the certified ε never exceeds it
    let bound = cfg.target_eps.exp() * (1.0 - 1e-12);
    let ok = |t: f64| mixture_within(&base, &edges, t, bound);

    let t = if ok(0.0) {
        0.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut iterations = 0;
        while hi - lo > cfg.bisection_tolerance {
            if iterations == cfg.max_iterations {
                return Err(Error::BisectionFailed(format!(
                    "no convergence after {iterations} iterations (seed {})",
                    cfg.seed
                )));
            }
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
        }
        hi
    };
    let m = build(t);
    let verdict = crate::dp::verify_dp(&m, &cfg.graph, cfg.target_eps)?;
    if !verdict.satisfies {
        return Err(Error::BisectionFailed(format!(
            "sample has eps {} above target {} (seed {})",
            verdict.min_epsilon, cfg.target_eps, cfg.seed
        )));
    }
    Ok(m)
}

/// One sample per seed in `seeds`, in order.
pub fn sample_many(
    exec: Execution,
    base: &SamplerConfig,
    seeds: &[u64],
) -> Result<Vec<ChannelMatrix>> {
    par::map_range(exec, seeds.len(), |i| {
        let cfg = SamplerConfig {
            seed: seeds[i],
            ..base.clone()
        };
        sample_dp_channel(&cfg)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel;
    use crate::dp;
    use crate::query::{utility_binary, utility_general_gain};

    const LN2: f64 = std::f64::consts::LN_2;

    fn mat(rows: Vec<Vec<f64>>) -> ChannelMatrix {
        ChannelMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn leakage_examples() {
        let id = ChannelMatrix::identity(2).unwrap();
        let p = PriorDistribution::uniform(id.input().clone());
        assert!((leakage_by_enumeration(&p, &id).unwrap() - 1.0).abs() < 1e-12);
        let m = mat(vec![vec![0.75, 0.25], vec![0.25, 0.75]]);
        assert!((leakage_by_enumeration(&p, &m).unwrap() - 1.5f64.log2()).abs() < 1e-12);
        let big = ChannelMatrix::identity(100).unwrap();
        let p = PriorDistribution::uniform(big.input().clone());
        assert!(matches!(
            leakage_by_enumeration(&p, &big),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn leakage_matches_fast_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..1000 {
            let m = mat(random_channel(&mut rng, 5, 7));
            let p = random_prior(seed, m.input());
            let fast = channel::min_entropy_leakage(&p, &m).unwrap().leakage;
            assert!((fast - leakage_by_enumeration(&p, &m).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn dp_examples() {
        let m = mat(vec![vec![2.0 / 3.0, 1.0 / 3.0], vec![1.0 / 3.0, 2.0 / 3.0]]);
        let g = AdjacencyGraph::from_edges(m.input().clone(), [(0, 1)]).unwrap();
        let v = dp_by_enumeration(&m, &g, LN2).unwrap();
        assert!(v.satisfies);
        assert_eq!(v.satisfies_all_subsets, Some(true));
        let v = dp_by_enumeration(&m, &g, 0.5).unwrap();
        assert!(!v.satisfies);
        assert_eq!(v.witness.map(|w| w.2), Some(0));
        let same = mat(vec![vec![0.2, 0.8]; 2]);
        assert!(dp_by_enumeration(&same, &g, 0.0).unwrap().satisfies);
    }

    #[test]
    fn remap_search_examples() {
        let h = crate::mechanism::build_geometric(3, 0.5).unwrap();
        let p = PriorDistribution::uniform(h.input().clone());
        let (remap, value) = best_remap_by_search(&p, &h, &GainTable::binary(4)).unwrap();
        assert_eq!(remap, vec![0, 1, 2, 3]);
        assert!((value - utility_binary(&p, &h).unwrap().utility).abs() < 1e-12);
        let ones = GainTable::new(vec![vec![1.0; 4]; 4]).unwrap();
        assert!((best_remap_by_search(&p, &h, &ones).unwrap().1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn remap_search_matches_greedy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..200 {
            let h = mat(random_channel(&mut rng, 3, 3));
            let p = random_prior(seed, h.input());
            let (_, v) = best_remap_by_search(&p, &h, &GainTable::binary(3)).unwrap();
            assert!((v - utility_binary(&p, &h).unwrap().utility).abs() < 1e-12);
            let g = GainTable::new(
                (0..3)
                    .map(|i| {
                        (0..3)
                            .map(|j| 1.0 - (i as f64 - j as f64).abs() / 3.0)
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let (_, v) = best_remap_by_search(&p, &h, &g).unwrap();
            assert!((v - utility_general_gain(&p, &h, &g, None).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn sampler_is_deterministic_and_dp() {
        let g = AdjacencyGraph::ring(6).unwrap();
        for seed in 0..20 {
            let cfg = SamplerConfig::new(seed, LN2, g.clone(), 6);
            let a = sample_dp_channel(&cfg).unwrap();
            let b = sample_dp_channel(&cfg).unwrap();
            assert_eq!(a.rows(), b.rows());
            assert!(dp::min_epsilon(&a, &g).unwrap() <= LN2 + 1e-9);
        }
        let cfg = SamplerConfig::new(0, 0.0, g, 6);
        assert!(sample_dp_channel(&cfg).is_err());
    }

    #[test]
    fn full_mix_is_uniform() {
        let m = mat(random_channel(&mut ChaCha8Rng::seed_from_u64(3), 3, 4));
        let u = mix(m.rows(), 1.0);
        assert!(u.iter().flatten().all(|&x| (x - 0.25).abs() < 1e-15));
    }

    #[test]
    fn bisection_cap_reports_failure() {
        let g = AdjacencyGraph::ring(4).unwrap();
        let mut cfg = SamplerConfig::new(5, 1e-3, g, 4);
        cfg.max_iterations = 2;
        assert!(matches!(
            sample_dp_channel(&cfg),
            Err(Error::BisectionFailed(_))
        ));
    }

    #[test]
    fn batch_is_order_stable() {
        let g = AdjacencyGraph::clique(4).unwrap();
        let cfg = SamplerConfig::new(0, 1.0, g, 5);
        let seeds: Vec<u64> = (0..16).collect();
        let a = sample_many(Execution::Sequential, &cfg, &seeds).unwrap();
        let b = sample_many(Execution::Parallel, &cfg, &seeds).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.rows() == y.rows()));
    }
}
