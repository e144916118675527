// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Execution strategy for the data-parallel loops (batch sweeps, edge scans,
//! all-pairs BFS). With the `parallel` feature disabled every strategy runs
//! sequentially. Results never depend on the strategy: maps preserve index
//! order and reductions use total orders with index tie-breaks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..n).map(f)` collected in index order.
pub fn map_range<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Maximum of `f(i)` over `0..n` under `cmp`; ties resolve to the lowest index.
pub fn max_by_range<T, F, C>(exec: Execution, n: usize, f: F, cmp: C) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    C: Fn(&T, &T) -> std::cmp::Ordering + Sync + Send,
{
    let pick = |a: (usize, T), b: (usize, T)| -> (usize, T) {
        match cmp(&a.1, &b.1) {
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Equal => {
                if a.0 <= b.0 {
                    a
                } else {
                    b
                }
            }
        }
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..n).into_par_iter().map(|i| (i, f(i))).reduce_with(pick);
    }
    let _ = exec;
    (0..n).map(|i| (i, f(i))).reduce(pick)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let v = map_range(exec, 1000, |i| i * i);
            assert!(v.iter().enumerate().all(|(i, &x)| x == i * i));
        }
    }

    #[test]
    fn max_ties_pick_lowest_index() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let best = max_by_range(exec, 500, |i| i % 7, |a, b| a.cmp(b)).unwrap();
            assert_eq!(best, (6, 6));
        }
        assert!(max_by_range(Execution::Sequential, 0, |i| i, |a, b| a.cmp(b)).is_none());
    }
}
