// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Finite undirected graphs carrying an adjacency relation: shortest-path
//! distance, `Border_d` sets, border regularity and single-orbit automorphisms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::channel::Alphabet;
use crate::error::{Error, HypothesisFailure, Result};
use crate::par::{self, Execution};
use crate::query::DatabaseUniverse;

const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphKind {
    Hamming { u: usize, v: usize },
    Ring,
    Clique,
    Line,
    Custom,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Hamming { u, v } => write!(f, "hamming({u},{v})"),
            GraphKind::Ring => write!(f, "ring"),
            GraphKind::Clique => write!(f, "clique"),
            GraphKind::Line => write!(f, "line"),
            GraphKind::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    nodes: Alphabet,
    kind: GraphKind,
    adj: Vec<Vec<usize>>,
    // all-pairs BFS table, filled on first distance query
    dist: OnceLock<Vec<u32>>,
}

impl PartialEq for AdjacencyGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.adj == other.adj
    }
}

fn normalize_edges(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Vec<Vec<usize>>> {
    let mut set = BTreeSet::new();
    for (a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::Index(format!("edge ({a}, {b}) with {n} nodes")));
        }
        if a == b {
            return Err(Error::GraphSpec(format!("self-loop at node {a}")));
        }
        set.insert((a.min(b), a.max(b)));
    }
    let mut adj = vec![Vec::new(); n];
    for (a, b) in set {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(adj)
}

impl AdjacencyGraph {
    fn with_kind(nodes: Alphabet, kind: GraphKind, edges: Vec<(usize, usize)>) -> Result<Self> {
        let adj = normalize_edges(nodes.len(), edges)?;
        Ok(AdjacencyGraph {
            nodes,
            kind,
            adj,
            dist: OnceLock::new(),
        })
    }

    /// Graph from an explicit edge list. Paths, cycles and complete graphs in
    /// node order are tagged `line`, `ring` and `clique`; anything else is
    /// `custom`.
    pub fn from_edges(
        nodes: Alphabet,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut g = Self::with_kind(nodes, GraphKind::Custom, Vec::new())?;
        g.adj = normalize_edges(g.n(), edges)?;
        let n = g.n();
        let e = g.edge_count();
        let path =
            (n >= 2 && e == n - 1 && (0..n - 1).all(|i| g.are_adjacent(i, i + 1))) || (n == 1);
        let cycle = n >= 3 && e == n && (0..n).all(|i| g.are_adjacent(i, (i + 1) % n));
        let complete = e == n * (n - 1) / 2;
        g.kind = if complete && n <= 2 {
            GraphKind::Clique
        } else if cycle {
            GraphKind::Ring
        } else if path {
            GraphKind::Line
        } else if complete {
            GraphKind::Clique
        } else {
            GraphKind::Custom
        };
        Ok(g)
    }

    pub fn ring_on(nodes: Alphabet) -> Self {
        let n = nodes.len();
        let edges = match n {
            1 => vec![],
            2 => vec![(0, 1)],
            _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        };
        Self::with_kind(nodes, GraphKind::Ring, edges).expect("ring edges are valid")
    }

    pub fn clique_on(nodes: Alphabet) -> Self {
        let n = nodes.len();
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::with_kind(nodes, GraphKind::Clique, edges).expect("clique edges are valid")
    }

    pub fn line_on(nodes: Alphabet) -> Self {
        let n = nodes.len();
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::with_kind(nodes, GraphKind::Line, edges).expect("line edges are valid")
    }

    pub fn ring(n: usize) -> Result<Self> {
        Ok(Self::ring_on(Alphabet::indexed(n)?))
    }

    pub fn clique(n: usize) -> Result<Self> {
        Ok(Self::clique_on(Alphabet::indexed(n)?))
    }

    pub fn line(n: usize) -> Result<Self> {
        Ok(Self::line_on(Alphabet::indexed(n)?))
    }

    /// The standard adjacency on `Val^u`: tuples differing in exactly one position.
    pub fn hamming_over(universe: &DatabaseUniverse) -> Self {
        let (u, v) = (universe.u(), universe.v());
        let mut edges = Vec::new();
        let mut digits = vec![0usize; u];
        for x in 0..universe.size() {
            universe.decode_into(x, &mut digits);
            let mut place = 1;
            for &d in digits.iter() {
                for other in d + 1..v {
                    edges.push((x, x + (other - d) * place));
                }
                place *= v;
            }
        }
        Self::with_kind(universe.labels(), GraphKind::Hamming { u, v }, edges)
            .expect("hamming edges are valid")
    }

    pub fn hamming(u: usize, v: usize) -> Result<Self> {
        Ok(Self::hamming_over(&DatabaseUniverse::digits(u, v)?))
    }

    pub fn nodes(&self) -> &Alphabet {
        &self.nodes
    }

    /// Same edges over new labels of equal count.
    pub fn with_nodes(&self, nodes: Alphabet) -> Result<Self> {
        if nodes.len() != self.n() {
            return Err(Error::InvalidParameter(format!(
                "{} labels for a graph on {} nodes",
                nodes.len(),
                self.n()
            )));
        }
        Ok(AdjacencyGraph {
            nodes,
            kind: self.kind,
            adj: self.adj.clone(),
            dist: self.dist.clone(),
        })
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    fn bfs(&self, src: usize) -> Vec<u32> {
        let mut d = vec![UNREACHABLE; self.n()];
        let mut queue = std::collections::VecDeque::from([src]);
        d[src] = 0;
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if d[y] == UNREACHABLE {
                    d[y] = d[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        d
    }

    fn table(&self) -> &[u32] {
        self.dist.get_or_init(|| {
            par::map_range(Execution::default(), self.n(), |s| self.bfs(s))
                .into_iter()
                .flatten()
                .collect()
        })
    }

    /// Shortest-path edge count, `None` when unreachable.
    pub fn dist(&self, a: usize, b: usize) -> Option<usize> {
        let d = self.table()[a * self.n() + b];
        (d != UNREACHABLE).then_some(d as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(|&d| d != UNREACHABLE)
    }

    pub fn eccentricity(&self, y: usize) -> Option<usize> {
        (0..self.n())
            .map(|z| self.dist(y, z))
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
    }

    pub fn diameter(&self) -> Option<usize> {
        (0..self.n())
            .map(|y| self.eccentricity(y))
            .try_fold(0, |m, e| e.map(|e| m.max(e)))
    }

    /// `Border_d(y)`: nodes at distance exactly `d`, ascending.
    pub fn border(&self, y: usize, d: usize) -> Vec<usize> {
        (0..self.n())
            .filter(|&z| self.dist(y, z) == Some(d))
            .collect()
    }

    /// `|Border_d(y)|` for `d = 0..=eccentricity(y)`; unreachable nodes are not counted.
    pub fn border_sizes(&self, y: usize) -> Vec<usize> {
        let mut sizes = Vec::new();
        for z in 0..self.n() {
            if let Some(d) = self.dist(y, z) {
                if sizes.len() <= d {
                    sizes.resize(d + 1, 0);
                }
                sizes[d] += 1;
            }
        }
        sizes
    }

    /// The `c` with `|Border_d(y)| ∈ {0, c}` for every `d > 0`, if one exists.
    /// A node with no other reachable node yields `Some(0)`.
    pub fn border_constant_at(&self, y: usize) -> std::result::Result<usize, HypothesisFailure> {
        let sizes = self.border_sizes(y);
        let mut c = None;
        for (d, &s) in sizes.iter().enumerate().skip(1) {
            match c {
                None if s > 0 => c = Some(s),
                Some(c) if s != 0 && s != c => {
                    return Err(HypothesisFailure::BorderIrregular {
                        node: y,
                        distance: d,
                        size: s,
                        expected: c,
                    })
                }
                _ => {}
            }
        }
        Ok(c.unwrap_or(0))
    }

    /// Common border constant over all nodes.
    pub fn border_constant(&self) -> std::result::Result<usize, HypothesisFailure> {
        let c = self.border_constant_at(0)?;
        for y in 1..self.n() {
            let cy = self.border_constant_at(y)?;
            if cy != c {
                let sizes = self.border_sizes(y);
                let distance = sizes
                    .iter()
                    .skip(1)
                    .position(|&s| s != 0 && s != c)
                    .map_or(1, |p| p + 1);
                return Err(HypothesisFailure::BorderIrregular {
                    node: y,
                    distance,
                    size: sizes.get(distance).copied().unwrap_or(0),
                    expected: c,
                });
            }
        }
        Ok(c)
    }

    /// Largest `c` with `|Border_d(y)| = 0` or `>= c` for every `d > 0`.
    pub fn min_border_at(&self, y: usize) -> usize {
        self.border_sizes(y)
            .into_iter()
            .skip(1)
            .filter(|&s| s > 0)
            .min()
            .unwrap_or(0)
    }

    /// Connected, at least three nodes, every node of degree two.
    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.adj.iter().all(|l| l.len() == 2) && self.is_connected()
    }

    /// Same nodes and every edge of `other` present here.
    pub fn contains(&self, other: &AdjacencyGraph) -> bool {
        self.nodes == other.nodes
            && other
                .edges()
                .into_iter()
                .all(|(a, b)| self.are_adjacent(a, b))
    }

    /// Edge-list text: `nodes: l1,l2,...` followed by `a -- b` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("nodes: {}\n", self.nodes.labels().join(","));
        for (a, b) in self.edges() {
            s.push_str(&format!(
                "{} -- {}\n",
                self.nodes.label(a),
                self.nodes.label(b)
            ));
        }
        s
    }
}

pub fn parse_edge_list(text: &str) -> Result<AdjacencyGraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::GraphSpec("empty edge-list file".into()))?;
    let list = header
        .strip_prefix("nodes:")
        .ok_or_else(|| Error::GraphSpec("first line must be `nodes: ...`".into()))?;
    let nodes = Alphabet::new(list.split(',').map(|s| s.trim().to_string()))?;
    let mut edges = Vec::new();
    for line in lines {
        let (a, b) = line
            .split_once("--")
            .ok_or_else(|| Error::GraphSpec(format!("expected `a -- b`: {line:?}")))?;
        let find = |l: &str| {
            nodes
                .index_of(l.trim())
                .ok_or_else(|| Error::GraphSpec(format!("unknown node {:?}", l.trim())))
        };
        edges.push((find(a)?, find(b)?));
    }
    AdjacencyGraph::from_edges(nodes, edges)
}

/// `hamming:U:V`, `ring:N`, `clique:N`, `line:N` or `file:PATH`.
pub fn build_graph(spec: &str) -> Result<AdjacencyGraph> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix("file:") {
        return parse_edge_list(&std::fs::read_to_string(path)?);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::GraphSpec(format!("bad number {s:?} in {spec:?}")))
    };
    let positive = |n: usize| {
        if n < 1 {
            Err(Error::GraphSpec(format!(
                "N must be at least 1 in {spec:?}"
            )))
        } else {
            Ok(n)
        }
    };
    match parts.as_slice() {
        ["hamming", u, v] => {
            let (u, v) = (positive(num(u)?)?, num(v)?);
            if v < 2 {
                return Err(Error::GraphSpec(format!(
                    "V must be at least 2 in {spec:?}"
                )));
            }
            AdjacencyGraph::hamming(u, v)
        }
        ["ring", n] => AdjacencyGraph::ring(positive(num(n)?)?),
        ["clique", n] => AdjacencyGraph::clique(positive(num(n)?)?),
        ["line", n] => AdjacencyGraph::line(positive(num(n)?)?),
        _ => Err(Error::GraphSpec(format!("unrecognised spec {spec:?}"))),
    }
}

/// A verified edge-preserving permutation of a graph's nodes.
#[derive(Debug, Clone)]
pub struct Automorphism<'g> {
    graph: &'g AdjacencyGraph,
    perm: Vec<usize>,
    single_orbit: bool,
}

impl<'g> Automorphism<'g> {
    pub fn graph(&self) -> &'g AdjacencyGraph {
        self.graph
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn single_orbit(&self) -> bool {
        self.single_orbit
    }

    /// `σ^k(x)`.
    pub fn apply_pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(x, |y, _| self.perm[y])
    }

    /// `powers[i][x] = σ^i(x)` for `i = 0..n`.
    pub fn powers(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut out = Vec::with_capacity(n);
        let mut cur: Vec<usize> = (0..n).collect();
        for _ in 0..n {
            let next = cur.iter().map(|&x| self.perm[x]).collect();
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }
}

pub fn check_automorphism(g: &AdjacencyGraph, perm: Vec<usize>) -> Result<Automorphism<'_>> {
    let n = g.n();
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!(
            "permutation of length {} for {} nodes",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in &perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
    }
    // a bijection mapping edges into edges maps non-edges to non-edges
    for (a, b) in g.edges() {
        if !g.are_adjacent(perm[a], perm[b]) {
            return Err(Error::NotAutomorphism(a, b));
        }
    }
    let mut len = 1;
    let mut x = perm[0];
    while x != 0 {
        x = perm[x];
        len += 1;
    }
    Ok(Automorphism {
        graph: g,
        perm,
        single_orbit: len == n,
    })
}

/// Rotation `i -> i+1 mod n` for rings and cliques; `None` otherwise.
pub fn canonical_single_orbit_automorphism(g: &AdjacencyGraph) -> Option<Automorphism<'_>> {
    match g.kind() {
        GraphKind::Ring | GraphKind::Clique => {
            let n = g.n();
            check_automorphism(g, (0..n).map(|i| (i + 1) % n).collect()).ok()
        }
        _ => None,
    }
}

/// A supergraph meeting the border-regularity hypothesis: a line is closed
/// into a ring, a ring is kept, anything else becomes the clique on its nodes.
pub fn augment_to_regular_borders(g: &AdjacencyGraph) -> AdjacencyGraph {
    match g.kind() {
        GraphKind::Line => AdjacencyGraph::ring_on(g.nodes().clone()),
        GraphKind::Ring => g.clone(),
        _ => AdjacencyGraph::clique_on(g.nodes().clone()),
    }
}

/// Verifies that `sup` is a supergraph of `g` on the same nodes.
pub fn check_supergraph(g: &AdjacencyGraph, sup: &AdjacencyGraph) -> Result<()> {
    if sup.contains(g) {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(HypothesisFailure::NotSupergraph))
    }
}
