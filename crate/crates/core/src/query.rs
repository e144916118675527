// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Databases `Val^u`, deterministic queries, the adjacency they induce on
//! answers, oblivious composition `K = H∘f` and binary-gain utility.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::channel::{self, Alphabet, ChannelMatrix, PriorDistribution};
use crate::error::{Error, Result};
use crate::graph::AdjacencyGraph;
use crate::par::{self, Execution};

/// Largest universe that is ever enumerated.
pub const MAX_UNIVERSE: usize = 1_000_000;

/// The set `Val^u`. Database index is the base-`v` integer whose digit `i`
/// is the value of individual `i` (individual 0 least significant); labels
/// list individual 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatabaseUniverse {
    u: usize,
    values: Vec<String>,
    size: usize,
}

impl DatabaseUniverse {
    pub fn new<S: Into<String>>(u: usize, values: impl IntoIterator<Item = S>) -> Result<Self> {
        let values: Vec<String> = values.into_iter().map(Into::into).collect();
        if u < 1 {
            return Err(Error::InvalidParameter("u must be at least 1".into()));
        }
        if values.len() < 2 {
            return Err(Error::InvalidParameter("v must be at least 2".into()));
        }
        Alphabet::new(values.iter().cloned())?;
        let size = u32::try_from(u)
            .ok()
            .and_then(|u| values.len().checked_pow(u))
            .filter(|&s| s <= MAX_UNIVERSE)
            .ok_or_else(|| {
                Error::TooLarge(format!(
                    "{}^{} databases exceeds {MAX_UNIVERSE}",
                    values.len(),
                    u
                ))
            })?;
        Ok(DatabaseUniverse { u, values, size })
    }

    /// Values labelled `0..v-1`.
    pub fn digits(u: usize, v: usize) -> Result<Self> {
        Self::new(u, (0..v).map(|i| i.to_string()))
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn encode(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.u || tuple.iter().any(|&d| d >= self.v()) {
            return Err(Error::Index(format!(
                "tuple {tuple:?} not in Val^{}",
                self.u
            )));
        }
        Ok(tuple.iter().rev().fold(0, |acc, &d| acc * self.v() + d))
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for d in out.iter_mut() {
            *d = index % self.v();
            index /= self.v();
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.u];
        self.decode_into(index, &mut out);
        out
    }

    pub fn label(&self, index: usize) -> String {
        let digits = self.decode(index);
        let sep = if self.values.iter().all(|v| v.chars().count() == 1) {
            ""
        } else {
            "."
        };
        digits
            .iter()
            .map(|&d| self.values[d].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn labels(&self) -> Alphabet {
        Alphabet::new((0..self.size).map(|i| self.label(i))).expect("tuple labels are distinct")
    }

    /// Indices of the databases agreeing with `others` off position `target`,
    /// ordered by the value at `target`. `others` lists the remaining
    /// individuals in increasing position.
    pub fn individual_rows(&self, target: usize, others: &[usize]) -> Result<Vec<usize>> {
        if target >= self.u {
            return Err(Error::Index(format!(
                "individual {target} with u = {}",
                self.u
            )));
        }
        if others.len() != self.u - 1 {
            return Err(Error::Index(format!(
                "expected {} pinned values, got {}",
                self.u - 1,
                others.len()
            )));
        }
        let mut tuple: Vec<usize> = others.to_vec();
        tuple.insert(target, 0);
        (0..self.v())
            .map(|val| {
                tuple[target] = val;
                self.encode(&tuple)
            })
            .collect()
    }
}

/// Deterministic query `f: Val^u -> Y`, onto its answer alphabet.
#[derive(Debug, Clone)]
pub struct QueryModel {
    universe: DatabaseUniverse,
    answers: Alphabet,
    map: Vec<usize>,
}

impl QueryModel {
    /// Builds from per-database answer labels; answers keep the order of
    /// `answer_order` and unused ones are dropped.
    pub fn from_labels(
        universe: DatabaseUniverse,
        answer_order: &[String],
        answer_of: impl Fn(usize) -> String,
    ) -> Result<Self> {
        let raw: Vec<usize> = (0..universe.size())
            .map(|x| {
                let a = answer_of(x);
                answer_order
                    .iter()
                    .position(|l| *l == a)
                    .ok_or_else(|| Error::InvalidParameter(format!("answer {a:?} not declared")))
            })
            .collect::<Result<_>>()?;
        let used: BTreeSet<usize> = raw.iter().copied().collect();
        let keep: Vec<usize> = used.into_iter().collect();
        let mut reindex = vec![usize::MAX; answer_order.len()];
        for (new, &old) in keep.iter().enumerate() {
            reindex[old] = new;
        }
        Ok(QueryModel {
            answers: Alphabet::new(keep.iter().map(|&i| answer_order[i].clone()))?,
            map: raw.into_iter().map(|a| reindex[a]).collect(),
            universe,
        })
    }

    pub fn universe(&self) -> &DatabaseUniverse {
        &self.universe
    }

    pub fn answers(&self) -> &Alphabet {
        &self.answers
    }

    /// Answer index of database `x`.
    pub fn answer(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn identity(universe: DatabaseUniverse) -> Self {
        let answers = universe.labels();
        QueryModel {
            map: (0..universe.size()).collect(),
            answers,
            universe,
        }
    }

    /// Pushes a prior on databases through `f`.
    pub fn push_prior(&self, p: &PriorDistribution) -> Result<PriorDistribution> {
        if p.probs().len() != self.universe.size() {
            return Err(Error::InvalidParameter(
                "prior is not over this universe".into(),
            ));
        }
        let mut out = vec![0.0; self.answers.len()];
        for (x, &px) in p.probs().iter().enumerate() {
            out[self.map[x]] += px;
        }
        PriorDistribution::new(self.answers.clone(), out)
    }

    /// Reads `db_label,answer_label` lines; every database must appear once.
    pub fn parse_listing(universe: DatabaseUniverse, text: &str) -> Result<Self> {
        let dbs = universe.labels();
        let mut answer_of = vec![None; universe.size()];
        let mut order: Vec<String> = Vec::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (db, ans) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected db,answer: {line:?}")))?;
            let x = dbs
                .index_of(db.trim())
                .ok_or_else(|| Error::Parse(format!("unknown database {db:?}")))?;
            let ans = ans.trim().to_string();
            if !order.contains(&ans) {
                order.push(ans.clone());
            }
            answer_of[x] = Some(ans);
        }
        let answer_of = answer_of
            .into_iter()
            .enumerate()
            .map(|(x, a)| a.ok_or_else(|| Error::Parse(format!("no answer for {}", dbs.label(x)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_labels(universe, &order, |x| answer_of[x].clone())
    }
}

pub fn build_universe<S: Into<String>>(
    u: usize,
    v: usize,
    labels: impl IntoIterator<Item = S>,
) -> Result<DatabaseUniverse> {
    let un = DatabaseUniverse::new(u, labels)?;
    if un.v() != v {
        return Err(Error::InvalidParameter(format!(
            "{} labels for v = {v}",
            un.v()
        )));
    }
    Ok(un)
}

/// Number of individuals holding `target`; answers `0..=u`.
pub fn counting_query(universe: &DatabaseUniverse, target: &str) -> Result<QueryModel> {
    let t = universe
        .values()
        .iter()
        .position(|v| v == target)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown value {target:?}")))?;
    let order: Vec<String> = (0..=universe.u()).map(|k| k.to_string()).collect();
    QueryModel::from_labels(universe.clone(), &order, |x| {
        universe
            .decode(x)
            .iter()
            .filter(|&&d| d == t)
            .count()
            .to_string()
    })
}

/// Universe whose values are `city:candidate` pairs.
pub fn vote_universe(u: usize, cities: &[&str], candidates: &[&str]) -> Result<DatabaseUniverse> {
    if cities.is_empty() || candidates.is_empty() {
        return Err(Error::InvalidParameter(
            "empty city or candidate set".into(),
        ));
    }
    DatabaseUniverse::new(
        u,
        cities
            .iter()
            .flat_map(|c| candidates.iter().map(move |k| format!("{c}:{k}"))),
    )
}

/// City with the most votes for `candidate`, ties to the lowest city index.
/// `universe` must come from [`vote_universe`] with the same `cities`.
pub fn argmax_query(
    universe: &DatabaseUniverse,
    cities: &[&str],
    candidate: &str,
) -> Result<QueryModel> {
    if cities.is_empty() {
        return Err(Error::InvalidParameter("empty city set".into()));
    }
    let split: Vec<(usize, bool)> = universe
        .values()
        .iter()
        .map(|v| {
            let (city, cand) = v.split_once(':').ok_or_else(|| {
                Error::InvalidParameter(format!("value {v:?} is not city:candidate"))
            })?;
            let c = cities
                .iter()
                .position(|x| *x == city)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown city {city:?}")))?;
            Ok((c, cand == candidate))
        })
        .collect::<Result<_>>()?;
    let order: Vec<String> = cities.iter().map(|c| c.to_string()).collect();
    QueryModel::from_labels(universe.clone(), &order, |x| {
        let mut votes = vec![0usize; cities.len()];
        for d in universe.decode(x) {
            let (c, hit) = split[d];
            if hit {
                votes[c] += 1;
            }
        }
        let best = (0..votes.len()).fold(0, |b, c| if votes[c] > votes[b] { c } else { b });
        order[best].clone()
    })
}

/// Query from a spec string: `count:U:V:TARGET` (values `0..V-1`),
/// `argmax:U:CITY,CITY,...:CAND,CAND,...:CAND`, or `file:U:V:PATH` with one
/// `db_label,answer_label` line per database.
pub fn parse_query_spec(spec: &str) -> Result<QueryModel> {
    let bad = || Error::Parse(format!("malformed query spec {spec:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let parts: Vec<&str> = spec.splitn(5, ':').collect();
    match parts.as_slice() {
        ["count", u, v, target] => {
            counting_query(&DatabaseUniverse::digits(num(u)?, num(v)?)?, target)
        }
        ["argmax", u, cities, cands, cand] => {
            let cities: Vec<&str> = cities.split(',').collect();
            let cands: Vec<&str> = cands.split(',').collect();
            argmax_query(&vote_universe(num(u)?, &cities, &cands)?, &cities, cand)
        }
        ["file", u, v, rest @ ..] if !rest.is_empty() => {
            let path = rest.join(":");
            let text = std::fs::read_to_string(&path)?;
            QueryModel::parse_listing(DatabaseUniverse::digits(num(u)?, num(v)?)?, &text)
        }
        _ => Err(bad()),
    }
}

/// Answers `y ≠ y'` are adjacent iff some adjacent pair of databases maps to them.
pub fn induced_adjacency(q: &QueryModel) -> Result<AdjacencyGraph> {
    let un = q.universe();
    if un.size() > MAX_UNIVERSE {
        return Err(Error::TooLarge(format!("{} databases", un.size())));
    }
    let (v, u) = (un.v(), un.u());
    let chunks = par::map_range(Execution::default(), un.size(), |x| {
        let digits = un.decode(x);
        let mut local = Vec::new();
        let mut place = 1;
        for &d in digits.iter().take(u) {
            for other in d + 1..v {
                let y = q.answer(x);
                let z = q.answer(x + (other - d) * place);
                if y != z {
                    local.push((y.min(z), y.max(z)));
                }
            }
            place *= v;
        }
        local
    });
    let edges: BTreeSet<(usize, usize)> = chunks.into_iter().flatten().collect();
    AdjacencyGraph::from_edges(q.answers().clone(), edges)
}

/// `K[x][z] = H[f(x)][z]`.
pub fn compose(q: &QueryModel, h: &ChannelMatrix) -> Result<ChannelMatrix> {
    q.answers().ensure_same(h.input())?;
    let rows = (0..q.universe().size())
        .map(|x| h.row(q.answer(x)).to_vec())
        .collect();
    Ok(ChannelMatrix::from_parts(
        q.universe().labels(),
        h.output().clone(),
        rows,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UtilityFigures {
    /// Expected binary gain under the optimal remap.
    pub utility: f64,
    /// `remap[z]` is the answer guessed on output `z`.
    pub remap: Vec<usize>,
    /// `-log2 utility`.
    pub neg_log_utility: f64,
    /// `H∞(Y|Z)` computed by the channel module, for the duality check.
    pub conditional_min_entropy: f64,
}

impl UtilityFigures {
    pub fn duality_gap(&self) -> f64 {
        (self.neg_log_utility - self.conditional_min_entropy).abs()
    }
}

/// `U = Σ_z max_y p(y) h[y][z]` with `ρ(z)` the lowest maximizing answer.
pub fn utility_binary(p: &PriorDistribution, h: &ChannelMatrix) -> Result<UtilityFigures> {
    let j = channel::joint(p, h)?;
    let mut utility = 0.0;
    let mut remap = Vec::with_capacity(h.n_cols());
    for z in 0..h.n_cols() {
        let mut best = 0;
        for y in 1..j.len() {
            if j[y][z] > j[best][z] {
                best = y;
            }
        }
        utility += j[best][z];
        remap.push(best);
    }
    Ok(UtilityFigures {
        utility,
        remap,
        neg_log_utility: -utility.log2(),
        conditional_min_entropy: channel::conditional_min_entropy(p, h)?,
    })
}

/// Gain table `gain[y][y']` over the answers.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    entries: Vec<Vec<f64>>,
}

impl GainTable {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("gain table must be square".into()));
        }
        Ok(GainTable { entries })
    }

    pub fn binary(n: usize) -> Self {
        GainTable {
            entries: (0..n)
                .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn gain(&self, y: usize, guess: usize) -> f64 {
        self.entries[y][guess]
    }
}

/// Expected gain `Σ_{y,z} p(y,z) g(y, ρ(z))`. Without a remap, each column
/// takes the guess maximizing its expected gain (lowest index on ties).
pub fn utility_general_gain(
    p: &PriorDistribution,
    h: &ChannelMatrix,
    gain: &GainTable,
    remap: Option<&[usize]>,
) -> Result<f64> {
    let j = channel::joint(p, h)?;
    let ny = h.n_rows();
    if gain.size() != ny {
        return Err(Error::InvalidParameter(format!(
            "gain table is {0}x{0}, answers {ny}",
            gain.size()
        )));
    }
    if let Some(r) = remap {
        if r.len() != h.n_cols() || r.iter().any(|&g| g >= ny) {
            return Err(Error::InvalidParameter("remap has wrong shape".into()));
        }
    }
    let column_value =
        |z: usize, guess: usize| (0..ny).map(|y| j[y][z] * gain.gain(y, guess)).sum::<f64>();
    Ok((0..h.n_cols())
        .map(|z| match remap {
            Some(r) => column_value(z, r[z]),
            None => (0..ny)
                .map(|g| column_value(z, g))
                .fold(f64::NEG_INFINITY, f64::max),
        })
        .sum())
}
