// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Analysis of a channel against every applicable bound, and the two output
//! renderings: `key = value` lines and a JSON object with the same keys.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::channel::{self, ChannelMatrix, LeakageFigures, PriorDistribution};
use crate::dp::{self, RatioBoundVerdict, Witness, EPS_TOLERANCE};
use crate::error::Result;
use crate::graph::{canonical_single_orbit_automorphism, AdjacencyGraph, GraphKind};
use crate::mechanism::alpha_closed_form;
use crate::query::{utility_binary, DatabaseUniverse, UtilityFigures};

/// Slack for bound comparisons.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num {
        value: f64,
        unit: Option<&'static str>,
    },
    Int(usize),
    Text(String),
    Bool(bool),
}

/// Ordered key/value document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Field)>,
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(
        &mut self,
        key: impl Into<String>,
        value: f64,
        unit: Option<&'static str>,
    ) -> &mut Self {
        self.entries.push((key.into(), Field::Num { value, unit }));
        self
    }

    pub fn int(&mut self, key: impl Into<String>, value: usize) -> &mut Self {
        self.entries.push((key.into(), Field::Int(value)));
        self
    }

    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.entries.push((key.into(), Field::Text(value.into())));
        self
    }

    pub fn flag(&mut self, key: impl Into<String>, value: bool) -> &mut Self {
        self.entries.push((key.into(), Field::Bool(value)));
        self
    }

    pub fn extend(&mut self, prefix: &str, other: Report) -> &mut Self {
        for (k, v) in other.entries {
            self.entries.push((format!("{prefix}{k}"), v));
        }
        self
    }

    pub fn entries(&self) -> &[(String, Field)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Field> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Numeric value of `key`, if present.
    pub fn number(&self, key: &str) -> Option<f64> {
        match self.get(key)? {
            Field::Num { value, .. } => Some(*value),
            Field::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let val = match v {
                Field::Num {
                    value,
                    unit: Some(u),
                } => format!("{} {u}", fmt_num(*value)),
                Field::Num { value, unit: None } => fmt_num(*value),
                Field::Int(i) => i.to_string(),
                Field::Text(t) => t.clone(),
                Field::Bool(b) => b.to_string(),
            };
            s.push_str(&format!("{k} = {val}\n"));
        }
        s
    }

    /// Full-precision JSON; non-finite numbers become the strings `inf`/`-inf`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.entries {
            let val = match v {
                Field::Num { value, .. } => serde_json::Number::from_f64(*value)
                    .map(Value::Number)
                    .unwrap_or_else(|| Value::String(fmt_num(*value))),
                Field::Int(i) => Value::from(*i),
                Field::Text(t) => Value::String(t.clone()),
                Field::Bool(b) => Value::Bool(*b),
            };
            map.insert(k.clone(), val);
        }
        Value::Object(map)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    /// The quantity that must stay below the bound (bits, or a probability for utility).
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &'static str, value: f64, bound: f64) -> Self {
        BoundCheck {
            name,
            value,
            bound,
            pass: value <= bound + BOUND_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub rows: usize,
    pub cols: usize,
    pub graph: String,
    pub min_epsilon: f64,
    pub witness: Option<Witness>,
    pub leakage: LeakageFigures,
    pub utility: UtilityFigures,
    pub remap_labels: Vec<String>,
    pub bounds: Vec<BoundCheck>,
    /// Bounds that were skipped, with the reason.
    pub skipped: Vec<(String, String)>,
}

/// Largest uniform-prior leakage over all individual channels.
pub fn max_individual_leakage(m: &ChannelMatrix, universe: &DatabaseUniverse) -> Result<f64> {
    let mut worst = 0.0f64;
    for (target, rest) in dp::individual_contexts(universe) {
        let k = dp::individual_channel(m, universe, target, &rest)?;
        worst = worst.max(channel::capacity(&k));
    }
    Ok(worst)
}

/// Diameter and border constant when `g` meets the utility-bound hypotheses.
pub fn utility_bound_shape(g: &AdjacencyGraph) -> std::result::Result<(usize, usize), String> {
    if !g.is_connected() {
        return Err("graph is disconnected".into());
    }
    let c = g.border_constant().map_err(|e| e.to_string())?;
    if canonical_single_orbit_automorphism(g).is_none() {
        return Err("no built-in single-orbit automorphism".into());
    }
    Ok((g.diameter().unwrap_or(0), c))
}

pub fn analyze(
    m: &ChannelMatrix,
    g: &AdjacencyGraph,
    p: &PriorDistribution,
) -> Result<AnalysisReport> {
    let (min_epsilon, witness) = dp::min_epsilon_with(Default::default(), m, g)?;
    let leakage = channel::min_entropy_leakage(p, m)?;
    let utility = utility_binary(p, m)?;
    let remap_labels = utility
        .remap
        .iter()
        .map(|&y| m.input().label(y).to_string())
        .collect();
    let capacity = leakage.capacity;
    let mut bounds = Vec::new();
    let mut skipped = Vec::new();
    let mut skip = |name: &str, why: &str| skipped.push((name.to_string(), why.to_string()));

    if !min_epsilon.is_finite() {
        skip(
            "all",
            "channel is not differentially private for any finite eps",
        );
    } else {
        if let GraphKind::Hamming { u, v } = g.kind() {
            let b = dp::bound_whole_database(u, v, min_epsilon)?.bound_bits;
            bounds.push(BoundCheck::new("whole_database", capacity, b));
            let full = v.pow(u as u32);
            let r = m.nonzero_columns();
            if r < full {
                let b = dp::bound_range_restricted(u, v, min_epsilon, r)?.bound_bits;
                bounds.push(BoundCheck::new("range_restricted", capacity, b));
            } else {
                skip(
                    "range_restricted",
                    "output range is not smaller than the universe",
                );
            }
            let universe = DatabaseUniverse::digits(u, v)?;
            let worst = max_individual_leakage(m, &universe)?;
            bounds.push(BoundCheck::new(
                "individual",
                worst,
                dp::bound_individual(min_epsilon)?.bound_bits,
            ));
        } else {
            skip("whole_database", "graph is not a hamming graph");
        }

        let pairs = dp::all_pairs_epsilon(m);
        if pairs.is_finite() {
            match dp::check_epsilon_ratio_bound(m, p, pairs)? {
                RatioBoundVerdict::Holds { leakage, bound }
                | RatioBoundVerdict::Violated { leakage, bound } => {
                    bounds.push(BoundCheck::new("epsilon_ratio", leakage, bound))
                }
                RatioBoundVerdict::HypothesisNotMet { .. } => {
                    skip("epsilon_ratio", "hypothesis not met")
                }
            }
        } else {
            skip("epsilon_ratio", "some pair of rows has an infinite ratio");
        }

        let uniform = p.probs().iter().all(|&x| (x - p.probs()[0]).abs() < 1e-12);
        match utility_bound_shape(g) {
            Ok(_) if !uniform => skip("utility", "prior is not uniform"),
            Ok(_) if min_epsilon <= EPS_TOLERANCE => skip("utility", "eps is zero"),
            Ok((n, c)) if n >= 1 && c >= 1 => {
                let a = alpha_closed_form(n, c, min_epsilon)?;
                bounds.push(BoundCheck::new("utility", utility.utility, a));
            }
            Ok(_) => skip("utility", "graph has a single node"),
            Err(why) => skip("utility", &why),
        }
    }

    Ok(AnalysisReport {
        rows: m.n_rows(),
        cols: m.n_cols(),
        graph: g.kind().to_string(),
        min_epsilon,
        witness,
        leakage,
        utility,
        remap_labels,
        bounds,
        skipped,
    })
}

impl AnalysisReport {
    pub fn all_pass(&self) -> bool {
        self.bounds.iter().all(|b| b.pass)
    }

    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        r.int("rows", self.rows)
            .int("cols", self.cols)
            .text("graph", self.graph.clone())
            .num("min_epsilon", self.min_epsilon, Some("nats"));
        if let Some(w) = self.witness {
            r.text(
                "witness",
                format!("rows {} ~ {}, column {}", w.row, w.other, w.column),
            );
        }
        r.num("h_inf_prior", self.leakage.h_inf_prior, Some("bits"))
            .num(
                "h_inf_posterior",
                self.leakage.h_inf_posterior,
                Some("bits"),
            )
            .num("leakage", self.leakage.leakage, Some("bits"))
            .num("capacity", self.leakage.capacity, Some("bits"))
            .num("utility", self.utility.utility, None)
            .text("remap", self.remap_labels.join(","))
            .num("duality_gap", self.utility.duality_gap(), None);
        for b in &self.bounds {
            let unit = if b.name == "utility" {
                None
            } else {
                Some("bits")
            };
            r.num(format!("bound.{}", b.name), b.bound, unit)
                .num(format!("bound.{}.value", b.name), b.value, unit)
                .flag(format!("bound.{}.pass", b.name), b.pass);
        }
        for (name, why) in &self.skipped {
            r.text(format!("skipped.{name}"), why.clone());
        }
        r
    }
}
