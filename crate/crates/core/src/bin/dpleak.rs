// Copyright 2026 The dpleak Authors
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. ε flags are natural-log scale (`--eps 0.693147`
//! means e^ε = 2); leakage and bounds print in bits.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dpleak::channel::{self, ChannelMatrix};
use dpleak::dp;
use dpleak::graph::{build_graph, AdjacencyGraph};
use dpleak::io::{format_sig17, parse_prior_spec, read_matrix, write_matrix, write_matrix_file};
use dpleak::mechanism::{
    build_geometric, build_optimal_utility, build_tight_leakage, OptimalOptions,
};
use dpleak::query::{induced_adjacency, parse_query_spec, utility_binary, DatabaseUniverse};
use dpleak::report::{analyze, max_individual_leakage, Report};
use dpleak::Error;

#[derive(Parser)]
#[command(
    name = "dpleak",
    version,
    about = "Leakage, utility and bounds for differentially private channels"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Privacy, leakage, utility and bound checks for one matrix
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// hamming:U:V, ring:N, clique:N, line:N or file:PATH
        #[arg(long)]
        graph: String,
        /// uniform, file:PATH or p=0.1,0.2,...
        #[arg(long, default_value = "uniform")]
        prior: String,
        /// Also report whether the matrix is ε-DP for this ε (nats)
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Evaluate the leakage bounds
    Bound {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        eps: f64,
        /// Number of distinct outputs, for the range-restricted bound
        #[arg(long)]
        r: Option<usize>,
    },
    /// Construct a mechanism and write it as CSV
    Build {
        #[command(subcommand)]
        kind: BuildKind,
    },
    /// Utility and leakage of several matrices under one prior
    Compare {
        #[arg(long = "matrix", required = true)]
        matrices: Vec<PathBuf>,
        #[arg(long, default_value = "uniform")]
        prior: String,
    },
    /// Leakage about one individual versus the per-individual bound
    Individual {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        /// Position of the individual, 0-based
        #[arg(long)]
        target: Option<usize>,
        /// Values of the other individuals in position order, e.g. 0,1
        #[arg(long, value_delimiter = ',')]
        rest: Option<Vec<usize>>,
    },
    /// Whole-database bound as CSV rows `v,eps,bound_bits`
    Curve {
        #[arg(long, default_value_t = 100)]
        u: usize,
        #[arg(long, value_delimiter = ',', default_value = "2,10,100")]
        v: Vec<usize>,
        #[arg(long, default_value_t = 10.0)]
        eps_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum BuildKind {
    /// Leakage-maximizing ε-DP channel on Val^u
    Tight {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Utility-maximizing mechanism on a graph of answers
    Optimal {
        /// Answer graph spec
        #[arg(long, conflicts_with = "query", required_unless_present = "query")]
        graph: Option<String>,
        /// Derive the answer graph from a query: count:U:V:T, argmax:U:CITIES:CANDS:C, file:U:V:PATH
        #[arg(long)]
        query: Option<String>,
        #[arg(long)]
        eps: f64,
        /// Fall back to a supergraph meeting the optimality hypotheses
        #[arg(long)]
        augment: bool,
        /// Explicit supergraph spec to build on
        #[arg(long)]
        supergraph: Option<String>,
        /// Single-orbit automorphism as a comma-separated permutation
        #[arg(long, value_delimiter = ',')]
        automorphism: Option<Vec<usize>>,
        #[command(flatten)]
        out: Output,
    },
    /// Truncated geometric mechanism on {0..n}
    Geometric {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        lambda: f64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Output {
    /// Write the matrix here instead of stdout
    #[arg(short = 'o', long = "output")]
    path: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_)
            | Error::GraphSpec(_)
            | Error::Io(_)
            | Error::TooLarge(_)
            | Error::Index(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Graph over the matrix's inputs; built-in specs are positional.
fn graph_for(spec: &str, m: &ChannelMatrix) -> CliResult<AdjacencyGraph> {
    let g = build_graph(spec)?;
    if spec.starts_with("file:") || g.nodes() == m.input() {
        return Ok(g);
    }
    Ok(g.with_nodes(m.input().clone())?)
}

fn emit(format: Format, report: &Report) -> String {
    match format {
        Format::Text => report.render_text(),
        Format::Json => report.render_json(),
    }
}

fn write_or_print(
    m: &ChannelMatrix,
    out: &Output,
    summary: Report,
    format: Format,
) -> CliResult<String> {
    match &out.path {
        Some(p) => {
            write_matrix_file(m, p)?;
            let mut r = Report::new();
            r.text("written", p.display().to_string());
            r.extend("", summary);
            Ok(emit(format, &r))
        }
        None => {
            let mut buf = Vec::new();
            write_matrix(m, &mut buf)?;
            Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
        }
    }
}

fn run(cli: Cli) -> CliResult<String> {
    let format = cli.format;
    match cli.command {
        Command::Analyze {
            matrix,
            graph,
            prior,
            eps,
        } => {
            let m = read_matrix(&matrix)?;
            let g = graph_for(&graph, &m)?;
            let p = parse_prior_spec(&prior, m.input())?;
            let a = analyze(&m, &g, &p)?;
            let mut r = a.to_report();
            if let Some(eps) = eps {
                let v = dp::verify_dp(&m, &g, eps)?;
                r.num("eps", eps, Some("nats"))
                    .flag("satisfies", v.satisfies);
            }
            Ok(emit(format, &r))
        }
        Command::Bound { u, v, eps, r } => {
            let mut rep = Report::new();
            rep.num(
                "B",
                dp::bound_whole_database(u, v, eps)?.bound_bits,
                Some("bits"),
            );
            if let Some(r) = r {
                let b = dp::bound_range_restricted(u, v, eps, r)?;
                rep.num("range_restricted", b.bound_bits, Some("bits"))
                    .int("ell", b.ell.unwrap_or(0));
            }
            rep.num(
                "individual",
                dp::bound_individual(eps)?.bound_bits,
                Some("bits"),
            );
            Ok(emit(format, &rep))
        }
        Command::Build { kind } => match kind {
            BuildKind::Tight { u, v, eps, out } => {
                let m = build_tight_leakage(u, v, eps)?;
                let mut s = Report::new();
                s.num("eps", eps, Some("nats"))
                    .num("alpha", m.entry(0, 0), None)
                    .num("capacity", channel::capacity(&m), Some("bits"));
                write_or_print(&m, &out, s, format)
            }
            BuildKind::Optimal {
                graph,
                query,
                eps,
                augment,
                supergraph,
                automorphism,
                out,
            } => {
                let g = match (graph, query) {
                    (Some(spec), _) => build_graph(&spec)?,
                    (None, Some(q)) => induced_adjacency(&parse_query_spec(&q)?)?,
                    (None, None) => return Err(Failure::Usage("need --graph or --query".into())),
                };
                let supergraph = supergraph
                    .map(|s| build_graph(&s).and_then(|sg| sg.with_nodes(g.nodes().clone())))
                    .transpose()?;
                let opts = OptimalOptions {
                    automorphism,
                    augment,
                    supergraph,
                };
                let (m, params) = build_optimal_utility(&g, eps, &opts)?;
                let util =
                    utility_binary(&channel::PriorDistribution::uniform(m.input().clone()), &m)?;
                let mut s = Report::new();
                s.num("eps", eps, Some("nats"))
                    .num("alpha", params.alpha, None)
                    .int("n", params.n)
                    .int("c", params.c.unwrap_or(0))
                    .flag("antipodal_doubled", params.antipodal_doubled)
                    .text(
                        "supergraph",
                        params
                            .supergraph
                            .as_ref()
                            .map_or("none".to_string(), |g| g.kind().to_string()),
                    )
                    .flag("optimal_guaranteed", params.optimal_guaranteed)
                    .num("utility", util.utility, None);
                write_or_print(&m, &out, s, format)
            }
            BuildKind::Geometric { n, lambda, out } => {
                let m = build_geometric(n, lambda)?;
                let mut s = Report::new();
                s.num("lambda", lambda, None)
                    .num("eps", -lambda.ln(), Some("nats"));
                write_or_print(&m, &out, s, format)
            }
        },
        Command::Compare { matrices, prior } => {
            let mut rep = Report::new();
            let mut first_input = None;
            for (i, path) in matrices.iter().enumerate() {
                let m = read_matrix(path)?;
                let input = first_input.get_or_insert_with(|| m.input().clone());
                let p = parse_prior_spec(&prior, input)?;
                let l = channel::min_entropy_leakage(&p, &m)?;
                let util = utility_binary(&p, &m)?;
                let k = format!("m{}", i + 1);
                rep.text(format!("{k}.path"), path.display().to_string())
                    .num(format!("{k}.utility"), util.utility, None)
                    .num(format!("{k}.leakage"), l.leakage, Some("bits"))
                    .num(format!("{k}.capacity"), l.capacity, Some("bits"));
            }
            Ok(emit(format, &rep))
        }
        Command::Individual {
            matrix,
            u,
            v,
            target,
            rest,
        } => {
            let m = read_matrix(&matrix)?;
            let universe = DatabaseUniverse::digits(u, v)?;
            if m.n_rows() != universe.size() {
                return Err(Failure::Validation(format!(
                    "matrix has {} rows, Val^{u} over {v} values has {}",
                    m.n_rows(),
                    universe.size()
                )));
            }
            let g = AdjacencyGraph::hamming_over(&universe).with_nodes(m.input().clone())?;
            let eps = dp::min_epsilon(&m, &g)?;
            let leak = match (target, rest) {
                (Some(t), Some(rest)) => {
                    channel::capacity(&dp::individual_channel(&m, &universe, t, &rest)?)
                }
                (None, None) => max_individual_leakage(&m, &universe)?,
                _ => return Err(Failure::Usage("--target and --rest go together".into())),
            };
            let bound = if eps.is_finite() {
                dp::bound_individual(eps)?.bound_bits
            } else {
                f64::INFINITY
            };
            let mut rep = Report::new();
            rep.num("min_epsilon", eps, Some("nats"))
                .num("individual_leakage", leak, Some("bits"))
                .num("bound", bound, Some("bits"))
                .flag("pass", leak <= bound + 1e-9);
            Ok(emit(format, &rep))
        }
        Command::Curve {
            u,
            v,
            eps_max,
            points,
        } => {
            let grid = dp::linear_grid(eps_max, points);
            let pts = dp::curve_bound(u, &v, &grid)?;
            Ok(match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({ "u": u, "points": pts }))
                        .expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Text => {
                    let mut s = String::from("v,eps,bound_bits\n");
                    for p in pts {
                        s.push_str(&format!(
                            "{},{},{}\n",
                            p.v,
                            format_sig17(p.eps),
                            format_sig17(p.bound_bits)
                        ));
                    }
                    s
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("invalid input: {msg}");
            ExitCode::from(2)
        }
    }
}
