//! `bigraph`: generate extremal families, compute spectra and bounds, close
//! and decide Hamiltonicity, and run verification campaigns.
//!
//! Exit codes: 0 success (or campaign with no counterexamples); 1 campaign
//! counterexample or failed audit; 2 usage or runtime error; 3 negative
//! decision from `hamilton`.

use bigraph::codec;
use bigraph::families::{self, FamilySpec};
use bigraph::graph::BipartiteGraph;
use bigraph::hamiltonian;
use bigraph::search::{self, CampaignConfig, EnumFilter, Mode, TheoremId, VerificationReport};
use bigraph::spectral::{self, COMPARISON_SLACK, DEFAULT_TOL};
use bigraph::Scalar;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bigraph",
    version,
    about = "Bipartite Hamiltonicity and spectral-bound toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphInput {
    /// Graph: a compact string (`m:n:HEX`), inline JSON, a file path, or `-`
    /// for standard input.
    graph: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Dense,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named family member and print it.
    Gen {
        /// Family name: B, Q, R, S, T, Gamma0, Lspider, L1, L2 (case-insensitive).
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Emit the compact `m:n:HEX` form instead of JSON.
        #[arg(long, conflicts_with = "json")]
        compact: bool,
        /// Emit JSON (default).
        #[arg(long)]
        json: bool,
    },
    /// Enumerate graphs on fixed partition sizes, one compact line each.
    Enum {
        #[arg(long)]
        m: usize,
        /// Size of the second class.
        #[arg(long = "ny")]
        n_y: usize,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        #[arg(long, default_value_t = 0)]
        min_edges: usize,
        #[arg(long)]
        max_edges: Option<usize>,
        /// One representative per isomorphism class.
        #[arg(long)]
        dedup: bool,
        /// Dense mode: only graphs whose quasi-complement has at most this
        /// many edges.
        #[arg(long)]
        dense: Option<usize>,
        /// Print only the number of graphs.
        #[arg(long)]
        count_only: bool,
    },
    /// Spectral radius and signless Laplacian spectral radius as JSON.
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        tol: Option<Scalar>,
    },
    /// The four spectral inequalities as CSV rows.
    Bounds {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        tol: Option<Scalar>,
    },
    /// Bipartite closure with the addition trace, as JSON.
    Closure {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Exact spanning path/cycle search; exits 3 when none exists.
    Hamilton {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, conflicts_with = "cycle")]
        path: bool,
        #[arg(long)]
        cycle: bool,
        /// Vertex cap for the exact search.
        #[arg(long, default_value_t = hamiltonian::DEFAULT_VERTEX_LIMIT)]
        limit: usize,
    },
    /// Maximum biclique (maximizing total size, then the larger side).
    Biclique {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Run a verification campaign; exits 1 if a counterexample is found.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Dense mode: missing-edge budget (defaults to the theorem's edge
        /// bound).
        #[arg(long)]
        max_missing: Option<usize>,
        /// Random mode: number of samples.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        /// Random mode: edge probability.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Random mode: base seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Canonical deduplication of the scanned stream.
        #[arg(long)]
        dedup: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Cap on the number of graphs scanned.
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        tol: Option<Scalar>,
        /// Write the JSON report to this file as well.
        #[arg(long)]
        out: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Audit one extremal family member; exits 1 if a check fails.
    Audit {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

fn default_tol() -> Scalar {
    std::env::var("SPECTRAL_TOL")
        .ok()
        .and_then(|v| v.parse::<Scalar>().ok())
        .filter(|t| *t > 0.0)
        .unwrap_or(DEFAULT_TOL)
}

fn read_graph(arg: &str) -> Result<BipartiteGraph, String> {
    let text = if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| e.to_string())?;
        buf
    } else if arg.trim_start().starts_with('{') || looks_compact(arg) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?
    };
    codec::parse_graph(&text).map_err(|e| e.to_string())
}

fn looks_compact(s: &str) -> bool {
    let mut parts = s.split(':');
    matches!(
        (parts.next(), parts.next(), parts.next(), parts.next()),
        (Some(a), Some(b), Some(c), None)
            if a.chars().all(|ch| ch.is_ascii_digit())
                && !a.is_empty()
                && b.chars().all(|ch| ch.is_ascii_digit())
                && !b.is_empty()
                && c.chars().all(|ch| ch.is_ascii_hexdigit())
    )
}

fn graph_json_value(g: &BipartiteGraph) -> serde_json::Value {
    serde_json::from_str(&codec::to_json(g)).expect("graph JSON is valid")
}

fn vertex_json(v: bigraph::VertexId) -> serde_json::Value {
    serde_json::json!({ "side": v.side.to_string(), "index": v.index })
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Gen {
            family,
            n,
            k,
            compact,
            json: _,
        } => {
            let spec = FamilySpec::parse(&family, n, k).map_err(|e| e.to_string())?;
            let g = families::build(spec).map_err(|e| e.to_string())?;
            if compact {
                println!("{}", codec::to_compact(&g));
            } else {
                println!("{}", codec::to_json(&g));
            }
            Ok(0)
        }
        Command::Enum {
            m,
            n_y,
            min_degree,
            min_edges,
            max_edges,
            dedup,
            dense,
            count_only,
        } => {
            let filter = EnumFilter {
                min_degree,
                min_edges,
                max_edges,
                dedup,
            };
            let stream = match dense {
                Some(max_missing) => {
                    search::enum_dense(m, n_y, max_missing, filter).map_err(|e| e.to_string())?
                }
                None => search::enum_all(m, n_y, filter).map_err(|e| e.to_string())?,
            };
            if count_only {
                println!("{}", stream.count());
            } else {
                for g in stream {
                    println!("{}", codec::to_compact(&g));
                }
            }
            Ok(0)
        }
        Command::Spectrum { input, tol } => {
            let g = read_graph(&input.graph)?;
            let tol = tol.unwrap_or_else(default_tol);
            let report = spectral::spectral_report(&g, tol).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
            Ok(0)
        }
        Command::Bounds { input, tol } => {
            let g = read_graph(&input.graph)?;
            let tol = tol.unwrap_or_else(default_tol);
            let slack = COMPARISON_SLACK;
            println!("bound,left,right,satisfied,slack");
            let mut failures = Vec::new();
            match spectral::check_nosal(&g, tol, slack) {
                Ok(c) => println!("{}", c.csv_row()),
                Err(e) => failures.push(format!("nosal: {e}")),
            }
            let balanced = if g.is_balanced() {
                g.clone()
            } else {
                eprintln!(
                    "note: padding ({}, {}) with isolated vertices for the balanced bound",
                    g.x_count(),
                    g.y_count()
                );
                g.pad_to_balanced()
            };
            match spectral::check_q_upper(&balanced, tol, slack) {
                Ok(c) => println!("{}", c.csv_row()),
                Err(e) => failures.push(format!("q_upper: {e}")),
            }
            match spectral::check_rho_lower(&g, tol, slack) {
                Ok(c) => println!("{}", c.csv_row()),
                Err(e) => failures.push(format!("rho_lower: {e}")),
            }
            match spectral::check_q_lower(&g, tol, slack) {
                Ok(c) => println!("{}", c.csv_row()),
                Err(e) => failures.push(format!("q_lower: {e}")),
            }
            if failures.is_empty() {
                Ok(0)
            } else {
                Err(failures.join("; "))
            }
        }
        Command::Closure { input } => {
            let g = read_graph(&input.graph)?;
            let trace = hamiltonian::b_closure(&g).map_err(|e| e.to_string())?;
            let out = serde_json::json!({
                "graph": graph_json_value(&trace.graph),
                "added": trace.additions.len(),
                "additions": trace.additions,
            });
            println!("{out}");
            Ok(0)
        }
        Command::Hamilton {
            input,
            path,
            cycle,
            limit,
        } => {
            let g = read_graph(&input.graph)?;
            if path == cycle {
                return Err("choose exactly one of --path or --cycle".into());
            }
            let (found, vertices) = if path {
                match hamiltonian::hamilton_path_with_limit(&g, limit).map_err(|e| e.to_string())? {
                    Some(cert) => (true, cert.vertices),
                    None => (false, vec![]),
                }
            } else {
                match hamiltonian::hamilton_cycle_with_limit(&g, limit)
                    .map_err(|e| e.to_string())?
                {
                    Some(cert) => (true, cert.vertices),
                    None => (false, vec![]),
                }
            };
            let out = serde_json::json!({
                "found": found,
                "kind": if path { "path" } else { "cycle" },
                "certificate": vertices.into_iter().map(vertex_json).collect::<Vec<_>>(),
            });
            println!("{out}");
            Ok(if found { 0 } else { 3 })
        }
        Command::Biclique { input } => {
            let g = read_graph(&input.graph)?;
            let w = hamiltonian::max_biclique(&g).map_err(|e| e.to_string())?;
            let out = serde_json::json!({
                "s": w.s(),
                "t": w.t(),
                "order": w.order(),
                "x_set": w.x_set,
                "y_set": w.y_set,
            });
            println!("{out}");
            Ok(0)
        }
        Command::Verify {
            theorem,
            n,
            k,
            mode,
            max_missing,
            samples,
            p,
            seed,
            dedup,
            workers,
            budget,
            tol,
            out,
            format,
        } => {
            let id: TheoremId = theorem
                .parse()
                .map_err(|e: search::SearchError| e.to_string())?;
            let mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Dense => Mode::Dense { max_missing },
                ModeArg::Random => Mode::Random {
                    samples,
                    edge_probability: p,
                    seed,
                },
            };
            let cfg = CampaignConfig {
                mode,
                dedup,
                workers,
                tol: tol.unwrap_or_else(default_tol),
                budget,
                ..CampaignConfig::default()
            };
            let report = search::verify(id, n, k, &cfg).map_err(|e| e.to_string())?;
            emit_report(&report, format, out.as_deref())?;
            Ok(if report.counterexample_count == 0 {
                0
            } else {
                1
            })
        }
        Command::Audit {
            family,
            n,
            k,
            format,
        } => {
            let spec = FamilySpec::parse(&family, n, k).map_err(|e| e.to_string())?;
            let report = search::extremal_audit(spec).map_err(|e| e.to_string())?;
            emit_report(&report, format, None)?;
            Ok(if report.confirmed == 1 { 0 } else { 1 })
        }
    }
}

fn emit_report(
    report: &VerificationReport,
    format: OutputFormat,
    out: Option<&str>,
) -> Result<(), String> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    if let Some(path) = out {
        std::fs::write(path, &json).map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    match format {
        OutputFormat::Json => println!("{json}"),
        OutputFormat::Csv => {
            println!("{}", VerificationReport::csv_header());
            println!("{}", report.csv_row());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
