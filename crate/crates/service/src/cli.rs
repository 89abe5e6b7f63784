//! `route` command line: load a graph file, run one algorithm, print the result.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use route_core::{Distance, Graph, NodeId};

use crate::run::{run_algorithm, AlgorithmRequest, AlgorithmResult, ResultKind};
use crate::store::GraphStore;

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_USAGE: i32 = 2;
pub const EXIT_FILE_NOT_FOUND: i32 = 3;
pub const EXIT_GRAPH_INVALID: i32 = 4;
pub const EXIT_ALGORITHM_ERROR: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "route", version, about = "Shortest paths, spanning trees, postman walks and tours over map graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shortest distances from a source node.
    Dijkstra {
        #[command(flatten)]
        io: GraphArgs,
        #[arg(long)]
        source: u64,
        /// Print only the route to this node.
        #[arg(long)]
        target: Option<u64>,
    },
    /// Shortest route visiting the waypoints in the given order.
    Floyd {
        #[command(flatten)]
        io: GraphArgs,
        /// Start, intermediate stops and destination, in order.
        #[arg(long, value_delimiter = ',', required = true)]
        waypoints: Vec<u64>,
    },
    /// Minimum spanning tree.
    Prim {
        #[command(flatten)]
        io: GraphArgs,
        /// Root node (defaults to the smallest id).
        #[arg(long)]
        source: Option<u64>,
    },
    /// Shortest closed walk covering every edge.
    Cpp {
        #[command(flatten)]
        io: GraphArgs,
        #[arg(long)]
        depot: u64,
    },
    /// Approximate shortest tour through every node.
    Tsp {
        #[command(flatten)]
        io: GraphArgs,
        #[arg(long)]
        start: Option<u64>,
        #[arg(long)]
        opt2: bool,
        #[arg(long)]
        opt3: bool,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "ROUTE_DATA_DIR", default_value = "data")]
        data_dir: PathBuf,
        #[arg(long, env = "ROUTE_BIND", default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Print the result as JSON.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (io, req) = match cli.command {
        Command::Serve { data_dir, bind } => return serve(data_dir, &bind, err),
        Command::Dijkstra { io, source, target } => {
            (io, AlgorithmRequest::Dijkstra { source: NodeId(source), target: target.map(NodeId) })
        }
        Command::Floyd { io, waypoints } => {
            (io, AlgorithmRequest::FloydRoute { waypoints: waypoints.into_iter().map(NodeId).collect() })
        }
        Command::Prim { io, source } => (io, AlgorithmRequest::Prim { root: source.map(NodeId) }),
        Command::Cpp { io, depot } => (io, AlgorithmRequest::ChinesePostman { depot: NodeId(depot) }),
        Command::Tsp { io, start, opt2, opt3 } => {
            (io, AlgorithmRequest::Christofides { start: start.map(NodeId), opt2, opt3, targets: None })
        }
    };

    let bytes = match std::fs::read(&io.graph) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", io.graph.display());
            return EXIT_FILE_NOT_FOUND;
        }
    };
    let parsed = std::str::from_utf8(&bytes)
        .map_err(|e| route_core::Error::Malformed(e.to_string()))
        .and_then(route_core::format::from_json);
    let graph = match parsed {
        Ok(g) => g,
        Err(e) => {
            let _ = writeln!(err, "error: {} is not a valid graph: {e}", io.graph.display());
            return EXIT_GRAPH_INVALID;
        }
    };
    let result = match run_algorithm(&graph, &req) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", req.name());
            return EXIT_ALGORITHM_ERROR;
        }
    };

    let json = serde_json::to_string_pretty(&result).expect("result serializes");
    if let Some(path) = &io.output {
        if let Err(e) = std::fs::write(path, format!("{json}\n")) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_BAD_USAGE;
        }
    }
    let shown = if io.json { format!("{json}\n") } else { render_text(&graph, &result) };
    let _ = out.write_all(shown.as_bytes());
    EXIT_OK
}

fn name(g: &Graph, n: NodeId) -> String {
    match g.node(n).ok().and_then(|n| n.label.as_deref()) {
        Some(label) => format!("node {n} ({label})"),
        None => format!("node {n}"),
    }
}

fn join<T: std::fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Human-readable summary of a result.
pub fn render_text(g: &Graph, r: &AlgorithmResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "algorithm: {}", r.algorithm);
    match r.kind {
        ResultKind::Tree => {
            if let Some(dist) = &r.distances {
                let _ = writeln!(s, "distances:");
                for (&n, d) in dist {
                    match d {
                        Distance::Finite(v) => {
                            let _ = writeln!(s, "  {}: {v}", name(g, n));
                        }
                        Distance::Unreachable => {
                            let _ = writeln!(s, "  {}: unreachable", name(g, n));
                        }
                    }
                }
                if let Some(pred) = &r.predecessors {
                    let _ = writeln!(s, "predecessors:");
                    for (n, p) in pred {
                        let _ = writeln!(s, "  {n} <- {p}");
                    }
                }
            } else {
                let _ = writeln!(s, "tree edges: {}", join(&r.edges, ", "));
                let _ = writeln!(s, "total weight: {}", r.cost);
            }
        }
        ResultKind::Route | ResultKind::Walk | ResultKind::Tour => {
            let mut seq = join(&r.nodes, " -> ");
            if r.kind == ResultKind::Tour {
                if let Some(first) = r.nodes.first() {
                    let _ = write!(seq, " -> {first}");
                }
            }
            let _ = writeln!(s, "nodes: {seq}");
            if !r.edges.is_empty() {
                let _ = writeln!(s, "edges: {}", join(&r.edges, ", "));
            }
            if let Some(initial) = r.initial_cost {
                let _ = writeln!(s, "initial cost: {initial}");
            }
            let _ = writeln!(s, "cost: {}", r.cost);
        }
    }
    let _ = writeln!(s, "elapsed: {:.3} ms", r.elapsed_ms);
    s
}

fn serve(data_dir: PathBuf, bind: &str, err: &mut dyn Write) -> i32 {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .try_init();
    let store = match GraphStore::open(&data_dir) {
        Ok(s) => Arc::new(s),
        Err(e) => {
            let _ = writeln!(err, "error: cannot open store at {}: {e}", data_dir.display());
            return EXIT_FILE_NOT_FOUND;
        }
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let outcome: io::Result<()> = runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind).await?;
        tracing::info!(addr = %listener.local_addr()?, root = %data_dir.display(), "listening");
        axum::serve(listener, crate::http::router(store))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
