use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use tracing_subscriber::EnvFilter;
use vesa_core::graph;
use vesa_core::ingest::read_sources_config;
use vesa_service::harvest::{HarvestOptions, Harvester};
use vesa_service::{load_catalog, AppState, ServiceConfig};

#[derive(Parser)]
#[command(name = "vesa", version, about = "Build, harvest and serve the VESA metadata graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest source documents into a graph dump.
    Build {
        #[arg(long)]
        sources: PathBuf,
        /// Directory holding one sub-directory of JSON documents per source.
        #[arg(long)]
        fixtures: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Service config; only its tokenizer setting is used.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Fail when more than this fraction of records is rejected.
        #[arg(long, default_value_t = 0.05)]
        max_reject_ratio: f64,
    },
    /// Download source listings into a cache directory.
    Harvest {
        #[arg(long)]
        sources: PathBuf,
        #[arg(long)]
        cache: PathBuf,
        #[arg(long, default_value_t = 3)]
        retries: u32,
        #[arg(long, default_value_t = 1000)]
        backoff_ms: u64,
        #[arg(long, default_value_t = 4)]
        concurrency: usize,
        #[arg(long, default_value_t = 100)]
        page_size: usize,
    },
    /// Serve a graph dump over HTTP.
    Serve {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

enum Failure {
    Config(String),
    Rejections(String),
    Io(String),
}

impl Failure {
    fn exit(self) -> ExitCode {
        let (code, message) = match self {
            Failure::Config(m) => (2, m),
            Failure::Rejections(m) => (3, m),
            Failure::Io(m) => (4, m),
        };
        eprintln!("vesa: {message}");
        ExitCode::from(code)
    }
}

fn read_config(path: Option<&Path>) -> Result<ServiceConfig, Failure> {
    let mut config = match path {
        Some(path) => ServiceConfig::load(path).map_err(|e| Failure::Config(e.to_string()))?,
        None => ServiceConfig::default(),
    };
    config.apply_env().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(config)
}

fn build(sources: &Path, fixtures: &Path, out: &Path, config: Option<&Path>, max_reject_ratio: f64) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&max_reject_ratio) {
        return Err(Failure::Config(format!("--max-reject-ratio {max_reject_ratio} is outside [0, 1]")));
    }
    let config = read_config(config)?;
    let tokenizer = config.tokenizer_config().map_err(|e| Failure::Config(e.to_string()))?;
    let sources = read_sources_config(sources).map_err(|e| Failure::Config(e.to_string()))?;
    let parsed = vesa_core::read_fixtures(sources, fixtures).map_err(|e| Failure::Io(e.to_string()))?;
    let (store, report, _) = vesa_core::build_graph(&parsed, &tokenizer).map_err(|e| Failure::Io(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));

    let rejected = report.ingest.records_rejected;
    if rejected as f64 > max_reject_ratio * report.documents_seen as f64 {
        return Err(Failure::Rejections(format!(
            "{rejected} of {} records rejected, above the {max_reject_ratio} threshold",
            report.documents_seen
        )));
    }
    graph::dump(&store, out).map_err(|e| Failure::Io(e.to_string()))
}

async fn harvest(sources: &Path, cache: &Path, options: HarvestOptions) -> Result<(), Failure> {
    let sources = read_sources_config(sources).map_err(|e| Failure::Config(e.to_string()))?;
    let harvester = Harvester::new(options).map_err(|e| Failure::Io(e.to_string()))?;
    let reports = harvester.harvest_all(&sources, cache).await.map_err(|e| Failure::Io(e.to_string()))?;
    println!("{}", serde_json::to_string_pretty(&reports).expect("report serializes"));
    Ok(())
}

async fn serve(graph: Option<PathBuf>, config: Option<&Path>) -> Result<(), Failure> {
    let config = read_config(config)?;
    let graph = graph
        .or_else(|| config.graph.clone())
        .ok_or_else(|| Failure::Config("no graph dump given (--graph or \"graph\" in the config)".into()))?;
    if !graph.is_file() {
        return Err(Failure::Io(format!("graph dump {} not found", graph.display())));
    }
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| Failure::Io(format!("cannot bind {addr}: {e}")))?;
    tracing::info!(%addr, "listening");

    let state = AppState::new(config.histogram_bins);
    spawn_load(state.clone(), graph.clone(), config.clone(), true);
    #[cfg(unix)]
    {
        let (state, graph, config) = (state.clone(), graph.clone(), config.clone());
        tokio::spawn(async move {
            use tokio::signal::unix::{signal, SignalKind};
            let Ok(mut hangup) = signal(SignalKind::hangup()) else { return };
            while hangup.recv().await.is_some() {
                tracing::info!("reloading {}", graph.display());
                spawn_load(state.clone(), graph.clone(), config.clone(), false);
            }
        });
    }
    vesa_service::serve(listener, state, &config).await.map_err(|e| Failure::Io(e.to_string()))
}

/// Loads off the request path; a failed first load ends the process.
fn spawn_load(state: AppState, graph: PathBuf, config: ServiceConfig, first: bool) {
    tokio::task::spawn_blocking(move || match load_catalog(&graph, &config) {
        Ok(catalog) => {
            tracing::info!(datasets = catalog.dataset_count(), "graph loaded");
            state.install(catalog);
        }
        Err(e) if first => {
            eprintln!("vesa: {}: {e}", graph.display());
            std::process::exit(4);
        }
        Err(e) => tracing::error!("reload failed, keeping the current graph: {e}"),
    });
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Build { sources, fixtures, out, config, max_reject_ratio } => {
            build(&sources, &fixtures, &out, config.as_deref(), max_reject_ratio)
        }
        Command::Harvest { sources, cache, retries, backoff_ms, concurrency, page_size } => {
            let options = HarvestOptions {
                retries,
                backoff: Duration::from_millis(backoff_ms),
                concurrency,
                page_size,
                ..HarvestOptions::default()
            };
            runtime().and_then(|rt| rt.block_on(harvest(&sources, &cache, options)))
        }
        Command::Serve { graph, config } => runtime().and_then(|rt| rt.block_on(serve(graph, config.as_deref()))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.exit(),
    }
}

fn runtime() -> Result<tokio::runtime::Runtime, Failure> {
    tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))
}
