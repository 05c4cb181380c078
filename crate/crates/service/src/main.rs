use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use fair_assess::batch::{read_ids, BatchJob};
use fair_assess::error::EXIT_PARTIAL;
use fair_assess::report::{render, ReportFormat};
use fair_assess::{router, AppError, AppState, ErrorClass, EvaluationRequest, ServiceConfig};
use fair_assess_core::semantic::export_test_graph_with;
use tracing::{error, info};

#[derive(Parser)]
#[command(
    name = "fair-assess",
    version,
    about = "Automated FAIR assessment of repository records"
)]
struct Cli {
    /// Service configuration (YAML). Built-in defaults when omitted.
    #[arg(long, global = true, env = "FAIR_ASSESS_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one identifier and print or write the report.
    Evaluate {
        #[arg(long)]
        id: String,
        #[arg(long)]
        plugin: Option<String>,
        #[arg(long)]
        lang: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every identifier listed in a file.
    Batch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        plugin: Option<String>,
        #[arg(long)]
        lang: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
    /// Run the HTTP API.
    Serve {
        #[arg(long)]
        host: Option<String>,
        /// 0 binds an ephemeral port.
        #[arg(long)]
        port: Option<u16>,
    },
    /// Write the test definitions as SKOS/Turtle.
    ExportOntology {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plugin: Option<String>,
        #[arg(long)]
        base_namespace: Option<String>,
        #[arg(long)]
        fair_namespace: Option<String>,
    },
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(e.class.exit_code())
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ServiceConfig, AppError> {
    match path {
        Some(p) => ServiceConfig::load(p),
        None => ServiceConfig::from_yaml("", Path::new(".")),
    }
}

fn state(cfg: &ServiceConfig) -> Result<AppState, AppError> {
    Ok(AppState::new(
        cfg.evaluator()?,
        &cfg.service.default_lang,
        cfg.service.pass_threshold,
    ))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), AppError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| AppError::new(ErrorClass::Config, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, AppError> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Evaluate {
            id,
            plugin,
            lang,
            format,
            out,
        } => {
            let st = state(&cfg)?;
            let resp = st.evaluate_all(&EvaluationRequest {
                id,
                repo: plugin,
                lang,
            })?;
            write_out(out.as_deref(), &render(&resp, format))?;
            Ok(0)
        }
        Command::Batch {
            input,
            plugin,
            lang,
            out,
            format,
        } => {
            let text = std::fs::read_to_string(&input).map_err(|e| {
                AppError::new(ErrorClass::Config, format!("{}: {e}", input.display()))
            })?;
            let ids = read_ids(&text);
            let st = state(&cfg)?;
            let plugin = plugin.unwrap_or_else(|| st.default_plugin.clone());
            let lang = st
                .evaluator
                .translations()
                .resolve_locale(lang.as_deref().unwrap_or(&st.default_lang));
            let outcome = BatchJob {
                evaluator: &st.evaluator,
                plugin: &plugin,
                lang: &lang,
                pass_threshold: st.pass_threshold,
                format,
                out_dir: &out,
            }
            .run(&ids)?;
            let failures = outcome.failures();
            info!(total = ids.len(), failures, "batch finished");
            Ok(if failures > 0 { EXIT_PARTIAL } else { 0 })
        }
        Command::Serve { host, port } => {
            let host = host.unwrap_or_else(|| cfg.service.host.clone());
            let port = port.unwrap_or(cfg.service.port);
            // the blocking HTTP client must exist before the runtime starts
            let st = Arc::new(state(&cfg)?);
            let rt = tokio::runtime::Runtime::new()
                .map_err(|e| AppError::new(ErrorClass::Internal, e.to_string()))?;
            rt.block_on(serve(st, &host, port))?;
            Ok(0)
        }
        Command::ExportOntology {
            out,
            plugin,
            base_namespace,
            fair_namespace,
        } => {
            let st = state(&cfg)?;
            let plugin_id = plugin.unwrap_or_else(|| st.default_plugin.clone());
            let plugin = st.evaluator.plugin(&plugin_id)?;
            let registry = st.evaluator.registry_for(&plugin_id)?;
            let base = base_namespace.unwrap_or_else(|| cfg.semantic.base_namespace.clone());
            let fair = fair_namespace.unwrap_or_else(|| cfg.semantic.fair_namespace.clone());
            let ttl = export_test_graph_with(registry, plugin.as_ref(), &base, &fair)
                .map_err(|e| AppError::new(ErrorClass::Usage, e.to_string()))?;
            write_out(Some(&out), &ttl)?;
            info!(path = %out.display(), "ontology written");
            Ok(0)
        }
    }
}

async fn serve(state: Arc<AppState>, host: &str, port: u16) -> Result<(), AppError> {
    let listener = tokio::net::TcpListener::bind((host, port))
        .await
        .map_err(|e| AppError::new(ErrorClass::Config, format!("bind {host}:{port}: {e}")))?;
    let addr: SocketAddr = listener
        .local_addr()
        .map_err(|e| AppError::new(ErrorClass::Internal, e.to_string()))?;
    info!(%addr, "listening");
    // machine-readable line for wrappers that start the server on port 0
    println!("listening on {addr}");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| AppError::new(ErrorClass::Internal, e.to_string()))
}
