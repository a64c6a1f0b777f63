use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use ppco_service::{router, ServiceConfig};

/// Serve filtering, export and the change workflow over HTTP.
#[derive(Debug, Parser)]
#[command(name = "ppco-serve", version)]
struct Args {
    /// TOML file with `listen`, `snapshot`, `event_log` and `now` keys. Flags win.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "ADDR")]
    listen: Option<SocketAddr>,
    /// Shorthand for --listen 127.0.0.1:PORT.
    #[arg(long, conflicts_with = "listen")]
    port: Option<u16>,
    #[arg(long, value_name = "PATH")]
    snapshot: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    event_log: Option<PathBuf>,
    #[arg(long, value_name = "DATE")]
    now: Option<String>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = match &args.config {
        Some(path) => match ServiceConfig::from_file(path) {
            Ok(config) => config,
            Err(err) => return fail(err),
        },
        None => ServiceConfig::default(),
    };
    if let Some(listen) = args.listen {
        config.listen = listen;
    }
    if let Some(port) = args.port {
        config.listen = ([127, 0, 0, 1], port).into();
    }
    config.snapshot = args.snapshot.or(config.snapshot);
    config.event_log = args.event_log.or(config.event_log);
    config.now = args.now.or(config.now);

    let service = match config.build() {
        Ok(service) => service,
        Err(err) => return fail(err),
    };
    let listener = match tokio::net::TcpListener::bind(config.listen).await {
        Ok(listener) => listener,
        Err(err) => return fail(format!("Io: cannot bind {}: {err}", config.listen)),
    };
    eprintln!("listening on {}", config.listen);
    if let Err(err) = axum::serve(listener, router(service)).await {
        return fail(format!("Io: {err}"));
    }
    ExitCode::SUCCESS
}

fn fail(err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::FAILURE
}
