//! HTTP API for Lucky 13: advice, strategy tables and live game sessions.

pub mod api;
pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::http::HeaderValue;
use axum::Router;
use tower_http::cors::{Any, CorsLayer};

pub use api::{router, AdviseResponse, GameView};
pub use store::{load_sessions, GameSession, SessionStore, StoreError};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    pub snapshot: Option<PathBuf>,
    /// Allowed browser origin; any origin when unset.
    pub cors_origin: Option<String>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { port: 8013, snapshot: None, cors_origin: None }
    }
}

pub fn app(store: Arc<SessionStore>, cors_origin: Option<&str>) -> Result<Router, String> {
    let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    let cors = match cors_origin {
        Some(o) => cors.allow_origin(o.parse::<HeaderValue>().map_err(|e| format!("bad CORS origin '{o}': {e}"))?),
        None => cors.allow_origin(Any),
    };
    Ok(router(store).layer(cors))
}

/// Binds and serves until ctrl-c.
pub async fn serve(config: ServiceConfig) -> Result<(), String> {
    let store = match &config.snapshot {
        Some(path) => SessionStore::with_snapshot(path).map_err(|e| e.to_string())?,
        None => SessionStore::new(),
    };
    let app = app(Arc::new(store), config.cors_origin.as_deref())?;
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| format!("bind {addr}: {e}"))?;
    log::info!("listening on {addr}");
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| e.to_string())
}
