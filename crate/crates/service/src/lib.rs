//! HTTP/JSON game-state service. All rules run here; clients only render
//! what the API returns.

pub mod error;
pub mod play;
pub mod routes;
pub mod store;
pub mod views;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::routing::{get, post};
use axum::Router;
use clap::Parser;
use tokio::task::JoinHandle;
use tower_http::services::ServeDir;
use tower_http::trace::TraceLayer;

use qubitquest_core::Content;

use crate::store::ProfileStore;

#[derive(Clone, Debug, Parser)]
#[command(name = "qq-server", version, about = "QubitQuest game service")]
pub struct Config {
    #[arg(long, env = "QQ_PORT", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, env = "QQ_BIND", default_value = "0.0.0.0")]
    pub bind: String,
    #[arg(long, env = "QQ_DATA_DIR", default_value = "./data")]
    pub data_dir: PathBuf,
    #[arg(long, env = "QQ_LEVELS_DIR", default_value = "./levels")]
    pub levels_dir: PathBuf,
    #[arg(long, env = "QQ_QUIZZES_DIR", default_value = "./quizzes")]
    pub quizzes_dir: PathBuf,
    /// Built web client to serve at `/`.
    #[arg(long, env = "QQ_STATIC_DIR")]
    pub static_dir: Option<PathBuf>,
    /// Shuffle quiz options per player and attempt.
    #[arg(long, env = "QQ_SHUFFLE_OPTIONS")]
    pub shuffle_options: bool,
}

#[derive(Clone)]
pub struct AppState {
    pub content: Arc<Content>,
    pub store: Arc<ProfileStore>,
    pub shuffle_options: bool,
}

impl AppState {
    pub fn load(config: &Config) -> anyhow::Result<Self> {
        let content = Content::load(&config.levels_dir, &config.quizzes_dir)?;
        let store = ProfileStore::open(&config.data_dir)?;
        Ok(AppState {
            content: Arc::new(content),
            store: Arc::new(store),
            shuffle_options: config.shuffle_options,
        })
    }
}

pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let level = "/api/games/{game}/levels/{level}";
    let api = Router::new()
        .route("/api/profiles", post(routes::create_profile))
        .route("/api/profile", get(routes::get_profile))
        .route("/api/games", get(routes::list_games))
        .route(level, get(routes::get_level))
        .route(
            &format!("{level}/session"),
            post(routes::start_session).get(routes::get_session),
        )
        .route(&format!("{level}/moves"), post(routes::make_move))
        .route("/api/quizzes", get(routes::list_quizzes))
        .route("/api/quizzes/{id}", get(routes::get_quiz))
        .route("/api/quizzes/{id}/submit", post(routes::submit_quiz))
        .with_state(state);
    let app = match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    };
    app.layer(TraceLayer::new_for_http())
}

/// Serves on an ephemeral loopback port in the background. Used by tests
/// and embedders.
pub async fn spawn_local(state: AppState) -> std::io::Result<(SocketAddr, JoinHandle<()>)> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    let handle = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, router(state, None)).await {
            tracing::error!(error = %e, "server stopped");
        }
    });
    Ok((addr, handle))
}

/// Binds and serves until the process is stopped.
pub async fn serve(config: Config) -> anyhow::Result<()> {
    let state = AppState::load(&config)?;
    tracing::info!(
        levels = state.content.bloch.len() + state.content.entanglement.len() + state.content.circuits.len(),
        quizzes = state.content.quizzes.len(),
        profiles = state.store.len(),
        "content loaded"
    );
    let listener = tokio::net::TcpListener::bind((config.bind.as_str(), config.port)).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state, config.static_dir)).await?;
    Ok(())
}
