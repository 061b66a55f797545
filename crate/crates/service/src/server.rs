//! The HTTP front end: routing, the in-memory dataset store and lifecycle.

use std::collections::BTreeMap;
use std::io;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tokio::net::TcpListener;
use tokio::sync::watch;
use tokio::task::JoinHandle;
use tower_http::services::ServeDir;

use crate::api::{to_json, BacktestRequest, CreateDatasetRequest, Dataset, GraphRequest, LagsRequest, SignalRequest};
use crate::error::{ApiError, ErrorCode};

pub const DEFAULT_PORT: u16 = 8787;
pub const DEFAULT_DATA_DIR: &str = "./data";
pub const DEFAULT_UI_DIR: &str = "./ui/dist";

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    pub port: u16,
    pub data_dir: PathBuf,
    /// Static assets served under `/`; skipped when absent.
    pub ui_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            data_dir: PathBuf::from(DEFAULT_DATA_DIR),
            ui_dir: Some(PathBuf::from(DEFAULT_UI_DIR)),
        }
    }
}

impl ServiceConfig {
    /// Reads `CORRGRAPH_DATA_DIR`, `CORRGRAPH_PORT`, `CORRGRAPH_BIND` and
    /// `CORRGRAPH_UI_DIR`, falling back to the defaults.
    pub fn from_env() -> Result<Self, ServeError> {
        Self::from_lookup(|key| std::env::var(key).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ServeError> {
        let mut config = ServiceConfig::default();
        if let Some(dir) = lookup("CORRGRAPH_DATA_DIR") {
            config.data_dir = PathBuf::from(dir);
        }
        if let Some(port) = lookup("CORRGRAPH_PORT") {
            config.port = port
                .parse()
                .map_err(|_| ServeError::Config(format!("CORRGRAPH_PORT={port} is not a port number")))?;
        }
        if let Some(bind) = lookup("CORRGRAPH_BIND") {
            config.bind = bind
                .parse()
                .map_err(|_| ServeError::Config(format!("CORRGRAPH_BIND={bind} is not an IP address")))?;
        }
        if let Some(ui) = lookup("CORRGRAPH_UI_DIR") {
            config.ui_dir = Some(PathBuf::from(ui));
        }
        Ok(config)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("data directory {path} is not readable: {source}")]
    DataDir { path: PathBuf, source: io::Error },
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: io::Error },
    #[error("server error: {0}")]
    Io(#[from] io::Error),
}

/// Shared state: the data directory and loaded datasets. Registration is the
/// only mutation; datasets are immutable once inserted.
#[derive(Debug)]
pub struct AppState {
    data_dir: PathBuf,
    datasets: RwLock<BTreeMap<String, Arc<Dataset>>>,
}

impl AppState {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        AppState {
            data_dir: data_dir.into(),
            datasets: RwLock::new(BTreeMap::new()),
        }
    }

    fn dataset(&self, id: &str) -> Result<Arc<Dataset>, ApiError> {
        self.datasets
            .read()
            .expect("dataset store poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::new(ErrorCode::DatasetNotFound, format!("no dataset named {id:?}")))
    }

    fn insert(&self, dataset: Dataset) -> Result<Arc<Dataset>, ApiError> {
        let mut store = self.datasets.write().expect("dataset store poisoned");
        if store.contains_key(dataset.id()) {
            return Err(ApiError::new(
                ErrorCode::DatasetExists,
                format!("dataset {:?} is already loaded", dataset.id()),
            ));
        }
        let dataset = Arc::new(dataset);
        store.insert(dataset.id().to_string(), dataset.clone());
        Ok(dataset)
    }
}

fn json_response<T: Serialize>(status: StatusCode, body: &T) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], to_json(body)).into_response()
}

fn reply<T: Serialize>(result: Result<T, ApiError>) -> Response {
    match result {
        Ok(body) => json_response(StatusCode::OK, &body),
        Err(err) => json_response(err.code.status(), &err),
    }
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::invalid(format!("malformed request body: {e}")))
}

async fn create_dataset(State(state): State<Arc<AppState>>, body: Bytes) -> Response {
    let request: CreateDatasetRequest = match parse(&body) {
        Ok(r) => r,
        Err(e) => return reply::<()>(Err(e)),
    };
    let data_dir = state.data_dir.clone();
    let loaded = tokio::task::spawn_blocking(move || Dataset::load(&data_dir, &request))
        .await
        .unwrap_or_else(|e| Err(ApiError::new(ErrorCode::Internal, e.to_string())));
    match loaded.and_then(|d| state.insert(d)) {
        Ok(dataset) => json_response(StatusCode::CREATED, &dataset.handle()),
        Err(err) => reply::<()>(Err(err)),
    }
}

async fn list_datasets(State(state): State<Arc<AppState>>) -> Response {
    let store = state.datasets.read().expect("dataset store poisoned");
    let handles: Vec<_> = store.values().map(|d| d.handle()).collect();
    json_response(StatusCode::OK, &handles)
}

async fn get_dataset(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    reply(state.dataset(&id).map(|d| d.handle()))
}

async fn correlations(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> Response {
    reply(state.dataset(&id).and_then(|d| d.correlations()))
}

async fn graph(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Response {
    reply(state.dataset(&id).and_then(|d| d.graph(&parse::<GraphRequest>(&body)?)))
}

async fn backtest(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Response {
    reply(
        state
            .dataset(&id)
            .and_then(|d| d.backtest(&parse::<BacktestRequest>(&body)?)),
    )
}

async fn lags(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Response {
    reply(state.dataset(&id).and_then(|d| d.lags(&parse::<LagsRequest>(&body)?)))
}

async fn signal_backtest(State(state): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> Response {
    reply(
        state
            .dataset(&id)
            .and_then(|d| d.signal_backtest(&parse::<SignalRequest>(&body)?)),
    )
}

async fn unknown_endpoint() -> Response {
    let err = ApiError::invalid("unknown endpoint");
    json_response(StatusCode::NOT_FOUND, &err)
}

/// API routes under `/api/v1`, plus static UI assets under `/` when given.
pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/datasets", post(create_dataset).get(list_datasets))
        .route("/datasets/{id}", get(get_dataset))
        .route("/datasets/{id}/correlations", get(correlations))
        .route("/datasets/{id}/graph", post(graph))
        .route("/datasets/{id}/backtest", post(backtest))
        .route("/datasets/{id}/lags", post(lags))
        .route("/datasets/{id}/signal-backtest", post(signal_backtest))
        .fallback(unknown_endpoint)
        .with_state(state);
    let app = Router::new().nest("/api/v1", api);
    match ui_dir {
        Some(dir) if dir.is_dir() => app.fallback_service(ServeDir::new(dir)),
        _ => app,
    }
}

/// A running service. Dropping it does not stop the server; call
/// [`Server::shutdown`] and then [`Server::wait`].
pub struct Server {
    local_addr: SocketAddr,
    shutdown: watch::Sender<bool>,
    task: JoinHandle<io::Result<()>>,
}

impl Server {
    pub fn local_addr(&self) -> SocketAddr {
        self.local_addr
    }

    /// Stops accepting connections and lets in-flight requests finish.
    /// Repeated calls are no-ops.
    pub fn shutdown(&self) {
        self.shutdown.send_replace(true);
    }

    pub async fn wait(self) -> Result<(), ServeError> {
        match self.task.await {
            Ok(result) => Ok(result?),
            Err(join) => Err(ServeError::Io(io::Error::other(join))),
        }
    }
}

/// Binds the listener and starts serving in the background.
pub async fn serve(config: ServiceConfig) -> Result<Server, ServeError> {
    std::fs::read_dir(&config.data_dir).map_err(|source| ServeError::DataDir {
        path: config.data_dir.clone(),
        source,
    })?;
    let addr = SocketAddr::new(config.bind, config.port);
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })?;
    let local_addr = listener.local_addr()?;
    let app = router(Arc::new(AppState::new(config.data_dir)), config.ui_dir);

    let (shutdown, mut stopped) = watch::channel(false);
    let task = tokio::spawn(async move {
        axum::serve(listener, app)
            .with_graceful_shutdown(async move {
                let _ = stopped.wait_for(|&stop| stop).await;
            })
            .await
    });
    tracing::info!(%local_addr, "corrgraph service listening");
    Ok(Server {
        local_addr,
        shutdown,
        task,
    })
}

/// Serves until Ctrl-C or SIGTERM, then shuts down gracefully.
pub async fn run_until_signal(config: ServiceConfig) -> Result<(), ServeError> {
    let server = serve(config).await?;
    eprintln!("listening on http://{}", server.local_addr());
    shutdown_signal().await;
    server.shutdown();
    server.wait().await
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut sig) => {
                sig.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}
