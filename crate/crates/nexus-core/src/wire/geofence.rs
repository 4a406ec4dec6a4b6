//! The fence service: fence registry plus the homomorphic half of the
//! containment check, forwarded to the authority over HTTP.
//!
//! `POST /v1/locations` answers `202 Accepted` and hands the update to a
//! single worker that fans out over the registered fences in registration
//! order and posts one `/v1/evaluate` request per fence. The registry is
//! the only shared mutable state: concurrent reads, exclusive writes.

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{delete, post};
use axum::{Json, Router};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};
use tokio::sync::mpsc;

use crate::eval::{compute_intermediate, EncryptedLocation};
use crate::geometry::{make_axis_aligned_fence, GeoPoint, ScaleConfig};
use crate::paillier::PublicKey;
use crate::protocol::GeoFenceEntry;
use crate::wire::client::fetch_public_key;
use crate::wire::schema::{
    EvaluateRequest, FenceCreateRequest, FenceCreateResponse, LocationPublishRequest,
    WireIntermediate,
};
use crate::wire::{json_error, spawn_router, RunningService, ServiceConfig, WireServeError};

struct LocationJob {
    node_id: String,
    loc: EncryptedLocation,
}

struct GeofenceState {
    pk: Arc<PublicKey>,
    scale: ScaleConfig,
    registry: RwLock<Vec<GeoFenceEntry>>,
    next_id: AtomicU64,
    jobs: mpsc::UnboundedSender<LocationJob>,
}

/// Handle to the fence service's HTTP surface.
#[derive(Clone)]
pub struct GeofenceService {
    state: Arc<GeofenceState>,
}

impl GeofenceService {
    /// Builds a service around an already-known deployment key.
    pub fn with_public_key(pk: PublicKey, config: &ServiceConfig) -> Result<Self, WireServeError> {
        let authority_url = config
            .authority_url
            .clone()
            .ok_or(WireServeError::MissingAuthorityUrl)?;
        let client = reqwest::Client::builder()
            .timeout(config.timeout)
            .build()
            .expect("client construction cannot fail with static options");
        let pk = Arc::new(pk);
        let (jobs, rx) = mpsc::unbounded_channel();
        let state = Arc::new(GeofenceState {
            pk: pk.clone(),
            scale: config.scale,
            registry: RwLock::new(Vec::new()),
            next_id: AtomicU64::new(1),
            jobs,
        });
        tokio::spawn(run_worker(rx, state.clone(), client, authority_url));
        Ok(GeofenceService { state })
    }

    /// Fetches the deployment key from the configured authority, retrying
    /// until `config.timeout` elapses.
    pub async fn connect(config: &ServiceConfig) -> Result<Self, WireServeError> {
        let authority_url = config
            .authority_url
            .clone()
            .ok_or(WireServeError::MissingAuthorityUrl)?;
        let client = reqwest::Client::builder()
            .timeout(config.timeout)
            .build()
            .expect("client construction cannot fail with static options");
        let deadline = std::time::Instant::now() + config.timeout;
        let pk = loop {
            match fetch_public_key(&client, &authority_url).await {
                Ok(pk) => break pk,
                Err(err) if std::time::Instant::now() < deadline => {
                    tracing::debug!("authority not ready: {err}; retrying");
                    tokio::time::sleep(std::time::Duration::from_millis(100)).await;
                }
                Err(err) => return Err(WireServeError::AuthorityUnreachable(err.to_string())),
            }
        };
        Self::with_public_key(pk, config)
    }

    pub fn public_key(&self) -> &PublicKey {
        &self.state.pk
    }

    pub fn router(&self) -> Router {
        Router::new()
            .route("/v1/fences", post(post_fence))
            .route("/v1/fences/{fence_id}", delete(delete_fence))
            .route("/v1/locations", post(post_location))
            .with_state(self.state.clone())
    }

    pub async fn spawn(&self, addr: std::net::SocketAddr) -> std::io::Result<RunningService> {
        spawn_router(self.router(), addr).await
    }
}

async fn run_worker(
    mut rx: mpsc::UnboundedReceiver<LocationJob>,
    state: Arc<GeofenceState>,
    client: reqwest::Client,
    authority_url: String,
) {
    let evaluate_url = format!("{}/v1/evaluate", authority_url.trim_end_matches('/'));
    while let Some(job) = rx.recv().await {
        let entries = state
            .registry
            .read()
            .expect("registry lock poisoned")
            .clone();
        for entry in entries {
            let pk = state.pk.clone();
            let loc = job.loc.clone();
            let fence = entry.fence.clone();
            let computed = tokio::task::spawn_blocking(move || {
                compute_intermediate(&pk, &loc, &fence, &mut rand::thread_rng())
            })
            .await;
            let intermediate = match computed {
                Ok(Ok(intermediate)) => intermediate,
                Ok(Err(err)) => {
                    tracing::warn!("intermediate computation failed: {err}");
                    continue;
                }
                Err(err) => {
                    tracing::error!("computation task panicked: {err}");
                    continue;
                }
            };
            let request = EvaluateRequest {
                node_id: job.node_id.clone(),
                subscribers: entry.subscribers.clone(),
                r: WireIntermediate::from(&intermediate),
            };
            match client.post(&evaluate_url).json(&request).send().await {
                Ok(response) if response.status().is_success() => {}
                Ok(response) => {
                    tracing::warn!("authority answered {} for evaluate", response.status())
                }
                Err(err) => tracing::warn!("authority unreachable: {err}"),
            }
        }
    }
}

async fn post_fence(State(state): State<Arc<GeofenceState>>, body: Bytes) -> Response {
    let request: FenceCreateRequest = match serde_json::from_slice(&body) {
        Ok(request) => request,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    if request.subscribers.is_empty() {
        return json_error(StatusCode::BAD_REQUEST, "subscribers must be non-empty");
    }
    let sw = match GeoPoint::new(request.sw.lat, request.sw.lon) {
        Ok(point) => point,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, format!("sw: {err}")),
    };
    let ne = match GeoPoint::new(request.ne.lat, request.ne.lon) {
        Ok(point) => point,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, format!("ne: {err}")),
    };
    let fence = match make_axis_aligned_fence(sw, ne, state.scale) {
        Ok(fence) => fence,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    let fence_id = format!("f-{}", state.next_id.fetch_add(1, Ordering::Relaxed));
    state
        .registry
        .write()
        .expect("registry lock poisoned")
        .push(GeoFenceEntry {
            fence_id: fence_id.clone(),
            fence,
            subscribers: request.subscribers,
        });
    (StatusCode::CREATED, Json(FenceCreateResponse { fence_id })).into_response()
}

async fn delete_fence(
    State(state): State<Arc<GeofenceState>>,
    Path(fence_id): Path<String>,
) -> Response {
    let mut registry = state.registry.write().expect("registry lock poisoned");
    let before = registry.len();
    registry.retain(|entry| entry.fence_id != fence_id);
    if registry.len() == before {
        json_error(StatusCode::NOT_FOUND, format!("no fence {fence_id:?}"))
    } else {
        StatusCode::NO_CONTENT.into_response()
    }
}

async fn post_location(State(state): State<Arc<GeofenceState>>, body: Bytes) -> Response {
    let request: LocationPublishRequest = match serde_json::from_slice(&body) {
        Ok(request) => request,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    if request.node_id.is_empty() {
        return json_error(StatusCode::BAD_REQUEST, "node_id must be non-empty");
    }
    let enc_lat = match state.pk.ciphertext_from_value(request.enc_lat.to_biguint()) {
        Ok(ciphertext) => ciphertext,
        Err(err) => return json_error(StatusCode::CONFLICT, format!("enc_lat: {err}")),
    };
    let enc_lon = match state.pk.ciphertext_from_value(request.enc_lon.to_biguint()) {
        Ok(ciphertext) => ciphertext,
        Err(err) => return json_error(StatusCode::CONFLICT, format!("enc_lon: {err}")),
    };
    let loc = EncryptedLocation::new(enc_lat, enc_lon).expect("one key, one fingerprint");
    let job = LocationJob {
        node_id: request.node_id,
        loc,
    };
    if state.jobs.send(job).is_err() {
        return json_error(StatusCode::SERVICE_UNAVAILABLE, "worker is gone");
    }
    StatusCode::ACCEPTED.into_response()
}
