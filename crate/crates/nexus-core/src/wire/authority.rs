//! The authority service: serves the public key and evaluates forwarded
//! intermediates.
//!
//! `POST /v1/evaluate` returns `202 Accepted` immediately; a single worker
//! task decrypts, decides, and notifies subscribers in arrival order, so a
//! slow subscriber never blocks the request path and notification order is
//! deterministic. The service is stateless across requests: nothing about
//! an evaluation outlives its job.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use std::sync::{Arc, RwLock};
use std::time::Duration;
use tokio::sync::mpsc;

use crate::eval::{evaluate_intermediate, IntermediateResult};
use crate::paillier::KeyPair;
use crate::wire::schema::{
    EvaluateRequest, IngestError, NotifyRequest, PublicKeyResponse, WireBigInt,
};
use crate::wire::{json_error, spawn_router, RunningService};

struct EvaluateJob {
    keypair: Arc<KeyPair>,
    node_id: String,
    subscribers: Vec<String>,
    intermediate: IntermediateResult,
}

struct AuthorityState {
    keypair: RwLock<Option<Arc<KeyPair>>>,
    jobs: mpsc::UnboundedSender<EvaluateJob>,
}

/// Handle to the authority's HTTP surface.
#[derive(Clone)]
pub struct AuthorityService {
    state: Arc<AuthorityState>,
}

impl AuthorityService {
    /// Starts without a key; endpoints answer 503 until one is installed.
    pub fn new_pending(timeout: Duration) -> Self {
        let (jobs, rx) = mpsc::unbounded_channel();
        let client = reqwest::Client::builder()
            .timeout(timeout)
            .build()
            .expect("client construction cannot fail with static options");
        tokio::spawn(run_worker(rx, client));
        AuthorityService {
            state: Arc::new(AuthorityState {
                keypair: RwLock::new(None),
                jobs,
            }),
        }
    }

    pub fn with_keypair(keypair: KeyPair, timeout: Duration) -> Self {
        let service = Self::new_pending(timeout);
        service.install_keypair(keypair);
        service
    }

    /// Makes the key available; typically called once generation or loading
    /// finishes.
    pub fn install_keypair(&self, keypair: KeyPair) {
        *self.state.keypair.write().expect("key lock poisoned") = Some(Arc::new(keypair));
    }

    pub fn router(&self) -> Router {
        Router::new()
            .route("/v1/public-key", get(get_public_key))
            .route("/v1/evaluate", post(post_evaluate))
            .with_state(self.state.clone())
    }

    /// Binds and serves in a background task.
    pub async fn spawn(&self, addr: std::net::SocketAddr) -> std::io::Result<RunningService> {
        spawn_router(self.router(), addr).await
    }
}

async fn run_worker(mut rx: mpsc::UnboundedReceiver<EvaluateJob>, client: reqwest::Client) {
    while let Some(job) = rx.recv().await {
        let keypair = job.keypair.clone();
        let intermediate = job.intermediate.clone();
        let outcome = tokio::task::spawn_blocking(move || {
            evaluate_intermediate(&keypair.private, &intermediate)
        })
        .await;
        let inside = match outcome {
            Ok(Ok(outcome)) => outcome.inside,
            Ok(Err(err)) => {
                tracing::warn!("evaluation failed for node {}: {err}", job.node_id);
                continue;
            }
            Err(err) => {
                tracing::error!("evaluation task panicked: {err}");
                continue;
            }
        };
        let body = NotifyRequest {
            node_id: job.node_id.clone(),
            inside,
        };
        for endpoint in &job.subscribers {
            let result = client.post(endpoint).json(&body).send().await;
            match result {
                Ok(response) if response.status().is_success() => {}
                Ok(response) => {
                    tracing::warn!("subscriber {endpoint} answered {}", response.status())
                }
                Err(err) => tracing::warn!("subscriber {endpoint} unreachable: {err}"),
            }
        }
    }
}

async fn get_public_key(State(state): State<Arc<AuthorityState>>) -> Response {
    let keypair = state.keypair.read().expect("key lock poisoned").clone();
    match keypair {
        Some(kp) => Json(PublicKeyResponse {
            n: WireBigInt::from(kp.public.n()),
        })
        .into_response(),
        None => json_error(
            StatusCode::SERVICE_UNAVAILABLE,
            "key generation has not completed",
        ),
    }
}

async fn post_evaluate(State(state): State<Arc<AuthorityState>>, body: Bytes) -> Response {
    let request: EvaluateRequest = match serde_json::from_slice(&body) {
        Ok(request) => request,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    if request.node_id.is_empty() {
        return json_error(StatusCode::BAD_REQUEST, "node_id must be non-empty");
    }
    if request.subscribers.is_empty() {
        return json_error(StatusCode::BAD_REQUEST, "subscribers must be non-empty");
    }
    let Some(keypair) = state.keypair.read().expect("key lock poisoned").clone() else {
        return json_error(
            StatusCode::SERVICE_UNAVAILABLE,
            "key generation has not completed",
        );
    };
    let intermediate = match request.r.try_into_intermediate(&keypair.public) {
        Ok(intermediate) => intermediate,
        Err(IngestError::Schema(message)) => return json_error(StatusCode::BAD_REQUEST, message),
        Err(IngestError::KeyMismatch(message)) => {
            return json_error(StatusCode::CONFLICT, message)
        }
    };
    let job = EvaluateJob {
        keypair,
        node_id: request.node_id,
        subscribers: request.subscribers,
        intermediate,
    };
    if state.jobs.send(job).is_err() {
        return json_error(StatusCode::SERVICE_UNAVAILABLE, "worker is gone");
    }
    StatusCode::ACCEPTED.into_response()
}
