//! HTTP/JSON bindings for the protocol.
//!
//! Three runnable services share one wire dialect:
//!
//! * **authority** — `GET /v1/public-key`, `POST /v1/evaluate`
//! * **fence service** — `POST /v1/fences`, `DELETE /v1/fences/{id}`,
//!   `POST /v1/locations`
//! * **subscriber sink** — `POST /v1/notify`, `GET /v1/notifications`
//!
//! Bodies are UTF-8 JSON. Big integers travel as lowercase base-10 digit
//! strings with no sign and no leading zeros (see [`schema::WireBigInt`]);
//! the schemas for messages to the authority and to subscribers have no
//! field that could carry a plaintext coordinate or fence geometry.
//!
//! Location and evaluate endpoints return `202 Accepted` and do the
//! homomorphic work on a single background worker per service, preserving
//! arrival order. Unknown JSON fields are ignored by the services; strict
//! parsing that rejects them is available via [`schema::from_json_strict`].

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::{Json, Router};
use std::net::SocketAddr;
use std::time::Duration;
use thiserror::Error;
use tokio::net::TcpListener;
use tokio::sync::oneshot;
use tokio::task::JoinHandle;

use crate::geometry::ScaleConfig;

pub mod authority;
pub mod client;
pub mod geofence;
pub mod keyfile;
pub mod schema;
pub mod subscriber;

pub use authority::AuthorityService;
pub use geofence::GeofenceService;
pub use subscriber::SubscriberSink;

/// Runtime settings shared by the services. The scale must be identical
/// across every party of one deployment; it never travels on the wire.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: SocketAddr,
    pub authority_url: Option<String>,
    pub key_bits: u64,
    pub scale: ScaleConfig,
    pub timeout: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: "127.0.0.1:0".parse().expect("valid literal address"),
            authority_url: None,
            key_bits: 2048,
            scale: ScaleConfig::default(),
            timeout: Duration::from_millis(5_000),
        }
    }
}

/// Key size floor for production deployments.
pub const PRODUCTION_MIN_KEY_BITS: u64 = 1024;

impl ServiceConfig {
    /// Production-mode policy check; opt-out is an explicit caller decision.
    pub fn check_production_key_bits(&self) -> Result<(), WireServeError> {
        if self.key_bits < PRODUCTION_MIN_KEY_BITS {
            return Err(WireServeError::InsecureKeyBits(self.key_bits));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum WireServeError {
    #[error("key size {0} is below the production minimum of {PRODUCTION_MIN_KEY_BITS} bits")]
    InsecureKeyBits(u64),
    #[error("fence service requires an authority URL")]
    MissingAuthorityUrl,
    #[error("could not reach authority for the public key: {0}")]
    AuthorityUnreachable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A bound, serving router with graceful shutdown.
#[derive(Debug)]
pub struct RunningService {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    handle: JoinHandle<()>,
}

impl RunningService {
    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Signals shutdown and waits for the listener task to finish.
    pub async fn shutdown(mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        let _ = self.handle.await;
    }

    /// Runs until the server task ends (normally never).
    pub async fn wait(self) {
        let _ = self.handle.await;
    }
}

/// Binds `addr` (port 0 picks a free port) and serves `router` in a
/// background task.
pub async fn spawn_router(router: Router, addr: SocketAddr) -> std::io::Result<RunningService> {
    let listener = TcpListener::bind(addr).await?;
    let addr = listener.local_addr()?;
    let (tx, rx) = oneshot::channel::<()>();
    let handle = tokio::spawn(async move {
        let shutdown = async {
            let _ = rx.await;
        };
        if let Err(err) = axum::serve(listener, router)
            .with_graceful_shutdown(shutdown)
            .await
        {
            tracing::error!("server on {addr} exited with error: {err}");
        }
    });
    Ok(RunningService {
        addr,
        shutdown: Some(tx),
        handle,
    })
}

/// Uniform JSON error body for every non-2xx response.
pub(crate) fn json_error(status: StatusCode, message: impl Into<String>) -> Response {
    (
        status,
        Json(schema::ErrorBody {
            error: message.into(),
        }),
    )
        .into_response()
}
