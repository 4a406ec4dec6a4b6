//! A test subscriber: accepts notifications and exposes its log.

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use std::sync::{Arc, Mutex};

use crate::wire::schema::{NotificationLog, NotifyRequest};
use crate::wire::{json_error, spawn_router, RunningService};

/// In-memory notification sink with an inspection endpoint.
#[derive(Clone, Default)]
pub struct SubscriberSink {
    log: Arc<Mutex<Vec<NotifyRequest>>>,
}

impl SubscriberSink {
    pub fn new() -> Self {
        Self::default()
    }

    /// The notifications received so far, in arrival order.
    pub fn received(&self) -> Vec<NotifyRequest> {
        self.log.lock().expect("log lock poisoned").clone()
    }

    pub fn router(&self) -> Router {
        Router::new()
            .route("/v1/notify", post(post_notify))
            .route("/v1/notifications", get(get_notifications))
            .with_state(self.log.clone())
    }

    pub async fn spawn(&self, addr: std::net::SocketAddr) -> std::io::Result<RunningService> {
        spawn_router(self.router(), addr).await
    }
}

async fn post_notify(State(log): State<Arc<Mutex<Vec<NotifyRequest>>>>, body: Bytes) -> Response {
    let request: NotifyRequest = match serde_json::from_slice(&body) {
        Ok(request) => request,
        Err(err) => return json_error(StatusCode::BAD_REQUEST, err.to_string()),
    };
    log.lock().expect("log lock poisoned").push(request);
    StatusCode::OK.into_response()
}

async fn get_notifications(State(log): State<Arc<Mutex<Vec<NotifyRequest>>>>) -> Response {
    let notifications = log.lock().expect("log lock poisoned").clone();
    Json(NotificationLog { notifications }).into_response()
}
