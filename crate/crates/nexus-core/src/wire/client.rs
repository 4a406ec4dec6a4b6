//! Client helpers for the node side of the wire: fetching the deployment
//! key and publishing encrypted locations. Encryption itself is synchronous
//! and happens before any request is sent, so callers keep their randomness
//! source out of async contexts.

use thiserror::Error;

use crate::eval::EncryptedLocation;
use crate::paillier::PublicKey;
use crate::wire::schema::{LocationPublishRequest, PublicKeyResponse, WireBigInt};

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("request failed: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("unexpected status {status}: {body}")]
    UnexpectedStatus { status: u16, body: String },
}

/// `GET {authority}/v1/public-key` and build the deployment public key.
pub async fn fetch_public_key(
    client: &reqwest::Client,
    authority_url: &str,
) -> Result<PublicKey, ClientError> {
    let url = format!("{}/v1/public-key", authority_url.trim_end_matches('/'));
    let response = client.get(url).send().await?;
    if !response.status().is_success() {
        return Err(unexpected(response).await);
    }
    let body: PublicKeyResponse = response.json().await?;
    Ok(PublicKey::from_modulus(body.n.to_biguint()))
}

/// `POST {geofence}/v1/locations` with an already-encrypted location;
/// succeeds on `202 Accepted`.
pub async fn publish_location(
    client: &reqwest::Client,
    geofence_url: &str,
    node_id: &str,
    loc: &EncryptedLocation,
) -> Result<(), ClientError> {
    let url = format!("{}/v1/locations", geofence_url.trim_end_matches('/'));
    let body = LocationPublishRequest {
        node_id: node_id.to_owned(),
        enc_lat: WireBigInt::from(loc.enc_lat().value()),
        enc_lon: WireBigInt::from(loc.enc_lon().value()),
    };
    let response = client.post(url).json(&body).send().await?;
    if response.status().as_u16() != 202 {
        return Err(unexpected(response).await);
    }
    Ok(())
}

async fn unexpected(response: reqwest::Response) -> ClientError {
    let status = response.status().as_u16();
    let body = response.text().await.unwrap_or_default();
    ClientError::UnexpectedStatus { status, body }
}
