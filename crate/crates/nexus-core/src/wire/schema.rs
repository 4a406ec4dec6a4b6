//! Wire message types, fixed field by field.
//!
//! Serialization is canonical: struct field order is declaration order and
//! big integers are bare decimal strings, so serializing a parsed message
//! reproduces the original bytes. That property backs the golden-file
//! conformance tests and the strict parser below.

use num_bigint::BigUint;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::eval::IntermediateResult;
use crate::paillier::PublicKey;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown field {path} rejected in strict mode")]
    UnknownField { path: String },
    #[error("{0} is not a valid big-integer string")]
    InvalidBigInt(String),
}

/// Rejection classification for values arriving from the wire: schema
/// violations map to 400, values outside the deployment key's ciphertext
/// group map to 409.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    KeyMismatch(String),
}

/// A non-negative big integer as lowercase base-10 digits: `0` or a string
/// with no leading zero. The wire form of moduli, ciphertexts, and squared
/// side lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireBigInt(String);

impl WireBigInt {
    pub fn new(digits: impl Into<String>) -> Result<Self, SchemaError> {
        let digits = digits.into();
        if Self::is_valid(&digits) {
            Ok(WireBigInt(digits))
        } else {
            Err(SchemaError::InvalidBigInt(digits))
        }
    }

    fn is_valid(s: &str) -> bool {
        match s.as_bytes() {
            [] => false,
            [b'0'] => true,
            [b'1'..=b'9', rest @ ..] => rest.iter().all(u8::is_ascii_digit),
            _ => false,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::parse_bytes(self.0.as_bytes(), 10).expect("validated digit string")
    }
}

impl From<&BigUint> for WireBigInt {
    fn from(v: &BigUint) -> Self {
        WireBigInt(v.to_str_radix(10))
    }
}

impl Serialize for WireBigInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for WireBigInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        WireBigInt::new(raw).map_err(de::Error::custom)
    }
}

/// `GET /v1/public-key` response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyResponse {
    pub n: WireBigInt,
}

/// A coordinate in decimal degrees as it appears in fence registrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireGeoPoint {
    pub lat: f64,
    pub lon: f64,
}

/// `POST /v1/fences` request: an axis-aligned box plus subscriber URLs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FenceCreateRequest {
    pub sw: WireGeoPoint,
    pub ne: WireGeoPoint,
    pub subscribers: Vec<String>,
}

/// `POST /v1/fences` response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FenceCreateResponse {
    pub fence_id: String,
}

/// `POST /v1/locations` request: node id plus both encrypted coordinates.
/// By construction there is no field for a plaintext coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationPublishRequest {
    pub node_id: String,
    pub enc_lat: WireBigInt,
    pub enc_lon: WireBigInt,
}

/// The encrypted intermediate as it travels to the authority.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireIntermediate {
    pub ab_sq: WireBigInt,
    pub ad_sq: WireBigInt,
    pub enc_dot_ab: WireBigInt,
    pub enc_dot_ad: WireBigInt,
}

/// `POST /v1/evaluate` request. Carries no fence identifier and no fence
/// geometry, only the intermediate and delivery metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub node_id: String,
    pub subscribers: Vec<String>,
    pub r: WireIntermediate,
}

/// `POST /v1/notify` request — all a subscriber ever learns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotifyRequest {
    pub node_id: String,
    pub inside: bool,
}

/// `GET /v1/notifications` response: the sink's log in arrival order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotificationLog {
    pub notifications: Vec<NotifyRequest>,
}

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

impl From<&IntermediateResult> for WireIntermediate {
    fn from(r: &IntermediateResult) -> Self {
        WireIntermediate {
            ab_sq: WireBigInt::from(r.ab_sq()),
            ad_sq: WireBigInt::from(r.ad_sq()),
            enc_dot_ab: WireBigInt::from(r.enc_dot_ab().value()),
            enc_dot_ad: WireBigInt::from(r.enc_dot_ad().value()),
        }
    }
}

impl WireIntermediate {
    /// Revalidates the wire values under the deployment key: the squared
    /// lengths must be positive and both dot ciphertexts must be members of
    /// the key's ciphertext group.
    pub fn try_into_intermediate(&self, pk: &PublicKey) -> Result<IntermediateResult, IngestError> {
        let enc_dot_ab = pk
            .ciphertext_from_value(self.enc_dot_ab.to_biguint())
            .map_err(|e| IngestError::KeyMismatch(format!("enc_dot_ab: {e}")))?;
        let enc_dot_ad = pk
            .ciphertext_from_value(self.enc_dot_ad.to_biguint())
            .map_err(|e| IngestError::KeyMismatch(format!("enc_dot_ad: {e}")))?;
        IntermediateResult::new(
            self.ab_sq.to_biguint(),
            self.ad_sq.to_biguint(),
            enc_dot_ab,
            enc_dot_ad,
        )
        .map_err(|e| IngestError::Schema(e.to_string()))
    }
}

/// Parses a message while rejecting any field the schema does not define,
/// recursively. The default parsers ignore unknown fields; this one exists
/// so tests can prove a message carries nothing beyond its schema.
pub fn from_json_strict<T>(text: &str) -> Result<T, SchemaError>
where
    T: serde::de::DeserializeOwned + Serialize,
{
    let input: Value = serde_json::from_str(text)?;
    let parsed: T = serde_json::from_value(input.clone())?;
    let canonical = serde_json::to_value(&parsed)?;
    check_no_extra_fields(&input, &canonical, "$")?;
    Ok(parsed)
}

fn check_no_extra_fields(input: &Value, canonical: &Value, path: &str) -> Result<(), SchemaError> {
    match (input, canonical) {
        (Value::Object(input_map), Value::Object(canonical_map)) => {
            for (key, value) in input_map {
                match canonical_map.get(key) {
                    Some(canonical_value) => {
                        check_no_extra_fields(value, canonical_value, &format!("{path}.{key}"))?
                    }
                    None => {
                        return Err(SchemaError::UnknownField {
                            path: format!("{path}.{key}"),
                        })
                    }
                }
            }
            Ok(())
        }
        (Value::Array(input_items), Value::Array(canonical_items))
            if input_items.len() == canonical_items.len() =>
        {
            for (index, (i, c)) in input_items.iter().zip(canonical_items).enumerate() {
                check_no_extra_fields(i, c, &format!("{path}[{index}]"))?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}
