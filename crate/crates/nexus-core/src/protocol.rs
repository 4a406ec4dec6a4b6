//! Party state machines and message types for the geo-fencing protocol.
//!
//! Four roles cooperate:
//!
//! * **Mobile nodes** encrypt their own coordinates under the authority's
//!   public key and publish `(node id, encrypted location)` tuples. They
//!   hold no fence data and perform no containment computation.
//! * The **fence service** owns the fence registry. For every location
//!   update it computes one encrypted intermediate per registered fence and
//!   forwards it — with the node id and that fence's subscriber endpoints,
//!   but never the fence geometry — to the authority.
//! * The **authority** owns the private key. It decrypts only projection
//!   scalars, decides containment, and notifies the listed subscribers. It
//!   keeps no per-request state.
//! * **Subscribers** receive `(node id, inside)` notifications and nothing
//!   else.
//!
//! Every receiving method takes an [`ObservationLedger`] and records what it
//! observed; the ledger is what turns the privacy goals into checkable
//! assertions (see [`privacy`]).

use rand::{CryptoRng, RngCore};
use std::fmt;
use thiserror::Error;

use crate::eval::{
    compute_intermediate, encrypt_location, evaluate_intermediate, EncryptedLocation, EvalError,
    IntermediateResult,
};
use crate::geometry::{scale_point, Fence, GeoPoint, GeometryError, ScaleConfig};
use crate::paillier::{generate_keypair, KeyPair, PaillierError, PublicKey};

pub mod ledger;
pub mod privacy;
pub mod sim;

pub use ledger::{Category, Observation, ObservationLedger, Party};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("node ids must be non-empty")]
    EmptyNodeId,
    #[error("every fence needs at least one subscriber")]
    EmptySubscribers,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Crypto(#[from] PaillierError),
}

/// Opaque, non-empty identifier of a mobile node; unique per deployment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, ProtocolError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ProtocolError::EmptyNodeId);
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A node's published location: its id plus both coordinates encrypted
/// under the deployment key.
#[derive(Debug, Clone)]
pub struct LocationUpdate {
    pub node: NodeId,
    pub loc: EncryptedLocation,
}

/// A registered fence: geometry plus the subscribers to notify. Lives only
/// inside the fence service.
#[derive(Debug, Clone)]
pub struct GeoFenceEntry {
    pub fence_id: String,
    pub fence: Fence,
    pub subscribers: Vec<String>,
}

/// What the fence service hands the authority: the encrypted intermediate,
/// the node id, and the delivery endpoints. Deliberately carries no fence
/// identifier and no fence geometry.
#[derive(Debug, Clone)]
pub struct EvaluationRequest {
    pub node: NodeId,
    pub subscribers: Vec<String>,
    pub intermediate: IntermediateResult,
}

/// What a subscriber receives: the node id and the containment result —
/// no location, no ciphertext, no fence data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Notification {
    pub node: NodeId,
    pub inside: bool,
}

/// A mobile node that has fetched the deployment public key.
#[derive(Debug, Clone)]
pub struct MobileNode {
    id: NodeId,
    pk: PublicKey,
    cfg: ScaleConfig,
}

impl MobileNode {
    pub fn new(id: NodeId, pk: PublicKey, cfg: ScaleConfig) -> Self {
        MobileNode { id, pk, cfg }
    }

    pub fn id(&self) -> &NodeId {
        &self.id
    }

    /// Scales and encrypts a coordinate. The plaintext is observed only by
    /// the node itself; the returned update carries ciphertexts.
    pub fn publish(
        &self,
        loc: GeoPoint,
        rng: &mut (impl RngCore + CryptoRng),
        ledger: &ObservationLedger,
    ) -> Result<LocationUpdate, ProtocolError> {
        ledger.record(
            Party::Node(self.id.as_str().to_owned()),
            Category::PlaintextLocation,
            format!("{:.9},{:.9}", loc.lat(), loc.lon()),
        );
        let scaled = scale_point(loc, self.cfg);
        let encrypted = encrypt_location(&self.pk, scaled, rng)?;
        Ok(LocationUpdate {
            node: self.id.clone(),
            loc: encrypted,
        })
    }
}

/// The fence registry plus the homomorphic half of the containment check.
#[derive(Debug, Clone)]
pub struct GeofencingService {
    pk: PublicKey,
    fences: Vec<GeoFenceEntry>,
    next_fence: u64,
}

impl GeofencingService {
    pub fn new(pk: PublicKey) -> Self {
        GeofencingService {
            pk,
            fences: Vec::new(),
            next_fence: 1,
        }
    }

    pub fn public_key(&self) -> &PublicKey {
        &self.pk
    }

    pub fn fences(&self) -> &[GeoFenceEntry] {
        &self.fences
    }

    /// Registers a fence with its subscriber set and returns the generated
    /// fence id. Rejects empty subscriber sets, so requests without
    /// deliverable endpoints can never reach the authority.
    pub fn register_fence(
        &mut self,
        fence: Fence,
        subscribers: Vec<String>,
        ledger: &ObservationLedger,
    ) -> Result<String, ProtocolError> {
        if subscribers.is_empty() {
            return Err(ProtocolError::EmptySubscribers);
        }
        let fence_id = format!("f-{}", self.next_fence);
        self.next_fence += 1;
        ledger.record(
            Party::FenceService,
            Category::FenceGeometry,
            format!("{:?}", fence),
        );
        ledger.record(
            Party::FenceService,
            Category::Notification,
            subscribers.join(","),
        );
        self.fences.push(GeoFenceEntry {
            fence_id: fence_id.clone(),
            fence,
            subscribers,
        });
        Ok(fence_id)
    }

    /// Removes a fence by id; false when the id was not registered.
    pub fn unregister_fence(&mut self, fence_id: &str) -> bool {
        let before = self.fences.len();
        self.fences.retain(|entry| entry.fence_id != fence_id);
        self.fences.len() != before
    }

    /// Fan-out for one location update: one evaluation request per
    /// registered fence, in registration order. Every registered fence is
    /// eligible — filtering by region would require knowing the location.
    pub fn on_location(
        &self,
        update: &LocationUpdate,
        rng: &mut (impl RngCore + CryptoRng),
        ledger: &ObservationLedger,
    ) -> Result<Vec<EvaluationRequest>, ProtocolError> {
        ledger.record(
            Party::FenceService,
            Category::Notification,
            update.node.as_str(),
        );
        ledger.record(
            Party::FenceService,
            Category::CiphertextLocation,
            format!(
                "{},{}",
                update.loc.enc_lat().value(),
                update.loc.enc_lon().value()
            ),
        );
        self.fences
            .iter()
            .map(|entry| {
                let intermediate =
                    compute_intermediate(&self.pk, &update.loc, &entry.fence, rng)?;
                Ok(EvaluationRequest {
                    node: update.node.clone(),
                    subscribers: entry.subscribers.clone(),
                    intermediate,
                })
            })
            .collect()
    }
}

/// Key owner and decision maker. Stateless per request: nothing observed
/// while handling an evaluation survives the call.
#[derive(Debug, Clone)]
pub struct Authority {
    keypair: KeyPair,
}

impl Authority {
    /// Generates a fresh key pair of the given size.
    pub fn init(
        bits: u64,
        rng: &mut (impl RngCore + CryptoRng),
        ledger: &ObservationLedger,
    ) -> Result<Self, ProtocolError> {
        let keypair = generate_keypair(bits, rng)?;
        Ok(Authority::from_keypair(keypair, ledger))
    }

    /// Wraps an existing key pair (for example one loaded from disk).
    pub fn from_keypair(keypair: KeyPair, ledger: &ObservationLedger) -> Self {
        ledger.record(
            Party::Authority,
            Category::PrivateKey,
            keypair.public.fingerprint().to_string(),
        );
        Authority { keypair }
    }

    /// Served on demand to any party.
    pub fn public_key(&self) -> &PublicKey {
        &self.keypair.public
    }

    /// Decrypts the intermediate, decides containment, and returns one
    /// `(endpoint, notification)` delivery per subscriber. Transport is the
    /// caller's concern; a failed delivery must not abort the others.
    pub fn on_request(
        &self,
        req: &EvaluationRequest,
        ledger: &ObservationLedger,
    ) -> Result<Vec<(String, Notification)>, ProtocolError> {
        if req.subscribers.is_empty() {
            return Err(ProtocolError::EmptySubscribers);
        }
        ledger.record(Party::Authority, Category::Notification, req.node.as_str());
        ledger.record(
            Party::Authority,
            Category::Notification,
            req.subscribers.join(","),
        );
        ledger.record(
            Party::Authority,
            Category::Intermediate,
            format!(
                "{},{},{},{}",
                req.intermediate.ab_sq(),
                req.intermediate.ad_sq(),
                req.intermediate.enc_dot_ab().value(),
                req.intermediate.enc_dot_ad().value()
            ),
        );
        let outcome = evaluate_intermediate(&self.keypair.private, &req.intermediate)?;
        let notification = Notification {
            node: req.node.clone(),
            inside: outcome.inside,
        };
        Ok(req
            .subscribers
            .iter()
            .map(|endpoint| (endpoint.clone(), notification.clone()))
            .collect())
    }
}
