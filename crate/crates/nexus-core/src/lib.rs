//! Privacy-preserving geo-fencing over Paillier-encrypted locations.
//!
//! Mobile nodes publish their coordinates encrypted under an authority's
//! public key. A fence service — which never holds the private key —
//! homomorphically reduces each (encrypted location, fence) pair to an
//! encrypted pair of projection scalars. The authority decrypts only those
//! scalars, decides rectangle containment, and notifies subscribers. No
//! party except the node itself ever observes a plaintext location.
//!
//! Module map:
//!
//! * [`paillier`] — the cryptosystem: key generation, randomized
//!   encryption, the signed plaintext codec, and the additive
//!   homomorphisms.
//! * [`geometry`] — fixed-point coordinate scaling, rectangle fences, and
//!   the plaintext containment oracle.
//! * [`eval`] — the split evaluation: encrypted intermediate on one side,
//!   decrypt-and-decide on the other.
//! * [`protocol`] — party state machines, the observation ledger, the
//!   in-process simulation harness, and the privacy audit.
//! * [`scenario`] — the line-oriented scenario file format.
//! * [`wire`] — HTTP/JSON bindings: authority, fence service, and a test
//!   subscriber sink, plus key persistence.
//! * [`workload`] / [`bench`] — generators and seeded latency measurement.

pub mod bench;
pub mod eval;
pub mod geometry;
pub mod paillier;
pub mod protocol;
pub mod scenario;
pub mod wire;
pub mod workload;

pub use eval::{EncryptedLocation, EvaluationOutcome, IntermediateResult};
pub use geometry::{Fence, GeoPoint, ScaleConfig, ScaledPoint};
pub use paillier::{Ciphertext, KeyPair, PrivateKey, PublicKey, SignedPlaintext};
pub use protocol::{NodeId, Notification, ObservationLedger};
