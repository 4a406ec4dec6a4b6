//! Per-party observation ledger.
//!
//! Every inbound message field lands in the ledger under exactly one
//! category, so "who saw what" becomes a query instead of an argument. The
//! ledger stores short digests of values, never the values themselves —
//! the instrumentation must not itself become a location leak.
//!
//! Public-key material is the one thing deliberately untracked: the
//! authority shares it with every party by design, so recording it would
//! add noise without privacy signal.

use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

/// A protocol participant, as it appears in ledger records.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Node(String),
    FenceService,
    Authority,
    Subscriber(String),
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Node(id) => write!(f, "node {id}"),
            Party::FenceService => f.write_str("fence-service"),
            Party::Authority => f.write_str("authority"),
            Party::Subscriber(endpoint) => write!(f, "subscriber {endpoint}"),
        }
    }
}

/// Classification of an observed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    PlaintextLocation,
    CiphertextLocation,
    FenceGeometry,
    PrivateKey,
    Intermediate,
    Notification,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::PlaintextLocation,
        Category::CiphertextLocation,
        Category::FenceGeometry,
        Category::PrivateKey,
        Category::Intermediate,
        Category::Notification,
    ];
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::PlaintextLocation => "plaintext-location",
            Category::CiphertextLocation => "ciphertext-location",
            Category::FenceGeometry => "fence-geometry",
            Category::PrivateKey => "private-key",
            Category::Intermediate => "intermediate",
            Category::Notification => "notification",
        })
    }
}

/// One recorded observation: who saw a value of which kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub party: Party,
    pub category: Category,
    pub digest: String,
}

/// Append-only record of everything every party observed during a run.
/// Safe for concurrent appends; reads take a snapshot.
#[derive(Debug, Default)]
pub struct ObservationLedger {
    records: Mutex<Vec<Observation>>,
}

impl ObservationLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&self, party: Party, category: Category, value: impl AsRef<[u8]>) {
        let digest = short_digest(value.as_ref());
        self.records
            .lock()
            .expect("ledger lock poisoned")
            .push(Observation {
                party,
                category,
                digest,
            });
    }

    pub fn snapshot(&self) -> Vec<Observation> {
        self.records.lock().expect("ledger lock poisoned").clone()
    }

    pub fn len(&self) -> usize {
        self.records.lock().expect("ledger lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All parties holding at least one record of the given category.
    pub fn parties_with(&self, category: Category) -> BTreeSet<Party> {
        self.snapshot()
            .into_iter()
            .filter(|o| o.category == category)
            .map(|o| o.party)
            .collect()
    }

    /// Number of records of one category held by one party.
    pub fn count(&self, party: &Party, category: Category) -> usize {
        self.snapshot()
            .iter()
            .filter(|o| &o.party == party && o.category == category)
            .count()
    }

    /// All distinct categories observed by one party.
    pub fn categories_of(&self, party: &Party) -> BTreeSet<Category> {
        self.snapshot()
            .into_iter()
            .filter(|o| &o.party == party)
            .map(|o| o.category)
            .collect()
    }

    /// Per-party, per-category record counts, for summary tables.
    pub fn summary(&self) -> BTreeMap<Party, BTreeMap<Category, usize>> {
        let mut table: BTreeMap<Party, BTreeMap<Category, usize>> = BTreeMap::new();
        for obs in self.snapshot() {
            *table
                .entry(obs.party)
                .or_default()
                .entry(obs.category)
                .or_insert(0) += 1;
        }
        table
    }
}

fn short_digest(value: &[u8]) -> String {
    let digest = Sha256::digest(value);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
