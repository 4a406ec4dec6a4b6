//! Mechanical audit of the privacy goals over a simulated run.
//!
//! * **P1 — location non-exposition**: plaintext locations exist only at
//!   the nodes that produced them; the private key exists only at the
//!   authority; the authority never holds a location ciphertext.
//! * **P2 — location-privacy preservation**: neither the authority nor any
//!   subscriber ever observes fence geometry, and subscribers observe
//!   nothing but notifications.
//! * **P3 — computational correctness**: every delivered result equals the
//!   plaintext containment oracle for the corresponding fence and position.
//! * **P4 — network assistedness**: nodes compute no containment and hold
//!   no fence or intermediate data; each published position reaches the
//!   fence service as a ciphertext observation.

use std::collections::BTreeSet;
use std::fmt;

use crate::geometry::{contains_plaintext, scale_point};
use crate::protocol::sim::SimulationReport;
use crate::protocol::{Category, Party};
use crate::scenario::Scenario;

/// The audited privacy property.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrivacyProperty {
    LocationNonExposition,
    LocationPrivacyPreservation,
    ComputationalCorrectness,
    NetworkAssistedness,
}

impl PrivacyProperty {
    pub const ALL: [PrivacyProperty; 4] = [
        PrivacyProperty::LocationNonExposition,
        PrivacyProperty::LocationPrivacyPreservation,
        PrivacyProperty::ComputationalCorrectness,
        PrivacyProperty::NetworkAssistedness,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            PrivacyProperty::LocationNonExposition => "P1",
            PrivacyProperty::LocationPrivacyPreservation => "P2",
            PrivacyProperty::ComputationalCorrectness => "P3",
            PrivacyProperty::NetworkAssistedness => "P4",
        }
    }
}

impl fmt::Display for PrivacyProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A concrete violation found by the audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivacyViolation {
    pub property: PrivacyProperty,
    pub detail: String,
}

impl fmt::Display for PrivacyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

/// Audits a finished run against its scenario. Empty result means every
/// property held.
pub fn audit(scenario: &Scenario, report: &SimulationReport) -> Vec<PrivacyViolation> {
    let mut violations = Vec::new();
    let ledger = &report.ledger;

    // P1: plaintext locations only at their originating nodes.
    let publishing_nodes: BTreeSet<Party> = scenario
        .trajectories
        .iter()
        .filter(|t| !t.points.is_empty())
        .map(|t| Party::Node(t.node.as_str().to_owned()))
        .collect();
    let holders = ledger.parties_with(Category::PlaintextLocation);
    if holders != publishing_nodes {
        violations.push(violation(
            PrivacyProperty::LocationNonExposition,
            format!("plaintext locations observed by {holders:?}, expected {publishing_nodes:?}"),
        ));
    }
    let key_holders = ledger.parties_with(Category::PrivateKey);
    let authority_only: BTreeSet<Party> = [Party::Authority].into();
    if key_holders != authority_only {
        violations.push(violation(
            PrivacyProperty::LocationNonExposition,
            format!("private key observed by {key_holders:?}"),
        ));
    }
    let authority_ciphertexts = ledger.count(&Party::Authority, Category::CiphertextLocation);
    if authority_ciphertexts != 0 {
        violations.push(violation(
            PrivacyProperty::LocationNonExposition,
            format!("authority holds {authority_ciphertexts} location ciphertext records"),
        ));
    }

    // P2: no fence geometry beyond the fence service; subscribers see only
    // notifications.
    for party in ledger.parties_with(Category::FenceGeometry) {
        if party != Party::FenceService {
            violations.push(violation(
                PrivacyProperty::LocationPrivacyPreservation,
                format!("fence geometry observed by {party}"),
            ));
        }
    }
    for party in all_subscriber_parties(report) {
        let categories = ledger.categories_of(&party);
        let extra: Vec<Category> = categories
            .into_iter()
            .filter(|c| *c != Category::Notification)
            .collect();
        if !extra.is_empty() {
            violations.push(violation(
                PrivacyProperty::LocationPrivacyPreservation,
                format!("{party} observed non-notification data: {extra:?}"),
            ));
        }
    }

    // P3: every delivered result matches the plaintext oracle.
    for delivered in &report.notifications {
        let Some(fence) = scenario.fence_by_id(&delivered.fence_id) else {
            violations.push(violation(
                PrivacyProperty::ComputationalCorrectness,
                format!("notification references unknown fence {:?}", delivered.fence_id),
            ));
            continue;
        };
        let Some(point) = scenario
            .trajectories
            .iter()
            .find(|t| t.node == delivered.node)
            .and_then(|t| t.points.get(delivered.step))
        else {
            violations.push(violation(
                PrivacyProperty::ComputationalCorrectness,
                format!(
                    "notification references unknown step {} of node {}",
                    delivered.step, delivered.node
                ),
            ));
            continue;
        };
        let expected = contains_plaintext(&fence.fence, scale_point(*point, scenario.scale));
        if delivered.inside != expected {
            violations.push(violation(
                PrivacyProperty::ComputationalCorrectness,
                format!(
                    "step {} node {} fence {}: delivered {}, oracle says {}",
                    delivered.step, delivered.node, delivered.fence_id, delivered.inside, expected
                ),
            ));
        }
    }

    // P4: nodes observe nothing but their own plaintext positions, and every
    // published position reached the fence service as a ciphertext.
    for party in node_parties(scenario) {
        let categories = ledger.categories_of(&party);
        let extra: Vec<Category> = categories
            .into_iter()
            .filter(|c| *c != Category::PlaintextLocation)
            .collect();
        if !extra.is_empty() {
            violations.push(violation(
                PrivacyProperty::NetworkAssistedness,
                format!("{party} observed {extra:?}; nodes must hold only their own positions"),
            ));
        }
    }
    let published: usize = scenario.trajectories.iter().map(|t| t.points.len()).sum();
    let received = ledger.count(&Party::FenceService, Category::CiphertextLocation);
    if received != published {
        violations.push(violation(
            PrivacyProperty::NetworkAssistedness,
            format!(
                "fence service received {received} ciphertext locations for {published} published positions"
            ),
        ));
    }

    violations
}

fn violation(property: PrivacyProperty, detail: String) -> PrivacyViolation {
    PrivacyViolation { property, detail }
}

fn node_parties(scenario: &Scenario) -> Vec<Party> {
    scenario
        .trajectories
        .iter()
        .map(|t| Party::Node(t.node.as_str().to_owned()))
        .collect()
}

fn all_subscriber_parties(report: &SimulationReport) -> BTreeSet<Party> {
    report
        .ledger
        .snapshot()
        .into_iter()
        .map(|o| o.party)
        .filter(|p| matches!(p, Party::Subscriber(_)))
        .collect()
}
