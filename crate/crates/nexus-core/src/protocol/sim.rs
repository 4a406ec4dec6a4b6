//! In-process simulation harness wiring all parties without a network.
//!
//! Message ordering is deterministic: trajectory steps advance in lockstep,
//! nodes publish in declaration order within a step, the fence service fans
//! out over fences in registration order, and deliveries follow the
//! subscriber order of each fence entry. The harness attributes each
//! notification to the fence that produced it (it can, because it performed
//! the fan-out itself — the messages never carry fence identity).

use rand::{CryptoRng, RngCore};

use crate::protocol::{
    Authority, Category, GeofencingService, MobileNode, NodeId, ObservationLedger, Party,
    ProtocolError,
};
use crate::scenario::Scenario;

/// One delivered notification, annotated by the harness with the step and
/// fence that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveredNotification {
    pub step: usize,
    pub node: NodeId,
    pub fence_id: String,
    pub subscriber: String,
    pub inside: bool,
}

/// Everything a simulated run produced: the notification trace in delivery
/// order plus the full observation ledger.
#[derive(Debug)]
pub struct SimulationReport {
    pub notifications: Vec<DeliveredNotification>,
    pub ledger: ObservationLedger,
}

impl SimulationReport {
    /// The bare inside/outside trace, in delivery order.
    pub fn trace(&self) -> Vec<bool> {
        self.notifications.iter().map(|n| n.inside).collect()
    }
}

/// Runs a scenario end to end with a fresh key pair of `key_bits` bits.
pub fn run_simulation(
    scenario: &Scenario,
    key_bits: u64,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<SimulationReport, ProtocolError> {
    let ledger = ObservationLedger::new();
    let authority = Authority::init(key_bits, rng, &ledger)?;

    let mut service = GeofencingService::new(authority.public_key().clone());
    let mut fence_names = Vec::new();
    for fence in &scenario.fences {
        service.register_fence(fence.fence.clone(), fence.subscribers.clone(), &ledger)?;
        fence_names.push(fence.id.clone());
    }

    let nodes: Vec<(MobileNode, &[crate::geometry::GeoPoint])> = scenario
        .trajectories
        .iter()
        .map(|t| {
            (
                MobileNode::new(t.node.clone(), authority.public_key().clone(), scenario.scale),
                t.points.as_slice(),
            )
        })
        .collect();

    let mut notifications = Vec::new();
    for step in 0..scenario.steps() {
        for (node, points) in &nodes {
            let Some(point) = points.get(step) else {
                continue;
            };
            let update = node.publish(*point, rng, &ledger)?;
            let requests = service.on_location(&update, rng, &ledger)?;
            debug_assert_eq!(requests.len(), fence_names.len());
            for (request, fence_id) in requests.iter().zip(&fence_names) {
                for (endpoint, notification) in authority.on_request(request, &ledger)? {
                    ledger.record(
                        Party::Subscriber(endpoint.clone()),
                        Category::Notification,
                        notification.node.as_str(),
                    );
                    ledger.record(
                        Party::Subscriber(endpoint.clone()),
                        Category::Notification,
                        if notification.inside { "inside" } else { "outside" },
                    );
                    notifications.push(DeliveredNotification {
                        step,
                        node: notification.node.clone(),
                        fence_id: fence_id.clone(),
                        subscriber: endpoint,
                        inside: notification.inside,
                    });
                }
            }
        }
    }

    Ok(SimulationReport {
        notifications,
        ledger,
    })
}
