//! Seeded latency measurement of the split evaluation.
//!
//! Each iteration draws a random (fence, point) pair, encrypts the point
//! outside the timed region (that cost belongs to the mobile node), then
//! times the fence-service and authority halves back to back. Every
//! iteration's outcome is also checked against the plaintext containment
//! oracle, so a benchmark run doubles as a correctness sweep.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

use crate::eval::{compute_intermediate, encrypt_location, evaluate_intermediate, EvalError};
use crate::geometry::contains_plaintext;
use crate::paillier::{generate_keypair, PaillierError};
use crate::workload::{random_axis_fence, random_point_near, random_rotated_fence};

/// Mean per-evaluation latency at 2048 bits reported for an earlier
/// prototype of this scheme, printed alongside fresh results for
/// order-of-magnitude comparison. Hardware-bound; not a target.
pub const REFERENCE_MEAN_MS_2048: f64 = 323.0;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("iteration count must be at least 1")]
    NoIterations,
    #[error(transparent)]
    Crypto(#[from] PaillierError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("iteration {iteration}: encrypted outcome disagrees with plaintext containment")]
    OracleMismatch { iteration: u32 },
}

/// Latency statistics for one benchmark run. Times cover the evaluation
/// pipeline only; transport and node-side encryption are excluded.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub key_bits: u64,
    pub iterations: u32,
    pub mean_ms: f64,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub host: String,
}

/// Runs `iterations` seeded evaluations at the given key size. The seed
/// fixes the whole workload: same seed, same key, same (fence, point)
/// sequence.
pub fn run_bench(
    bits: u64,
    iterations: u32,
    seed: u64,
    mut progress: impl FnMut(u32),
) -> Result<BenchReport, BenchError> {
    if iterations == 0 {
        return Err(BenchError::NoIterations);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let keypair = generate_keypair(bits, &mut rng)?;

    let mut samples_ms = Vec::with_capacity(iterations as usize);
    for iteration in 0..iterations {
        let fence = if iteration % 2 == 0 {
            random_axis_fence(&mut rng)
        } else {
            random_rotated_fence(&mut rng)
        };
        let point = random_point_near(&fence, &mut rng);
        let encrypted = encrypt_location(&keypair.public, point, &mut rng)?;

        let start = Instant::now();
        let intermediate = compute_intermediate(&keypair.public, &encrypted, &fence, &mut rng)?;
        let outcome = evaluate_intermediate(&keypair.private, &intermediate)?;
        samples_ms.push(start.elapsed().as_secs_f64() * 1e3);

        if outcome.inside != contains_plaintext(&fence, point) {
            return Err(BenchError::OracleMismatch { iteration });
        }
        progress(iteration + 1);
    }

    samples_ms.sort_by(|a, b| a.total_cmp(b));
    let mean_ms = samples_ms.iter().sum::<f64>() / samples_ms.len() as f64;
    Ok(BenchReport {
        key_bits: bits,
        iterations,
        mean_ms,
        median_ms: percentile(&samples_ms, 0.50),
        p95_ms: percentile(&samples_ms, 0.95),
        host: host_description(),
    })
}

/// Nearest-rank percentile over an ascending sample.
fn percentile(sorted_ms: &[f64], fraction: f64) -> f64 {
    let rank = (fraction * sorted_ms.len() as f64).ceil() as usize;
    sorted_ms[rank.clamp(1, sorted_ms.len()) - 1]
}

fn host_description() -> String {
    let hostname = std::env::var("HOSTNAME").unwrap_or_else(|_| "unknown-host".to_owned());
    format!(
        "{hostname} ({} {})",
        std::env::consts::OS,
        std::env::consts::ARCH
    )
}
