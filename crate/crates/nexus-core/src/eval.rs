//! The split containment computation.
//!
//! The fence service holds an encrypted location and a plaintext fence. It
//! cannot decide containment itself; instead it homomorphically computes the
//! two projection scalars and hands them — still encrypted — to the
//! authority together with the plaintext squared side lengths:
//!
//! ```text
//! R = { |AB|^2, |AD|^2, E(AL.AB), E(AL.AD) }
//! ```
//!
//! The authority decrypts only the two projections and applies the inclusive
//! interval test. Neither side ever sees a plaintext location: the fence
//! service computes on ciphertexts, and the authority sees two scalars that
//! are meaningless without the fence geometry.

use num_bigint::{BigInt, BigUint};
use rand::{CryptoRng, RngCore};
use thiserror::Error;

use crate::geometry::{scale_point, Fence, GeoPoint, ScaleConfig, ScaledPoint};
use crate::paillier::{Ciphertext, PaillierError, PrivateKey, PublicKey};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Crypto(#[from] PaillierError),
    #[error("ciphertext components carry different key fingerprints")]
    MixedKeys,
    #[error("squared side lengths must be positive")]
    DegenerateIntermediate,
}

/// A location as published by a mobile node: both coordinates encrypted
/// under the deployment key.
#[derive(Debug, Clone)]
pub struct EncryptedLocation {
    enc_lat: Ciphertext,
    enc_lon: Ciphertext,
}

impl EncryptedLocation {
    pub fn new(enc_lat: Ciphertext, enc_lon: Ciphertext) -> Result<Self, EvalError> {
        if enc_lat.key_fingerprint() != enc_lon.key_fingerprint() {
            return Err(EvalError::MixedKeys);
        }
        Ok(EncryptedLocation { enc_lat, enc_lon })
    }

    pub fn enc_lat(&self) -> &Ciphertext {
        &self.enc_lat
    }

    pub fn enc_lon(&self) -> &Ciphertext {
        &self.enc_lon
    }
}

/// Output of the fence service's half of the computation: plaintext squared
/// side lengths plus the two encrypted projection scalars.
#[derive(Debug, Clone)]
pub struct IntermediateResult {
    ab_sq: BigUint,
    ad_sq: BigUint,
    enc_dot_ab: Ciphertext,
    enc_dot_ad: Ciphertext,
}

impl IntermediateResult {
    pub fn new(
        ab_sq: BigUint,
        ad_sq: BigUint,
        enc_dot_ab: Ciphertext,
        enc_dot_ad: Ciphertext,
    ) -> Result<Self, EvalError> {
        use num_traits::Zero;
        if ab_sq.is_zero() || ad_sq.is_zero() {
            return Err(EvalError::DegenerateIntermediate);
        }
        if enc_dot_ab.key_fingerprint() != enc_dot_ad.key_fingerprint() {
            return Err(EvalError::MixedKeys);
        }
        Ok(IntermediateResult {
            ab_sq,
            ad_sq,
            enc_dot_ab,
            enc_dot_ad,
        })
    }

    pub fn ab_sq(&self) -> &BigUint {
        &self.ab_sq
    }

    pub fn ad_sq(&self) -> &BigUint {
        &self.ad_sq
    }

    pub fn enc_dot_ab(&self) -> &Ciphertext {
        &self.enc_dot_ab
    }

    pub fn enc_dot_ad(&self) -> &Ciphertext {
        &self.enc_dot_ad
    }
}

/// Containment decision for one (location, fence) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationOutcome {
    pub inside: bool,
}

/// Node-side helper: scales a coordinate and encrypts both components.
pub fn encrypt_location(
    pk: &PublicKey,
    p: ScaledPoint,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<EncryptedLocation, EvalError> {
    let enc_lat = pk.encrypt(p.lat, rng)?;
    let enc_lon = pk.encrypt(p.lon, rng)?;
    EncryptedLocation::new(enc_lat, enc_lon)
}

/// The fence service's half: computes `E(AL.AB)` and `E(AL.AD)` from the
/// encrypted location alone.
///
/// The corner `A` enters through fresh encryptions subtracted from the
/// location ciphertexts; the side components enter as plaintext scalar
/// exponents. The plaintext location is never an input.
pub fn compute_intermediate(
    pk: &PublicKey,
    loc: &EncryptedLocation,
    fence: &Fence,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<IntermediateResult, EvalError> {
    let v = fence.vectors();
    let a = fence.a();

    let enc_a_lat = pk.encrypt(a.lat, rng)?;
    let enc_a_lon = pk.encrypt(a.lon, rng)?;
    let al_lat = pk.hom_sub(&loc.enc_lat, &enc_a_lat)?;
    let al_lon = pk.hom_sub(&loc.enc_lon, &enc_a_lon)?;

    let enc_dot_ab = hom_dot(pk, &al_lat, &al_lon, v.ab)?;
    let enc_dot_ad = hom_dot(pk, &al_lat, &al_lon, v.ad)?;

    Ok(IntermediateResult {
        ab_sq: BigUint::try_from(v.ab_sq).expect("squared length is non-negative"),
        ad_sq: BigUint::try_from(v.ad_sq).expect("squared length is non-negative"),
        enc_dot_ab,
        enc_dot_ad,
    })
}

/// `E(AL.s) = E(AL_lat)^(s_lat) * E(AL_lon)^(s_lon)` for a plaintext side
/// vector `s` — a dot product computed component-wise under encryption.
fn hom_dot(
    pk: &PublicKey,
    al_lat: &Ciphertext,
    al_lon: &Ciphertext,
    side: (i64, i64),
) -> Result<Ciphertext, EvalError> {
    let lat_term = pk.hom_scalar_mul(al_lat, &BigInt::from(side.0))?;
    let lon_term = pk.hom_scalar_mul(al_lon, &BigInt::from(side.1))?;
    Ok(pk.hom_add(&lat_term, &lon_term)?)
}

/// The authority's half: decrypts the two projections and applies the
/// inclusive interval test.
pub fn evaluate_intermediate(
    sk: &PrivateKey,
    r: &IntermediateResult,
) -> Result<EvaluationOutcome, EvalError> {
    let dot_ab = sk.decrypt(&r.enc_dot_ab)?.into_inner();
    let dot_ad = sk.decrypt(&r.enc_dot_ad)?.into_inner();
    let zero = BigInt::from(0);
    let ab_sq = BigInt::from(r.ab_sq.clone());
    let ad_sq = BigInt::from(r.ad_sq.clone());
    let inside = zero <= dot_ab && dot_ab <= ab_sq && zero <= dot_ad && dot_ad <= ad_sq;
    Ok(EvaluationOutcome { inside })
}

/// Test and benchmark convenience: encrypt, compute the intermediate, and
/// evaluate it in one call. Equivalent to [`contains_plaintext`] on the
/// scaled point for every valid input.
pub fn full_pipeline(
    pk: &PublicKey,
    sk: &PrivateKey,
    loc: GeoPoint,
    fence: &Fence,
    cfg: ScaleConfig,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<EvaluationOutcome, EvalError> {
    let scaled = scale_point(loc, cfg);
    let encrypted = encrypt_location(pk, scaled, rng)?;
    let intermediate = compute_intermediate(pk, &encrypted, fence, rng)?;
    evaluate_intermediate(sk, &intermediate)
}
