//! Paillier public-key cryptosystem with additive homomorphisms and a
//! signed plaintext codec.
//!
//! The scheme fixes the generator to `g = n + 1`, which reduces encryption
//! to one modular exponentiation plus one multiplication:
//!
//! ```text
//! E(m, r) = (1 + m*n) * r^n  mod n^2
//! D(c)    = L(c^lambda mod n^2) * mu  mod n,   L(x) = (x - 1) / n
//! ```
//!
//! Multiplying ciphertexts adds plaintexts, exponentiating a ciphertext by a
//! scalar multiplies its plaintext, and multiplying by a modular inverse
//! subtracts. Signed values are carried as residues with the `n/2` threshold
//! convention: a raw residue `r` decodes to `r` when `r < n/2` and to
//! `r - n` otherwise, so any plaintext with `|m| < n/2` round-trips.
//!
//! Every ciphertext is tagged with a fingerprint of the encrypting modulus;
//! binary operations on ciphertexts from different keys fail instead of
//! producing silent garbage.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_prime::nt_funcs::is_prime;
use num_traits::{One, Signed, Zero};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha256};
use std::fmt;
use thiserror::Error;

#[cfg(any(test, feature = "test-support"))]
pub mod reference;

/// Smallest accepted modulus size. Keys this small are only useful for
/// exhaustive cross-checks against a brute-force implementation.
pub const MIN_KEY_BITS: u64 = 16;

/// Candidate budget for one prime search, per bit of prime size.
const PRIME_ATTEMPTS_PER_BIT: u64 = 128;

/// Retries for the whole key construction (distinct primes, invertible mu).
const KEYGEN_ATTEMPTS: u32 = 16;

#[derive(Debug, Error)]
pub enum PaillierError {
    #[error("key size of {0} bits is below the minimum of {MIN_KEY_BITS}")]
    KeyTooSmall(u64),
    #[error("prime generation did not converge within the attempt budget")]
    PrimeGeneration,
    #[error("invalid prime pair for key construction")]
    InvalidPrimes,
    #[error("plaintext magnitude must stay below n/2")]
    PlaintextOutOfRange,
    #[error("nonce is not a unit modulo n")]
    InvalidNonce,
    #[error("ciphertext fingerprint {found} does not match key {expected}")]
    KeyMismatch {
        expected: KeyFingerprint,
        found: KeyFingerprint,
    },
    #[error("value is not a member of the ciphertext group modulo n^2")]
    MalformedCiphertext,
}

/// Short digest identifying a public key; carried by every ciphertext.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyFingerprint([u8; 8]);

impl KeyFingerprint {
    fn of_modulus(n: &BigUint) -> Self {
        let digest = Sha256::digest(n.to_bytes_be());
        let mut short = [0u8; 8];
        short.copy_from_slice(&digest[..8]);
        KeyFingerprint(short)
    }
}

impl fmt::Display for KeyFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for byte in self.0 {
            write!(f, "{byte:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for KeyFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KeyFingerprint({self})")
    }
}

/// Paillier public key: the modulus `n`, its cached square, and a fingerprint.
#[derive(Clone, PartialEq, Eq)]
pub struct PublicKey {
    n: BigUint,
    n_squared: BigUint,
    fingerprint: KeyFingerprint,
}

impl fmt::Debug for PublicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PublicKey")
            .field("bits", &self.n.bits())
            .field("fingerprint", &self.fingerprint)
            .finish()
    }
}

/// Paillier private key; owns a copy of the matching public key.
#[derive(Clone, PartialEq, Eq)]
pub struct PrivateKey {
    lambda: BigUint,
    mu: BigUint,
    public: PublicKey,
}

impl fmt::Debug for PrivateKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrivateKey")
            .field("public", &self.public)
            .finish_non_exhaustive()
    }
}

/// A freshly generated key pair.
#[derive(Clone, Debug)]
pub struct KeyPair {
    pub public: PublicKey,
    pub private: PrivateKey,
}

/// Element of the ciphertext group modulo `n^2`, tagged with the key it
/// belongs to.
#[derive(Clone, PartialEq, Eq)]
pub struct Ciphertext {
    value: BigUint,
    key_fingerprint: KeyFingerprint,
}

impl fmt::Debug for Ciphertext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ciphertext")
            .field("bits", &self.value.bits())
            .field("key", &self.key_fingerprint)
            .finish()
    }
}

impl Ciphertext {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn key_fingerprint(&self) -> KeyFingerprint {
        self.key_fingerprint
    }
}

/// Signed integer plaintext. Values must satisfy `|value| < n/2` for the key
/// they are encrypted under; the bound is checked at encryption time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SignedPlaintext(BigInt);

impl SignedPlaintext {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn into_inner(self) -> BigInt {
        self.0
    }

    pub fn to_i128(&self) -> Option<i128> {
        i128::try_from(&self.0).ok()
    }
}

impl fmt::Debug for SignedPlaintext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPlaintext({})", self.0)
    }
}

impl fmt::Display for SignedPlaintext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<BigInt> for SignedPlaintext {
    fn from(v: BigInt) -> Self {
        SignedPlaintext(v)
    }
}

impl From<i64> for SignedPlaintext {
    fn from(v: i64) -> Self {
        SignedPlaintext(BigInt::from(v))
    }
}

impl From<i128> for SignedPlaintext {
    fn from(v: i128) -> Self {
        SignedPlaintext(BigInt::from(v))
    }
}

impl PublicKey {
    /// Builds a public key from a modulus received out of band (for example
    /// fetched from an authority). Caches `n^2` and fingerprints `n`.
    pub fn from_modulus(n: BigUint) -> Self {
        let n_squared = &n * &n;
        let fingerprint = KeyFingerprint::of_modulus(&n);
        PublicKey {
            n,
            n_squared,
            fingerprint,
        }
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn n_squared(&self) -> &BigUint {
        &self.n_squared
    }

    pub fn fingerprint(&self) -> KeyFingerprint {
        self.fingerprint
    }

    /// Size of the modulus in bits.
    pub fn bits(&self) -> u64 {
        self.n.bits()
    }

    /// Encrypts `m` with a fresh random nonce. Two encryptions of the same
    /// plaintext produce different ciphertexts.
    pub fn encrypt(
        &self,
        m: impl Into<SignedPlaintext>,
        rng: &mut (impl RngCore + CryptoRng),
    ) -> Result<Ciphertext, PaillierError> {
        let nonce = self.sample_unit(rng);
        self.encrypt_with_nonce(m, &nonce)
    }

    /// Encrypts `m` with an explicit nonce from the unit group modulo `n`.
    /// Deterministic; exposed for cross-checks against independent
    /// implementations and for nonce-reuse tests.
    pub fn encrypt_with_nonce(
        &self,
        m: impl Into<SignedPlaintext>,
        nonce: &BigUint,
    ) -> Result<Ciphertext, PaillierError> {
        let m = m.into();
        if !self.in_plaintext_range(&m) {
            return Err(PaillierError::PlaintextOutOfRange);
        }
        if nonce.is_zero() || nonce >= &self.n || nonce.gcd(&self.n) != BigUint::one() {
            return Err(PaillierError::InvalidNonce);
        }
        let residue = self.encode_signed(&m);
        // (1 + n)^residue = 1 + residue*n  (mod n^2)
        let g_pow = (BigUint::one() + &residue * &self.n) % &self.n_squared;
        let nonce_pow = nonce.modpow(&self.n, &self.n_squared);
        let value = (g_pow * nonce_pow) % &self.n_squared;
        Ok(Ciphertext {
            value,
            key_fingerprint: self.fingerprint,
        })
    }

    /// Homomorphic addition: the result decrypts to `m1 + m2`.
    pub fn hom_add(&self, c1: &Ciphertext, c2: &Ciphertext) -> Result<Ciphertext, PaillierError> {
        self.check_owns(c1)?;
        self.check_owns(c2)?;
        Ok(Ciphertext {
            value: (&c1.value * &c2.value) % &self.n_squared,
            key_fingerprint: self.fingerprint,
        })
    }

    /// Homomorphic subtraction: adds the inverse of `c2`, so the result
    /// decrypts to `m1 - m2`.
    pub fn hom_sub(&self, c1: &Ciphertext, c2: &Ciphertext) -> Result<Ciphertext, PaillierError> {
        self.check_owns(c1)?;
        self.check_owns(c2)?;
        let inv = c2
            .value
            .modinv(&self.n_squared)
            .ok_or(PaillierError::MalformedCiphertext)?;
        Ok(Ciphertext {
            value: (&c1.value * inv) % &self.n_squared,
            key_fingerprint: self.fingerprint,
        })
    }

    /// Homomorphic scalar multiplication: the result decrypts to `s * m`.
    ///
    /// Signed scalars are handled by reducing the exponent modulo `n`, which
    /// is equivalent to exponentiating the inverse ciphertext for negative
    /// `s`. The caller is responsible for keeping the logical product within
    /// `|s * m| < n/2`; overflow wraps modulo `n` and is not detected.
    pub fn hom_scalar_mul(
        &self,
        c: &Ciphertext,
        s: &BigInt,
    ) -> Result<Ciphertext, PaillierError> {
        self.check_owns(c)?;
        let n_int = BigInt::from(self.n.clone());
        let exponent = s
            .mod_floor(&n_int)
            .to_biguint()
            .expect("floor residue is non-negative");
        Ok(Ciphertext {
            value: c.value.modpow(&exponent, &self.n_squared),
            key_fingerprint: self.fingerprint,
        })
    }

    /// Validates a raw value as a ciphertext under this key: it must lie in
    /// `[1, n^2)` and be coprime to the modulus. Used when ciphertexts arrive
    /// from the wire without provenance.
    pub fn ciphertext_from_value(&self, value: BigUint) -> Result<Ciphertext, PaillierError> {
        if value.is_zero() || value >= self.n_squared || value.gcd(&self.n) != BigUint::one() {
            return Err(PaillierError::MalformedCiphertext);
        }
        Ok(Ciphertext {
            value,
            key_fingerprint: self.fingerprint,
        })
    }

    /// True when `|m| < n/2`, the bound for unambiguous signed decoding.
    pub fn in_plaintext_range(&self, m: &SignedPlaintext) -> bool {
        let twice = m.0.abs() * 2;
        twice < BigInt::from(self.n.clone())
    }

    fn encode_signed(&self, m: &SignedPlaintext) -> BigUint {
        let n_int = BigInt::from(self.n.clone());
        m.0.mod_floor(&n_int)
            .to_biguint()
            .expect("floor residue is non-negative")
    }

    fn decode_signed(&self, residue: BigUint) -> SignedPlaintext {
        let twice = &residue * 2u8;
        if twice > self.n {
            SignedPlaintext(BigInt::from(residue) - BigInt::from(self.n.clone()))
        } else {
            SignedPlaintext(BigInt::from(residue))
        }
    }

    fn check_owns(&self, c: &Ciphertext) -> Result<(), PaillierError> {
        if c.key_fingerprint != self.fingerprint {
            return Err(PaillierError::KeyMismatch {
                expected: self.fingerprint,
                found: c.key_fingerprint,
            });
        }
        Ok(())
    }

    fn sample_unit(&self, rng: &mut (impl RngCore + CryptoRng)) -> BigUint {
        loop {
            let candidate = rng.gen_biguint_below(&self.n);
            if !candidate.is_zero() && candidate.gcd(&self.n) == BigUint::one() {
                return candidate;
            }
        }
    }
}

impl PrivateKey {
    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    /// Decrypts to the signed decoding: a raw residue `r` in `[0, n)` maps to
    /// `r` when `r < n/2` and to `r - n` otherwise.
    pub fn decrypt(&self, c: &Ciphertext) -> Result<SignedPlaintext, PaillierError> {
        self.public.check_owns(c)?;
        if c.value.is_zero()
            || c.value >= self.public.n_squared
            || c.value.gcd(&self.public.n) != BigUint::one()
        {
            return Err(PaillierError::MalformedCiphertext);
        }
        let u = c.value.modpow(&self.lambda, &self.public.n_squared);
        let l = (u - BigUint::one()) / &self.public.n;
        let residue = (l * &self.mu) % &self.public.n;
        Ok(self.public.decode_signed(residue))
    }

    pub(crate) fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    pub(crate) fn mu(&self) -> &BigUint {
        &self.mu
    }

    /// Rebuilds a private key from persisted parameters, revalidating the
    /// `mu * L(g^lambda mod n^2) = 1 (mod n)` relation.
    pub(crate) fn from_parts(
        n: BigUint,
        lambda: BigUint,
        mu: BigUint,
    ) -> Result<PrivateKey, PaillierError> {
        let public = PublicKey::from_modulus(n);
        let g = &public.n + BigUint::one();
        let l = l_function(&g.modpow(&lambda, &public.n_squared), &public.n)
            .ok_or(PaillierError::InvalidPrimes)?;
        if (l * &mu) % &public.n != BigUint::one() {
            return Err(PaillierError::InvalidPrimes);
        }
        Ok(PrivateKey { lambda, mu, public })
    }
}

impl KeyPair {
    fn from_prime_pair(p: &BigUint, q: &BigUint) -> Result<KeyPair, PaillierError> {
        if p == q || p < &BigUint::from(3u8) || q < &BigUint::from(3u8) {
            return Err(PaillierError::InvalidPrimes);
        }
        let n = p * q;
        let public = PublicKey::from_modulus(n);
        let lambda = (p - BigUint::one()).lcm(&(q - BigUint::one()));
        let g = &public.n + BigUint::one();
        let l = l_function(&g.modpow(&lambda, &public.n_squared), &public.n)
            .ok_or(PaillierError::InvalidPrimes)?;
        let mu = l.modinv(&public.n).ok_or(PaillierError::InvalidPrimes)?;
        Ok(KeyPair {
            private: PrivateKey {
                lambda,
                mu,
                public: public.clone(),
            },
            public,
        })
    }

    /// Builds a key pair from explicit primes. Exists so tests can pin tiny,
    /// fully enumerable keys (such as `p = 5`, `q = 7`); rejects non-primes.
    #[cfg(any(test, feature = "test-support"))]
    pub fn from_primes(p: u64, q: u64) -> Result<KeyPair, PaillierError> {
        if !is_prime(&p, None).probably() || !is_prime(&q, None).probably() {
            return Err(PaillierError::InvalidPrimes);
        }
        KeyPair::from_prime_pair(&BigUint::from(p), &BigUint::from(q))
    }
}

/// `L(x) = (x - 1) / n`; defined only when `x = 1 (mod n)`.
fn l_function(x: &BigUint, n: &BigUint) -> Option<BigUint> {
    let minus_one = x - BigUint::one();
    let (quotient, remainder) = minus_one.div_rem(n);
    remainder.is_zero().then_some(quotient)
}

/// Generates a fresh Paillier key pair with a modulus of exactly `bits` bits.
///
/// All randomness flows from `rng`, so a seeded generator yields a
/// deterministic key pair.
pub fn generate_keypair(
    bits: u64,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<KeyPair, PaillierError> {
    if bits < MIN_KEY_BITS {
        return Err(PaillierError::KeyTooSmall(bits));
    }
    let p_bits = bits / 2;
    let q_bits = bits - p_bits;
    for _ in 0..KEYGEN_ATTEMPTS {
        let p = generate_prime(p_bits, rng)?;
        let q = generate_prime(q_bits, rng)?;
        if p == q {
            continue;
        }
        match KeyPair::from_prime_pair(&p, &q) {
            Ok(kp) if kp.public.bits() == bits => return Ok(kp),
            _ => continue,
        }
    }
    Err(PaillierError::PrimeGeneration)
}

/// Searches for a probable prime of exactly `bits` bits. The top two bits are
/// forced so the product of two such primes has full width.
fn generate_prime(
    bits: u64,
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<BigUint, PaillierError> {
    debug_assert!(bits >= 8);
    let top_bits = BigUint::from(3u8) << (bits - 2);
    for _ in 0..bits.saturating_mul(PRIME_ATTEMPTS_PER_BIT) {
        let candidate = rng.gen_biguint(bits) | &top_bits | BigUint::one();
        if is_prime(&candidate, None).probably() {
            return Ok(candidate);
        }
    }
    Err(PaillierError::PrimeGeneration)
}

#[cfg(test)]
mod tests {
    use super::reference::ReferencePaillier;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::collections::HashSet;
    use std::sync::OnceLock;

    fn seeded(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn tiny_key() -> KeyPair {
        KeyPair::from_primes(5, 7).expect("5 and 7 are prime")
    }

    fn shared_key_256() -> &'static KeyPair {
        static KEY: OnceLock<KeyPair> = OnceLock::new();
        KEY.get_or_init(|| generate_keypair(256, &mut seeded(0x25619)).expect("keygen"))
    }

    #[test]
    fn keygen_is_deterministic_under_fixed_seed() {
        let a = generate_keypair(16, &mut seeded(7)).unwrap();
        let b = generate_keypair(16, &mut seeded(7)).unwrap();
        assert_eq!(a.public, b.public);
        assert_eq!(a.private.lambda, b.private.lambda);
        assert_eq!(a.private.mu, b.private.mu);
    }

    #[test]
    fn keygen_produces_exact_modulus_width() {
        for bits in [16, 64, 129, 256] {
            let kp = generate_keypair(bits, &mut seeded(bits)).unwrap();
            assert_eq!(kp.public.bits(), bits, "bits={bits}");
            assert_eq!(kp.public.n_squared(), &(kp.public.n() * kp.public.n()));
        }
    }

    #[test]
    fn keygen_rejects_tiny_requests() {
        assert!(matches!(
            generate_keypair(15, &mut seeded(1)),
            Err(PaillierError::KeyTooSmall(15))
        ));
    }

    #[test]
    fn injected_primes_match_hand_computed_parameters() {
        let kp = tiny_key();
        assert_eq!(kp.public.n(), &BigUint::from(35u8));
        assert_eq!(kp.public.n_squared(), &BigUint::from(1225u16));
        // lambda = lcm(4, 6), mu = lambda^-1 mod 35 because g = n + 1
        assert_eq!(kp.private.lambda, BigUint::from(12u8));
        assert_eq!(kp.private.mu, BigUint::from(3u8));
    }

    #[test]
    fn injected_primes_are_validated() {
        assert!(KeyPair::from_primes(4, 7).is_err());
        assert!(KeyPair::from_primes(5, 5).is_err());
    }

    #[test]
    fn encrypt_decrypt_round_trips_entire_tiny_plaintext_space() {
        let kp = tiny_key();
        let mut rng = seeded(2);
        for m in -17i64..=17 {
            let c = kp.public.encrypt(m, &mut rng).unwrap();
            let back = kp.private.decrypt(&c).unwrap();
            assert_eq!(back, SignedPlaintext::from(m), "m={m}");
        }
    }

    #[test]
    fn zero_and_negative_plaintexts_round_trip() {
        let kp = shared_key_256();
        let mut rng = seeded(3);
        for m in [0i64, -3, i64::MIN + 1, i64::MAX] {
            let c = kp.public.encrypt(m, &mut rng).unwrap();
            assert_eq!(kp.private.decrypt(&c).unwrap(), SignedPlaintext::from(m));
        }
    }

    #[test]
    fn top_residue_decodes_to_minus_one() {
        // E(17) * E(17) holds residue 34 = n - 1, which must decode as -1.
        let kp = tiny_key();
        let mut rng = seeded(4);
        let c = kp.public.encrypt(17, &mut rng).unwrap();
        let sum = kp.public.hom_add(&c, &c).unwrap();
        assert_eq!(kp.private.decrypt(&sum).unwrap(), SignedPlaintext::from(-1));
    }

    #[test]
    fn plaintexts_at_the_range_boundary_are_rejected() {
        let kp = tiny_key();
        let mut rng = seeded(5);
        assert!(kp.public.encrypt(17, &mut rng).is_ok());
        assert!(kp.public.encrypt(-17, &mut rng).is_ok());
        assert!(matches!(
            kp.public.encrypt(18, &mut rng),
            Err(PaillierError::PlaintextOutOfRange)
        ));
        assert!(matches!(
            kp.public.encrypt(-18, &mut rng),
            Err(PaillierError::PlaintextOutOfRange)
        ));
    }

    #[test]
    fn nonces_must_be_units() {
        let kp = tiny_key();
        for nonce in [0u64, 5, 7, 35, 70] {
            assert!(matches!(
                kp.public.encrypt_with_nonce(1, &BigUint::from(nonce)),
                Err(PaillierError::InvalidNonce)
            ));
        }
        assert!(kp.public.encrypt_with_nonce(1, &BigUint::from(2u8)).is_ok());
    }

    #[test]
    fn homomorphic_addition_examples() {
        let kp = shared_key_256();
        let mut rng = seeded(6);
        let c2 = kp.public.encrypt(2, &mut rng).unwrap();
        let c3 = kp.public.encrypt(3, &mut rng).unwrap();
        let sum = kp.public.hom_add(&c2, &c3).unwrap();
        assert_eq!(kp.private.decrypt(&sum).unwrap(), SignedPlaintext::from(5));

        let m = kp.public.encrypt(41, &mut rng).unwrap();
        let zero = kp.public.encrypt(0, &mut rng).unwrap();
        let same = kp.public.hom_add(&m, &zero).unwrap();
        assert_eq!(kp.private.decrypt(&same).unwrap(), SignedPlaintext::from(41));
    }

    #[test]
    fn homomorphic_subtraction_examples() {
        let kp = shared_key_256();
        let mut rng = seeded(7);
        let c5 = kp.public.encrypt(5, &mut rng).unwrap();
        let diff = kp.public.hom_sub(&c5, &c5).unwrap();
        assert_eq!(kp.private.decrypt(&diff).unwrap(), SignedPlaintext::from(0));

        let c2 = kp.public.encrypt(2, &mut rng).unwrap();
        let c7 = kp.public.encrypt(7, &mut rng).unwrap();
        let neg = kp.public.hom_sub(&c2, &c7).unwrap();
        assert_eq!(kp.private.decrypt(&neg).unwrap(), SignedPlaintext::from(-5));

        let zero = kp.public.encrypt(0, &mut rng).unwrap();
        let same = kp.public.hom_sub(&c7, &zero).unwrap();
        assert_eq!(kp.private.decrypt(&same).unwrap(), SignedPlaintext::from(7));
    }

    #[test]
    fn homomorphic_scalar_multiplication_examples() {
        let kp = shared_key_256();
        let mut rng = seeded(8);
        let c7 = kp.public.encrypt(7, &mut rng).unwrap();
        let zeroed = kp.public.hom_scalar_mul(&c7, &BigInt::from(0)).unwrap();
        assert_eq!(kp.private.decrypt(&zeroed).unwrap(), SignedPlaintext::from(0));

        let c3 = kp.public.encrypt(3, &mut rng).unwrap();
        let scaled = kp.public.hom_scalar_mul(&c3, &BigInt::from(-2)).unwrap();
        assert_eq!(kp.private.decrypt(&scaled).unwrap(), SignedPlaintext::from(-6));

        let kept = kp.public.hom_scalar_mul(&c3, &BigInt::from(1)).unwrap();
        assert_eq!(kp.private.decrypt(&kept).unwrap(), SignedPlaintext::from(3));
    }

    #[test]
    fn exhaustive_addition_agrees_with_reference_on_small_window() {
        let kp = tiny_key();
        let reference = ReferencePaillier::new(5, 7);
        let mut rng = seeded(9);
        for m1 in -5i64..=5 {
            for m2 in -5i64..=5 {
                let c1 = kp.public.encrypt(m1, &mut rng).unwrap();
                let c2 = kp.public.encrypt(m2, &mut rng).unwrap();
                let sum = kp.public.hom_add(&c1, &c2).unwrap();
                let via_impl = kp.private.decrypt(&sum).unwrap();
                let via_reference =
                    reference.decrypt(reference.add(as_u64(&c1), as_u64(&c2)));
                assert_eq!(via_impl, SignedPlaintext::from(m1 + m2));
                assert_eq!(via_reference, m1 + m2);
            }
        }
    }

    #[test]
    fn ciphertext_values_match_reference_for_shared_nonce() {
        let kp = tiny_key();
        let reference = ReferencePaillier::new(5, 7);
        for m in [-17i64, -4, 0, 1, 16, 17] {
            for nonce in [2u64, 11, 34] {
                let ours = kp
                    .public
                    .encrypt_with_nonce(m, &BigUint::from(nonce))
                    .unwrap();
                assert_eq!(as_u64(&ours), reference.encrypt(m, nonce), "m={m} r={nonce}");
            }
        }
    }

    #[test]
    fn operations_across_keys_are_rejected() {
        let ka = generate_keypair(64, &mut seeded(10)).unwrap();
        let kb = generate_keypair(64, &mut seeded(11)).unwrap();
        let mut rng = seeded(12);
        let ca = ka.public.encrypt(1, &mut rng).unwrap();
        let cb = kb.public.encrypt(1, &mut rng).unwrap();
        assert!(matches!(
            ka.public.hom_add(&ca, &cb),
            Err(PaillierError::KeyMismatch { .. })
        ));
        assert!(matches!(
            kb.private.decrypt(&ca),
            Err(PaillierError::KeyMismatch { .. })
        ));
    }

    #[test]
    fn wire_ciphertext_validation_rejects_non_group_values() {
        let kp = tiny_key();
        let pk = &kp.public;
        assert!(pk.ciphertext_from_value(BigUint::from(0u8)).is_err());
        assert!(pk.ciphertext_from_value(BigUint::from(5u8)).is_err());
        assert!(pk.ciphertext_from_value(BigUint::from(1225u16)).is_err());
        assert!(pk.ciphertext_from_value(BigUint::from(9000u16)).is_err());

        let mut rng = seeded(13);
        let c = pk.encrypt(4, &mut rng).unwrap();
        let revalidated = pk.ciphertext_from_value(c.value().clone()).unwrap();
        assert_eq!(
            kp.private.decrypt(&revalidated).unwrap(),
            SignedPlaintext::from(4)
        );
    }

    #[test]
    fn encryption_is_probabilistic() {
        let kp = shared_key_256();
        let mut rng = rand::thread_rng();
        let mut seen = HashSet::new();
        for _ in 0..100 {
            let c = kp.public.encrypt(42, &mut rng).unwrap();
            assert!(seen.insert(c.value().clone()), "nonce collision");
        }
    }

    #[test]
    fn reference_implementation_round_trips_its_whole_space() {
        let reference = ReferencePaillier::new(5, 7);
        for m in reference.plaintext_space() {
            for nonce in [2u64, 3, 12, 23] {
                assert_eq!(reference.decrypt(reference.encrypt(m, nonce)), m);
            }
        }
    }

    fn as_u64(c: &Ciphertext) -> u64 {
        u64::try_from(c.value()).expect("tiny key ciphertexts fit u64")
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn round_trip(m in any::<i64>()) {
                let kp = shared_key_256();
                let mut rng = seeded(m as u64 ^ 0xa5a5);
                let c = kp.public.encrypt(m, &mut rng).unwrap();
                prop_assert_eq!(kp.private.decrypt(&c).unwrap(), SignedPlaintext::from(m));
            }

            #[test]
            fn addition_is_homomorphic(m1 in any::<i32>(), m2 in any::<i32>()) {
                let kp = shared_key_256();
                let mut rng = seeded(m1 as u64 ^ ((m2 as u64) << 32));
                let c1 = kp.public.encrypt(m1 as i64, &mut rng).unwrap();
                let c2 = kp.public.encrypt(m2 as i64, &mut rng).unwrap();
                let sum = kp.public.hom_add(&c1, &c2).unwrap();
                prop_assert_eq!(
                    kp.private.decrypt(&sum).unwrap(),
                    SignedPlaintext::from(m1 as i64 + m2 as i64)
                );
            }

            #[test]
            fn scalar_multiplication_is_homomorphic(m in any::<i32>(), s in any::<i32>()) {
                let kp = shared_key_256();
                let mut rng = seeded(m as u64 ^ ((s as u64) << 32) ^ 0xffee);
                let c = kp.public.encrypt(m as i64, &mut rng).unwrap();
                let scaled = kp.public.hom_scalar_mul(&c, &BigInt::from(s)).unwrap();
                prop_assert_eq!(
                    kp.private.decrypt(&scaled).unwrap(),
                    SignedPlaintext::from(m as i128 * s as i128)
                );
            }

            #[test]
            fn subtraction_is_homomorphic(m1 in any::<i32>(), m2 in any::<i32>()) {
                let kp = shared_key_256();
                let mut rng = seeded(m1 as u64 ^ ((m2 as u64) << 16));
                let c1 = kp.public.encrypt(m1 as i64, &mut rng).unwrap();
                let c2 = kp.public.encrypt(m2 as i64, &mut rng).unwrap();
                let diff = kp.public.hom_sub(&c1, &c2).unwrap();
                prop_assert_eq!(
                    kp.private.decrypt(&diff).unwrap(),
                    SignedPlaintext::from(m1 as i64 - m2 as i64)
                );
            }
        }
    }
}
