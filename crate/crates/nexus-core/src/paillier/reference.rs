//! Brute-force Paillier over plain `u64` modular arithmetic.
//!
//! This is a deliberately naive, independent implementation used to
//! cross-check the main code path: exponentiation is a schoolbook
//! square-and-multiply loop, `mu` and modular inverses are found by linear
//! scan, and the generator power `g^m` is computed in full rather than via
//! the `1 + m*n` shortcut. It only supports keys with `n^2 < 2^64`.

use num_integer::Integer;
use std::ops::RangeInclusive;

/// A tiny Paillier instance with every parameter in the clear.
#[derive(Debug, Clone, Copy)]
pub struct ReferencePaillier {
    pub n: u64,
    pub n_squared: u64,
    pub g: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl ReferencePaillier {
    /// Panics on invalid input; this is test scaffolding, not an API.
    pub fn new(p: u64, q: u64) -> Self {
        assert!(p > 2 && q > 2 && p != q);
        let n = p * q;
        let n_squared = n * n;
        assert!(
            n_squared < u64::MAX / n,
            "reference implementation only handles tiny keys"
        );
        let g = n + 1;
        let lambda = (p - 1).lcm(&(q - 1));
        let l = l_function(powmod(g, lambda, n_squared), n);
        let mu = invmod_scan(l % n, n).expect("lambda image must be invertible");
        ReferencePaillier {
            n,
            n_squared,
            g,
            lambda,
            mu,
        }
    }

    pub fn encrypt(&self, m: i64, nonce: u64) -> u64 {
        assert!(nonce > 0 && nonce < self.n && nonce.gcd(&self.n) == 1);
        let residue = m.rem_euclid(self.n as i64) as u64;
        mulmod(
            powmod(self.g, residue, self.n_squared),
            powmod(nonce, self.n, self.n_squared),
            self.n_squared,
        )
    }

    pub fn decrypt(&self, c: u64) -> i64 {
        let l = l_function(powmod(c, self.lambda, self.n_squared), self.n);
        let residue = mulmod(l, self.mu, self.n);
        if 2 * residue > self.n {
            residue as i64 - self.n as i64
        } else {
            residue as i64
        }
    }

    pub fn add(&self, c1: u64, c2: u64) -> u64 {
        mulmod(c1, c2, self.n_squared)
    }

    pub fn sub(&self, c1: u64, c2: u64) -> u64 {
        let inv = invmod_scan(c2, self.n_squared).expect("ciphertext must be a unit");
        mulmod(c1, inv, self.n_squared)
    }

    pub fn scalar_mul(&self, c: u64, s: i64) -> u64 {
        let exponent = s.rem_euclid(self.n as i64) as u64;
        powmod(c, exponent, self.n_squared)
    }

    /// Every valid nonce: the units of `Z_n`.
    pub fn nonces(&self) -> Vec<u64> {
        (1..self.n).filter(|r| r.gcd(&self.n) == 1).collect()
    }

    /// Every decodable signed plaintext: `|m| < n/2`.
    pub fn plaintext_space(&self) -> RangeInclusive<i64> {
        let half = ((self.n - 1) / 2) as i64;
        -half..=half
    }
}

fn l_function(x: u64, n: u64) -> u64 {
    assert_eq!((x - 1) % n, 0);
    (x - 1) / n
}

fn powmod(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    let mut result = 1u64;
    let mut base = base % modulus;
    while exponent > 0 {
        if exponent & 1 == 1 {
            result = mulmod(result, base, modulus);
        }
        base = mulmod(base, base, modulus);
        exponent >>= 1;
    }
    result
}

fn mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    ((a as u128 * b as u128) % modulus as u128) as u64
}

fn invmod_scan(x: u64, modulus: u64) -> Option<u64> {
    (1..modulus).find(|candidate| mulmod(x, *candidate, modulus) == 1)
}
