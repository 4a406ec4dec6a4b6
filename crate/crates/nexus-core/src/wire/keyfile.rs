//! Key persistence for the authority: modulus and private parameters as
//! base-10 strings in a JSON file with restrictive permissions, so service
//! restarts keep the deployment key.

use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;
use thiserror::Error;

use crate::paillier::{KeyPair, PaillierError, PrivateKey};
use crate::wire::schema::WireBigInt;

#[derive(Debug, Error)]
pub enum KeyfileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed key file: {0}")]
    Format(#[from] serde_json::Error),
    #[error("key file fails validation: {0}")]
    InvalidKey(#[from] PaillierError),
    #[error("key file declares {declared} bits but the modulus has {actual}")]
    BitsMismatch { declared: u64, actual: u64 },
}

#[derive(Serialize, Deserialize)]
struct KeyFile {
    bits: u64,
    n: WireBigInt,
    lambda: WireBigInt,
    mu: WireBigInt,
}

/// Writes the key pair as owner-readable JSON (mode 0600 on Unix).
pub fn save_keypair(path: impl AsRef<Path>, keypair: &KeyPair) -> Result<(), KeyfileError> {
    let file = KeyFile {
        bits: keypair.public.bits(),
        n: WireBigInt::from(keypair.public.n()),
        lambda: WireBigInt::from(keypair.private.lambda()),
        mu: WireBigInt::from(keypair.private.mu()),
    };
    let json = serde_json::to_string_pretty(&file)?;
    let mut options = std::fs::OpenOptions::new();
    options.write(true).create(true).truncate(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::OpenOptionsExt;
        options.mode(0o600);
    }
    let mut handle = options.open(path)?;
    handle.write_all(json.as_bytes())?;
    handle.write_all(b"\n")?;
    Ok(())
}

/// Loads and revalidates a persisted key pair.
pub fn load_keypair(path: impl AsRef<Path>) -> Result<KeyPair, KeyfileError> {
    let text = std::fs::read_to_string(path)?;
    let file: KeyFile = serde_json::from_str(&text)?;
    let private = PrivateKey::from_parts(
        file.n.to_biguint(),
        file.lambda.to_biguint(),
        file.mu.to_biguint(),
    )?;
    let actual = private.public().bits();
    if actual != file.bits {
        return Err(KeyfileError::BitsMismatch {
            declared: file.bits,
            actual,
        });
    }
    Ok(KeyPair {
        public: private.public().clone(),
        private,
    })
}
