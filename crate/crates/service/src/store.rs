//! Profile persistence: one JSON document per player under
//! `<data-dir>/profiles/<id>.json`, written atomically.
//!
//! Each profile lives behind its own async mutex together with that
//! player's in-memory game sessions, so concurrent requests from one player
//! are serialized while different players never contend.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex as StdMutex};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;
use tokio::sync::Mutex;

use qubitquest_core::progression::{GameId, PlayerProfile, ProgressionError};

use crate::play::ActiveSession;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Ledger {
        path: PathBuf,
        #[source]
        source: ProgressionError,
    },
    #[error("{path}: stored profile id {found:?} does not match the file name")]
    IdMismatch { path: PathBuf, found: String },
}

/// The on-disk document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredProfile {
    /// Hex SHA-256 of the bearer token. The token itself is never stored.
    pub token_sha256: String,
    pub profile: PlayerProfile,
}

impl StoredProfile {
    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("profile serializes");
        out.push(b'\n');
        out
    }
}

/// A loaded profile plus the player's open sessions, one per level.
#[derive(Debug)]
pub struct ProfileSlot {
    pub stored: StoredProfile,
    pub sessions: HashMap<(GameId, u8), ActiveSession>,
}

pub type SharedSlot = Arc<Mutex<ProfileSlot>>;

#[derive(Debug)]
pub struct ProfileStore {
    dir: PathBuf,
    slots: StdMutex<HashMap<String, SharedSlot>>,
    tokens: StdMutex<HashMap<String, String>>,
}

pub fn hash_token(token: &str) -> String {
    hex::encode(Sha256::digest(token.as_bytes()))
}

pub fn new_token() -> String {
    let mut bytes = [0u8; 32];
    rand::thread_rng().fill_bytes(&mut bytes);
    hex::encode(bytes)
}

pub fn profile_path(dir: &Path, profile_id: &str) -> PathBuf {
    dir.join(format!("{profile_id}.json"))
}

impl ProfileStore {
    /// Opens `<data_dir>/profiles`, creating it if needed, and loads every
    /// profile in it. A corrupt profile stops startup rather than being
    /// silently skipped.
    pub fn open(data_dir: &Path) -> Result<Self, StoreError> {
        let dir = data_dir.join("profiles");
        std::fs::create_dir_all(&dir).map_err(|source| StoreError::Io {
            path: dir.clone(),
            source,
        })?;
        let mut slots = HashMap::new();
        let mut tokens = HashMap::new();
        let entries = std::fs::read_dir(&dir).map_err(|source| StoreError::Io {
            path: dir.clone(),
            source,
        })?;
        for entry in entries {
            let path = entry
                .map_err(|source| StoreError::Io {
                    path: dir.clone(),
                    source,
                })?
                .path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let stored = load_profile(&path)?;
            tokens.insert(stored.token_sha256.clone(), stored.profile.profile_id.clone());
            slots.insert(
                stored.profile.profile_id.clone(),
                Arc::new(Mutex::new(ProfileSlot {
                    stored,
                    sessions: HashMap::new(),
                })),
            );
        }
        Ok(ProfileStore {
            dir,
            slots: StdMutex::new(slots),
            tokens: StdMutex::new(tokens),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Creates and persists a profile. Returns it with its plaintext token.
    pub async fn create(&self, nickname: &str) -> Result<(SharedSlot, String), crate::error::ApiError> {
        let profile_id = uuid::Uuid::new_v4().simple().to_string();
        let profile = PlayerProfile::new(profile_id.clone(), nickname)?;
        let token = new_token();
        let stored = StoredProfile {
            token_sha256: hash_token(&token),
            profile,
        };
        write_atomic(&self.dir, &profile_id, &stored.to_json()).await?;
        let slot = Arc::new(Mutex::new(ProfileSlot {
            stored: stored.clone(),
            sessions: HashMap::new(),
        }));
        self.slots
            .lock()
            .expect("store lock")
            .insert(profile_id.clone(), slot.clone());
        self.tokens
            .lock()
            .expect("store lock")
            .insert(stored.token_sha256, profile_id);
        Ok((slot, token))
    }

    pub fn by_token(&self, token: &str) -> Option<SharedSlot> {
        let id = self.tokens.lock().expect("store lock").get(&hash_token(token)).cloned()?;
        self.slots.lock().expect("store lock").get(&id).cloned()
    }

    pub async fn save(&self, slot: &ProfileSlot) -> std::io::Result<()> {
        let stored = &slot.stored;
        write_atomic(&self.dir, &stored.profile.profile_id, &stored.to_json()).await
    }
}

pub fn load_profile(path: &Path) -> Result<StoredProfile, StoreError> {
    let bytes = std::fs::read(path).map_err(|source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let stored: StoredProfile = serde_json::from_slice(&bytes).map_err(|source| StoreError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    if stem != stored.profile.profile_id {
        return Err(StoreError::IdMismatch {
            path: path.to_path_buf(),
            found: stored.profile.profile_id,
        });
    }
    stored.profile.verify_ledger().map_err(|source| StoreError::Ledger {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(stored)
}

/// Write to a temp file in the same directory, then rename over the target.
async fn write_atomic(dir: &Path, profile_id: &str, bytes: &[u8]) -> std::io::Result<()> {
    let target = profile_path(dir, profile_id);
    let tmp = dir.join(format!(".{profile_id}.json.tmp"));
    tokio::fs::write(&tmp, bytes).await?;
    tokio::fs::rename(&tmp, &target).await
}
