//! Report envelope shared by every output: config echo, instance hash, and
//! tool version, plus canonical JSON and hashing helpers.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Meta {
    pub tool_version: String,
    pub instance_hash: String,
    /// Full configuration echo, sorted by key.
    pub config: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(instance_hash: impl Into<String>) -> Self {
        Meta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            instance_hash: instance_hash.into(),
            config: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.config.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub meta: Meta,
    #[serde(flatten)]
    pub body: T,
}

/// Canonical JSON: struct fields serialize in declaration order and maps are
/// sorted, so equal values give byte-equal text.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
