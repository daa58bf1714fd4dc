//! Disk cache keyed by the SHA-256 of the canonical request serialization.
//! Hits replay the stored bytes, so cached and fresh runs agree exactly.

use crate::config::RunConfig;
use anyhow::Context;
use hexphase::report::sha256_hex;
use std::path::PathBuf;

fn path_for(cfg: &RunConfig, request: &str) -> PathBuf {
    let key = sha256_hex(request.as_bytes());
    PathBuf::from(&cfg.cache_dir).join(format!("{key}.out"))
}

pub fn load(cfg: &RunConfig, request: &str) -> anyhow::Result<Option<String>> {
    let path = path_for(cfg, request);
    match std::fs::read_to_string(&path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e).with_context(|| format!("reading cache entry {}", path.display())),
    }
}

pub fn store(cfg: &RunConfig, request: &str, text: &str) -> anyhow::Result<()> {
    let path = path_for(cfg, request);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating cache dir {}", dir.display()))?;
    }
    std::fs::write(&path, text)
        .with_context(|| format!("writing cache entry {}", path.display()))?;
    Ok(())
}
