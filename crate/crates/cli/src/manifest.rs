//! Run manifests: everything needed to reproduce one invocation, written
//! atomically next to the CSV outputs after they land on disk.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::AppError;

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub label: String,
    pub argv: Vec<String>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub code_version: String,
    pub wall_time_s: f64,
    /// The exact TOML this run consumed (preset or file contents).
    pub config_toml: String,
    /// The scenario after unit resolution, in SI.
    pub config_resolved: serde_json::Value,
    pub outputs: Vec<OutputDigest>,
    /// Per-run decisions worth flagging (e.g. sub-reference-distance gains).
    pub notes: Vec<String>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    let mut s = String::with_capacity(64);
    for b in digest {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Write via a temp file in the same directory plus rename, so readers never
/// observe a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let dir = path
        .parent()
        .ok_or_else(|| AppError::io(format!("no parent directory for {}", path.display())))?;
    fs::create_dir_all(dir)
        .map_err(|e| AppError::io(format!("creating {}: {e}", dir.display())))?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)
            .map_err(|e| AppError::io(format!("creating {}: {e}", tmp.display())))?;
        f.write_all(bytes)
            .map_err(|e| AppError::io(format!("writing {}: {e}", tmp.display())))?;
        f.sync_all()
            .map_err(|e| AppError::io(format!("syncing {}: {e}", tmp.display())))?;
    }
    fs::rename(&tmp, path)
        .map_err(|e| AppError::io(format!("renaming into {}: {e}", path.display())))?;
    Ok(())
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<(), AppError> {
        let json = serde_json::to_vec_pretty(self)
            .map_err(|e| AppError::io(format!("serializing manifest: {e}")))?;
        write_atomic(path, &json)
    }
}
