//! Run manifests and atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use fpbc_core::rng::PRNG_NAME;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<InputRecord>,
    pub seed: Option<u64>,
    pub version: String,
    pub prng: String,
    pub outputs: Vec<InputRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], seed: Option<u64>) -> Self {
        RunManifest {
            command: command.into(),
            args: args.to_vec(),
            inputs: Vec::new(),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            prng: PRNG_NAME.into(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn add_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.push(InputRecord {
            path: name.into(),
            sha256: sha256_hex(bytes),
        });
    }
}

/// Write via a temporary file in the same directory, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `<out>.manifest.json` next to an output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}
