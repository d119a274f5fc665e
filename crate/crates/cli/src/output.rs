//! Atomic file output, content hashes and run manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Writes `bytes` to a sibling temporary file, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path
        .file_name()
        .context("output path has no file name")?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("hashing {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[derive(Debug, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
    pub duration_seconds: f64,
}

/// Collects inputs and outputs of one command and writes its manifest.
pub struct Run {
    command: &'static str,
    out_dir: PathBuf,
    started: Instant,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl Run {
    pub fn start(command: &'static str, out_dir: &Path) -> Self {
        Self {
            command,
            out_dir: out_dir.to_path_buf(),
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    /// Writes `bytes` to `name` inside the output directory.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        write_atomic(&path, bytes)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        self.write(name, &json_bytes(value)?)
    }

    /// Writes `<command>.manifest.json` and returns its path.
    pub fn finish(self, seed: u64, config: &BTreeMap<String, String>) -> Result<PathBuf> {
        let hash = |p: &PathBuf| -> Result<FileHash> {
            Ok(FileHash {
                path: p.display().to_string(),
                sha256: sha256_file(p)?,
            })
        };
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            command: self.command.to_string(),
            seed,
            config: config.clone(),
            inputs: self.inputs.iter().map(hash).collect::<Result<_>>()?,
            outputs: self.outputs.iter().map(hash).collect::<Result<_>>()?,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = self.out_dir.join(format!("{}.manifest.json", self.command));
        write_atomic(&path, &json_bytes(&manifest)?)?;
        Ok(path)
    }
}
