//! Output files: written atomically, stamped with the run's config hash and
//! seed, and removed again if the command fails part-way.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Identifies a run: a digest of the command, its settings and the bytes of
/// its input files (not their paths), plus the seed.
#[derive(Debug, Clone)]
pub struct Stamp {
    pub config_hash: String,
    pub seed: u64,
}

impl Stamp {
    pub fn new<S: Serialize>(command: &str, settings: &S, inputs: &[&Path], seed: u64) -> Result<Self> {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        h.update(serde_json::to_vec(settings)?);
        for path in inputs {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            h.update([0]);
            h.update(Sha256::digest(&bytes));
        }
        Ok(Stamp {
            config_hash: hex::encode(h.finalize()),
            seed,
        })
    }

    /// Text for the leading `#` comment line of CSV/TSV/text artifacts.
    pub fn line(&self) -> String {
        format!("axiomscore config_hash={} seed={}", self.config_hash, self.seed)
    }
}

/// Tracks files written by the current command.
#[derive(Debug, Default)]
pub struct Outputs {
    created: Vec<PathBuf>,
}

impl Outputs {
    /// Writes through a temporary file in the target directory, then renames
    /// it into place, so a failure never leaves a half-written artifact.
    pub fn write<F>(&mut self, path: &Path, body: F) -> Result<()>
    where
        F: FnOnce(&mut BufWriter<&mut File>) -> Result<()>,
    {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("writing {}", path.display()))?;
        {
            let mut w = BufWriter::new(tmp.as_file_mut());
            body(&mut w)?;
            w.flush().with_context(|| format!("writing {}", path.display()))?;
        }
        tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        self.created.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_text(&mut self, path: &Path, text: &str) -> Result<()> {
        self.write(path, |w| Ok(w.write_all(text.as_bytes())?))
    }

    pub fn created(&self) -> &[PathBuf] {
        &self.created
    }

    /// Removes everything written so far.
    pub fn rollback(&mut self) {
        for p in self.created.drain(..) {
            let _ = std::fs::remove_file(p);
        }
    }
}
