//! Hashed output files and the JSON sidecar manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::CliError;

pub const MANIFEST: &str = "metadata.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes run outputs into one directory and records their digests.
pub struct OutputDir {
    dir: PathBuf,
    force: bool,
    config_hash: String,
    files: BTreeMap<String, String>,
}

impl OutputDir {
    /// Fails if any of `names` (plus the manifest) already exists and `force` is off.
    pub fn create(dir: &Path, force: bool, config_hash: &str, names: &[&str]) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        if !force {
            for name in names.iter().chain(std::iter::once(&MANIFEST)) {
                let p = dir.join(name);
                if p.exists() {
                    return Err(CliError::Io(format!(
                        "{} already exists (use --force to overwrite)",
                        p.display()
                    )));
                }
            }
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            force,
            config_hash: config_hash.to_string(),
            files: BTreeMap::new(),
        })
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if !self.force && path.exists() {
            return Err(CliError::Io(format!("{} already exists (use --force to overwrite)", path.display())));
        }
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.insert(name.to_string(), sha256_hex(contents.as_bytes()));
        Ok(())
    }

    /// CSV with a `#` comment line carrying the config hash and column units.
    pub fn write_csv(&mut self, name: &str, columns: &[(&str, &str)], rows: impl Iterator<Item = Vec<f64>>) -> Result<(), CliError> {
        let mut s = String::new();
        let units: Vec<String> = columns.iter().map(|(c, u)| format!("{c} [{u}]")).collect();
        let _ = writeln!(s, "# config_hash={}; columns: {}", self.config_hash, units.join(", "));
        let names: Vec<&str> = columns.iter().map(|(c, _)| *c).collect();
        let _ = writeln!(s, "{}", names.join(","));
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.10e}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        self.write(name, &s)
    }

    /// Writes the sidecar with the config echo, extra metadata and file digests.
    pub fn finish(self, config: Value, metadata: Value) -> Result<PathBuf, CliError> {
        let manifest = json!({
            "config_hash": self.config_hash,
            "config": config,
            "metadata": metadata,
            "files": self.files,
        });
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))? + "\n";
        let path = self.dir.join(MANIFEST);
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Ok(path)
    }
}

/// Re-checks digests and config hashes of a run directory.
/// Returns the list of problems (empty when everything matches).
pub fn verify_dir(dir: &Path) -> Result<Vec<String>, CliError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let manifest: Value = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let hash = manifest["config_hash"].as_str().unwrap_or_default().to_string();
    let mut problems = Vec::new();

    match serde_json::from_value::<super::config::RunConfig>(manifest["config"].clone()) {
        Ok(cfg) if cfg.hash() == hash => {}
        Ok(_) => problems.push("config echo does not reproduce the recorded config hash".to_string()),
        Err(e) => problems.push(format!("config echo unreadable: {e}")),
    }
    let files = manifest["files"].as_object().cloned().unwrap_or_default();
    if files.is_empty() {
        problems.push("manifest lists no files".into());
    }
    for (name, digest) in files {
        let p = dir.join(&name);
        match fs::read(&p) {
            Ok(bytes) => {
                if digest.as_str() != Some(sha256_hex(&bytes).as_str()) {
                    problems.push(format!("{name}: digest mismatch"));
                }
                let head: String = String::from_utf8_lossy(&bytes).lines().take(2).collect::<Vec<_>>().join("\n");
                if !head.contains(&format!("config_hash={hash}")) {
                    problems.push(format!("{name}: config hash missing or different"));
                }
            }
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    Ok(problems)
}
