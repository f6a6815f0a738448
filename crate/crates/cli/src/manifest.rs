//! Run manifests: every output directory gets a `manifest.json` that echoes
//! the fully resolved configuration, the master seed, timestamps, and the
//! file inventory, so any run can be reproduced from its manifest alone.
//!
//! The manifest is written *before* any data file and rewritten once the run
//! finishes (adding the end timestamp and the final inventory); a directory
//! holding data without a manifest therefore never occurs, even on crashes.

use serde::Serialize;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// Version of this tool, from the package metadata.
    pub tool_version: &'static str,
    /// Subcommand that produced the directory.
    pub command: String,
    /// Seed from which every random stream in the run derives.
    pub master_seed: u64,
    /// Fully resolved configuration; feeding it back reproduces the run.
    pub config: serde_json::Value,
    pub started_at: String,
    /// Set on the final rewrite, once all outputs are on disk.
    pub finished_at: Option<String>,
    /// Files the run produces (relative to the manifest's directory).
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn begin(
        command: &str,
        master_seed: u64,
        config: serde_json::Value,
        outputs: Vec<String>,
    ) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            master_seed,
            config,
            started_at: utc_now_iso(),
            finished_at: None,
            outputs,
        }
    }

    /// Serializes the manifest into `dir/manifest.json`.
    pub fn write(&self, dir: &Path) -> io::Result<PathBuf> {
        let file = dir.join("manifest.json");
        let mut body = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        body.push('\n');
        fs::write(&file, body)?;
        Ok(file)
    }

    /// Marks the run finished and rewrites the manifest in place.
    pub fn finish(&mut self, dir: &Path) -> io::Result<PathBuf> {
        self.finished_at = Some(utc_now_iso());
        self.write(dir)
    }
}

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`, computed directly from the
/// system clock (no date-time dependency needed for one fixed format).
pub fn utc_now_iso() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = secs / 86_400;
    let rem = secs % 86_400;
    let (year, month, day) = civil_from_days(days as i64);
    format!(
        "{year:04}-{month:02}-{day:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Gregorian date from days since 1970-01-01 (Howard Hinnant's algorithm).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}
