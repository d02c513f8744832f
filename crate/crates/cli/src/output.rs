//! Artifact writing: atomic file emission, CSV formatting and the
//! self-verifying run manifest.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! failed run never leaves a half-written artifact. The manifest is always
//! written last and records an FNV-1a content hash per artifact, making run
//! records self-checking.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// 64-bit FNV-1a over raw bytes; stable across platforms.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Writes bytes atomically (temp file + rename) and returns the artifact
/// record for the manifest.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<ArtifactRecord, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("creating {dir:?}: {e}")))?;
    let final_path = dir.join(name);
    let tmp_path = dir.join(format!("{name}.tmp"));
    fs::write(&tmp_path, bytes).map_err(|e| CliError::Io(format!("writing {tmp_path:?}: {e}")))?;
    fs::rename(&tmp_path, &final_path)
        .map_err(|e| CliError::Io(format!("renaming into {final_path:?}: {e}")))?;
    Ok(ArtifactRecord {
        file: name.to_string(),
        bytes: bytes.len() as u64,
        fnv1a64: format!("{:016x}", fnv1a64(bytes)),
        path: final_path,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ArtifactRecord {
    pub file: String,
    pub bytes: u64,
    pub fnv1a64: String,
    #[serde(skip)]
    pub path: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a> {
    pub version: &'static str,
    pub study: &'a str,
    pub seed: u64,
    pub config: &'a std::collections::BTreeMap<String, String>,
    pub artifacts: &'a [ArtifactRecord],
    pub wall_clock_ms: u128,
}

pub fn write_manifest(
    dir: &Path,
    study: &str,
    seed: u64,
    config: &std::collections::BTreeMap<String, String>,
    artifacts: &[ArtifactRecord],
    wall_clock_ms: u128,
) -> Result<ArtifactRecord, CliError> {
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        study,
        seed,
        config,
        artifacts,
        wall_clock_ms,
    };
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Io(format!("serializing manifest: {e}")))?;
    write_atomic(dir, "manifest.json", json.as_bytes())
}

/// Formats a float with the shortest round-trip representation, '.' decimal
/// separator, no locale anywhere.
#[inline]
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// A `t,mean,ci,bound` series; the bound column is empty when absent.
pub fn series_csv(times: &[f64], mean: &[f64], ci: &[f64], bound: Option<&[f64]>) -> String {
    let mut out = String::from("t,mean,ci,bound\n");
    for i in 0..times.len() {
        out.push_str(&fmt_f64(times[i]));
        out.push(',');
        out.push_str(&fmt_f64(mean[i]));
        out.push(',');
        out.push_str(&fmt_f64(ci[i]));
        out.push(',');
        if let Some(b) = bound {
            out.push_str(&fmt_f64(b[i]));
        }
        out.push('\n');
    }
    out
}

/// Trajectory export `t,x_0..x_{d-1},favg,gap`.
pub fn trajectory_csv(traj: &sgflab_core::sde::Trajectory) -> String {
    let d = traj.dim;
    let mut out = String::from("t");
    for j in 0..d {
        out.push_str(&format!(",x_{j}"));
    }
    out.push_str(",favg,gap\n");
    for i in 0..traj.len() {
        out.push_str(&fmt_f64(traj.times[i]));
        for v in traj.state(i) {
            out.push(',');
            out.push_str(&fmt_f64(*v));
        }
        out.push(',');
        out.push_str(&fmt_f64(traj.running_objective_average[i]));
        out.push(',');
        out.push_str(&fmt_f64(traj.gap(i)));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_known_vectors() {
        // standard FNV-1a test vectors
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn atomic_write_and_hash() {
        let dir = std::env::temp_dir().join(format!("sgflab_out_test_{}", std::process::id()));
        let rec = write_atomic(&dir, "x.csv", b"t,mean\n1,2\n").unwrap();
        assert!(rec.path.exists());
        assert!(!dir.join("x.csv.tmp").exists());
        let bytes = fs::read(&rec.path).unwrap();
        assert_eq!(format!("{:016x}", fnv1a64(&bytes)), rec.fnv1a64);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn csv_formatting_is_plain_ascii() {
        let csv = series_csv(&[0.5, 1.0], &[0.25, 0.125], &[0.0, 0.0], None);
        assert_eq!(csv, "t,mean,ci,bound\n0.5,0.25,0,\n1,0.125,0,\n");
        assert!(!csv.contains(' '));
    }
}
