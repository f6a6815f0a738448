//! CSV emission and ingestion.
//!
//! All numeric output uses 17 significant digits in scientific notation with
//! `.` as the decimal separator and `\n` line endings, which round-trips
//! every finite f64 bit-exactly and is identical across platforms.

use crate::CliError;
use ckls_core::experiments::RepRecord;
use ckls_core::{Path as SamplePath, SamplingGrid};
use std::fs;
use std::io;
use std::path::Path;

/// One f64 with 17 significant digits (bit-exact round-trip).
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a simulated path as `t,value` rows under a header line.
pub fn write_path_csv(file: &Path, path: &SamplePath) -> io::Result<()> {
    let delta = path.delta();
    let mut body = String::with_capacity(path.values().len() * 48);
    body.push_str("t,value\n");
    for (i, v) in path.values().iter().enumerate() {
        body.push_str(&sig17(i as f64 * delta));
        body.push(',');
        body.push_str(&sig17(*v));
        body.push('\n');
    }
    fs::write(file, body)
}

/// Reads a `t,value` CSV back into a path on a uniform grid.
///
/// The time column must advance by a constant step; every violation or parse
/// failure is reported with its 1-based line number.
pub fn read_path_csv(file: &Path) -> Result<SamplePath, CliError> {
    let text = fs::read_to_string(file)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", file.display())))?;
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if idx == 0 {
            if line.trim() != "t,value" {
                return Err(malformed(file, lineno, "expected header `t,value`"));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let Some((t_str, v_str)) = line.split_once(',') else {
            return Err(malformed(file, lineno, "expected two comma-separated fields"));
        };
        let t: f64 = t_str
            .trim()
            .parse()
            .map_err(|e| malformed(file, lineno, &format!("time field `{t_str}`: {e}")))?;
        let v: f64 = v_str
            .trim()
            .parse()
            .map_err(|e| malformed(file, lineno, &format!("value field `{v_str}`: {e}")))?;
        times.push((lineno, t));
        values.push(v);
    }
    if values.len() < 2 {
        return Err(CliError::Runtime(format!(
            "{}: a path needs at least 2 rows, found {}",
            file.display(),
            values.len()
        )));
    }
    let n = values.len() - 1;
    let delta = (times[n].1 - times[0].1) / n as f64;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(CliError::Runtime(format!(
            "{}: time column is not increasing (inferred step {delta})",
            file.display()
        )));
    }
    for (i, &(lineno, t)) in times.iter().enumerate() {
        let expected = times[0].1 + i as f64 * delta;
        if (t - expected).abs() > 1e-9 * delta.max(t.abs()) {
            return Err(malformed(
                file,
                lineno,
                &format!("time {t} breaks the uniform step {delta}"),
            ));
        }
    }
    let grid = SamplingGrid::from_delta_n(delta, n)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", file.display())))?;
    SamplePath::new(grid, values).map_err(|e| CliError::Runtime(format!("{}: {e}", file.display())))
}

fn malformed(file: &Path, lineno: usize, detail: &str) -> CliError {
    CliError::Runtime(format!(
        "{}:{}: malformed CSV row: {}",
        file.display(),
        lineno,
        detail
    ))
}

/// Writes per-replication records as `rep,seed,estimate,z` rows.
pub fn write_per_rep_csv(file: &Path, rows: &[RepRecord]) -> io::Result<()> {
    let mut body = String::with_capacity(rows.len() * 56 + 20);
    body.push_str("rep,seed,estimate,z\n");
    for r in rows {
        body.push_str(&format!(
            "{},{},{},{}\n",
            r.rep,
            r.seed,
            sig17(r.estimate),
            sig17(r.z)
        ));
    }
    fs::write(file, body)
}

/// Writes plot-ready `x,y` rows.
pub fn write_xy_csv(file: &Path, rows: &[(f64, f64)]) -> io::Result<()> {
    let mut body = String::with_capacity(rows.len() * 48 + 8);
    body.push_str("x,y\n");
    for &(x, y) in rows {
        body.push_str(&sig17(x));
        body.push(',');
        body.push_str(&sig17(y));
        body.push('\n');
    }
    fs::write(file, body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig17_round_trips_awkward_values() {
        for v in [
            std::f64::consts::PI,
            5.75e-4,
            1.0 / 3.0,
            123_456.789_012_345,
            f64::MIN_POSITIVE,
        ] {
            let back: f64 = sig17(v).parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits());
        }
    }

    #[test]
    fn path_csv_round_trips_bit_exactly() {
        let grid = SamplingGrid::from_delta_n(0.25, 4).unwrap();
        let path = SamplePath::new(grid, vec![1.0, 1.5, 0.75, 2.0, 1.25]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("path.csv");
        write_path_csv(&file, &path).unwrap();
        let back = read_path_csv(&file).unwrap();
        assert_eq!(back.values(), path.values());
        assert_eq!(back.delta(), path.delta());
    }

    #[test]
    fn malformed_rows_name_their_line() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("bad.csv");
        std::fs::write(&file, "t,value\n0.0,1.0\n0.1,oops\n").unwrap();
        let err = read_path_csv(&file).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains(":3:"), "line number missing from `{msg}`");
        assert!(msg.contains("oops"));
    }
}
