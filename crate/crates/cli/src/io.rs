//! CSV and JSON reading and writing.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use magnitude_core::signal::DiscreteSignal;
use magnitude_core::PointCloud;
use serde::{Deserialize, Serialize};

/// Numeric rows of a headerless or single-header CSV file.
pub fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(e) => bail!("{}: line {}: {e}", path.display(), i + 1),
        }
    }
    if rows.is_empty() {
        bail!("{}: no numeric rows", path.display());
    }
    Ok(rows)
}

pub fn read_cloud(path: &Path) -> Result<PointCloud> {
    Ok(PointCloud::from_rows(&read_rows(path)?)?)
}

pub fn read_signal(path: &Path, freq_hz: f64) -> Result<DiscreteSignal> {
    let rows = read_rows(path)?;
    if let Some(bad) = rows.iter().position(|r| r.len() != 1) {
        bail!("{}: signal files hold one column, row {} has {}", path.display(), bad + 1, rows[bad].len());
    }
    Ok(DiscreteSignal::new(rows.into_iter().map(|r| r[0]).collect(), freq_hz)?)
}

pub fn write_signal(path: &Path, signal: &DiscreteSignal) -> Result<()> {
    let mut out = String::with_capacity(signal.len() * 20);
    for v in signal.samples() {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))
}

/// Sidecar written next to preprocessed segments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentMeta {
    pub freq_hz: f64,
    #[serde(default)]
    pub segments: usize,
}

pub const SEGMENT_META: &str = "meta.json";

pub fn read_segment_meta(dir: &Path) -> Result<Option<SegmentMeta>> {
    let path = dir.join(SEGMENT_META);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Some(serde_json::from_str(&text).with_context(|| format!("{}: invalid metadata", path.display()))?))
}

/// CSV files directly inside `dir`, sorted by name.
pub fn csv_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

pub fn subdirs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
