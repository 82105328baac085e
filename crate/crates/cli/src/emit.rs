//! Result files: a JSON summary and a CSV density table, each written to a
//! temporary file in the target directory and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use modvar::experiments::{DensityTable, ExperimentResult};
use serde::Serialize;

use crate::manifest::{Format, RunManifest};

#[derive(Serialize)]
struct Summary<'a> {
    manifest: &'a RunManifest,
    result: &'a ExperimentResult,
}

/// Summary record: the resolved manifest followed by the result.
pub fn summary_json(manifest: &RunManifest, result: &ExperimentResult) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Summary { manifest, result })?;
    s.push('\n');
    Ok(s)
}

/// `x_label,density` with a header row, one sample per line, shortest round-trip decimals.
pub fn density_csv(table: &DensityTable) -> String {
    let mut s = format!("{},density\n", table.x_label);
    for (x, d) in table.x.iter().zip(&table.density) {
        writeln!(s, "{x:e},{d:e}").expect("writing to a String cannot fail");
    }
    s
}

/// Writes `contents` to `path` through a temporary sibling and an atomic rename.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Renders every requested file first, then writes them; returns the paths written.
pub fn emit(manifest: &RunManifest, result: &ExperimentResult, dir: &Path, format: Format) -> io::Result<Vec<PathBuf>> {
    let stem = manifest.experiment.name();
    let mut files = Vec::new();
    if format.json() {
        let json = summary_json(manifest, result).map_err(io::Error::other)?;
        files.push((dir.join(format!("{stem}.json")), json));
    }
    if format.csv() {
        if let Some(table) = &result.density {
            files.push((dir.join(format!("{stem}.csv")), density_csv(table)));
        }
    }
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (path, contents) in files {
        write_atomic(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}
