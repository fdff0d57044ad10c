//! CSV import and export, and atomic file writes.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so export
//! followed by import is lossless and output is byte-deterministic.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::beltrami::{BeltramiField, PolarGrid};
use crate::siegel::SiegelPoint;
use crate::{CMatrix, Error, Result};

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Invalid(format!("{} has no file name", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Row-major CSV where each entry occupies two columns `re,im`.
pub fn matrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{},{}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: {s:?} is not a number")))
}

pub fn matrix_from_csv(text: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (k, line) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let nums = line
            .split(',')
            .map(|s| parse_f64(s, k + 1))
            .collect::<Result<Vec<_>>>()?;
        if nums.len() % 2 != 0 {
            return Err(Error::Parse(format!(
                "line {}: odd number of columns",
                k + 1
            )));
        }
        rows.push(nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
}

pub fn siegel_to_csv(z: &SiegelPoint) -> String {
    matrix_to_csv(z.matrix())
}

pub fn siegel_from_csv(text: &str) -> Result<SiegelPoint> {
    SiegelPoint::new(matrix_from_csv(text)?)
}

const FIELD_HEADER: &str = "r,theta,re,im";

/// One row `r,theta,re,im` per grid node, radial-major.
pub fn field_to_csv(mu: &BeltramiField) -> String {
    let mut out = String::from(FIELD_HEADER);
    out.push('\n');
    for ((r, theta), v) in mu.grid().nodes().zip(mu.values()) {
        out.push_str(&format!("{r},{theta},{},{}\n", v.re, v.im));
    }
    out
}

/// Reads a field written by [`field_to_csv`]. The grid is rebuilt from the
/// node counts and the listed coordinates must match it.
pub fn field_from_csv(text: &str) -> Result<BeltramiField> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some(FIELD_HEADER) {
        return Err(Error::Parse(format!("expected header {FIELD_HEADER:?}")));
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let nums = line
            .split(',')
            .map(|s| parse_f64(s, k + 2))
            .collect::<Result<Vec<_>>>()?;
        let [r, theta, re, im] = nums[..] else {
            return Err(Error::Parse(format!("line {}: expected 4 columns", k + 2)));
        };
        rows.push((r, theta, Complex64::new(re, im)));
    }
    let angular = rows.iter().take_while(|row| row.0 == rows[0].0).count();
    if angular == 0 || rows.len() % angular != 0 {
        return Err(Error::Parse("rows do not form a polar grid".into()));
    }
    let grid = PolarGrid::new(rows.len() / angular, angular)?;
    for ((r, theta), row) in grid.nodes().zip(&rows) {
        if (r - row.0).abs() > 1e-12 || (theta - row.1).abs() > 1e-12 {
            return Err(Error::Parse(format!(
                "node ({}, {}) does not lie on the reconstructed grid",
                row.0, row.1
            )));
        }
    }
    BeltramiField::new(grid, rows.into_iter().map(|row| row.2).collect())
}
