//! On-disk catalog of rank-2 covers, one JSON object per line:
//! `{"d": k, "sigma_a": [..], "sigma_b": [..]}` with 1-indexed images.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cover::{covers_of_degree, hall_count, LiftWitness, PermCover};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::word::CyclicWord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRecord {
    pub d: usize,
    pub sigma_a: Vec<usize>,
    pub sigma_b: Vec<usize>,
}

fn one_indexed(images: &[usize]) -> Vec<usize> {
    images.iter().map(|i| i + 1).collect()
}

fn zero_indexed(images: &[usize]) -> Result<Vec<usize>> {
    images
        .iter()
        .map(|&i| i.checked_sub(1).ok_or_else(|| Error::Catalog("sheet 0 in 1-indexed record".into())))
        .collect()
}

impl CoverRecord {
    pub fn from_cover(cover: &PermCover) -> Result<Self> {
        if cover.rank() != 2 {
            return Err(Error::RankMismatch { expected: 2, found: cover.rank() });
        }
        Ok(Self {
            d: cover.degree(),
            sigma_a: one_indexed(cover.sigma(0).images()),
            sigma_b: one_indexed(cover.sigma(1).images()),
        })
    }

    pub fn to_cover(&self) -> Result<PermCover> {
        let cover = PermCover::from_images(vec![zero_indexed(&self.sigma_a)?, zero_indexed(&self.sigma_b)?])?;
        if cover.degree() != self.d {
            return Err(Error::Catalog(format!("record claims d = {} but has degree {}", self.d, cover.degree())));
        }
        Ok(cover)
    }
}

/// A cover record extended by the curve and the sheet its simple lift starts on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub d: usize,
    pub sigma_a: Vec<usize>,
    pub sigma_b: Vec<usize>,
    pub word: String,
    pub start_sheet: usize,
}

impl WitnessRecord {
    pub fn new(word: &CyclicWord, witness: &LiftWitness) -> Result<Self> {
        let CoverRecord { d, sigma_a, sigma_b } = CoverRecord::from_cover(&witness.cover)?;
        Ok(Self { d, sigma_a, sigma_b, word: word.to_string(), start_sheet: witness.elevation.start_sheet + 1 })
    }
}

pub fn catalog_path(dir: &Path, d: usize) -> PathBuf {
    dir.join(format!("covers-rank2-d{d}.jsonl"))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Catalog(format!("{}: {e}", path.display()))
}

pub fn write_catalog(dir: &Path, d: usize, covers: &[PermCover]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let path = catalog_path(dir, d);
    let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
    let mut out = BufWriter::new(file);
    for c in covers {
        let line = serde_json::to_string(&CoverRecord::from_cover(c)?).map_err(|e| io_err(&path, e))?;
        writeln!(out, "{line}").map_err(|e| io_err(&path, e))?;
    }
    out.flush().map_err(|e| io_err(&path, e))?;
    Ok(path)
}

/// Reads a catalog file, checking that every record is a canonical cover of degree `d`.
pub fn read_catalog(path: &Path, d: usize) -> Result<Vec<PermCover>> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let mut covers = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CoverRecord =
            serde_json::from_str(&line).map_err(|e| io_err(path, format!("line {}: {e}", lineno + 1)))?;
        let cover = record.to_cover()?;
        if cover.degree() != d || !cover.is_canonical() {
            return Err(io_err(path, format!("line {}: not a canonical degree-{d} cover", lineno + 1)));
        }
        covers.push(cover);
    }
    Ok(covers)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogStatus {
    Reused,
    Generated,
    /// The file existed but was unreadable or had the wrong count.
    Regenerated { reason: String },
}

/// Loads the degree-`d` catalog from `dir`, generating it when missing and
/// regenerating it when it disagrees with the subgroup count.
pub fn load_or_build(dir: &Path, d: usize, mode: Execution) -> Result<(Vec<PermCover>, CatalogStatus)> {
    let path = catalog_path(dir, d);
    let expected = hall_count(2, d);
    let status = if path.exists() {
        match read_catalog(&path, d) {
            Ok(covers) if covers.len() as u128 == expected => return Ok((covers, CatalogStatus::Reused)),
            Ok(covers) => CatalogStatus::Regenerated {
                reason: format!("found {} covers, expected {expected}", covers.len()),
            },
            Err(e) => CatalogStatus::Regenerated { reason: e.to_string() },
        }
    } else {
        CatalogStatus::Generated
    };
    let covers = covers_of_degree(2, d, mode);
    write_catalog(dir, d, &covers)?;
    Ok((covers, status))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_are_one_indexed() {
        let c = PermCover::from_images(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let r = CoverRecord::from_cover(&c).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"d":2,"sigma_a":[2,1],"sigma_b":[1,2]}"#);
        assert_eq!(r.to_cover().unwrap(), c);
        let bad = CoverRecord { d: 2, sigma_a: vec![0, 1], sigma_b: vec![1, 2] };
        assert!(bad.to_cover().is_err());
    }

    #[test]
    fn build_then_reuse_then_repair() {
        let dir = tempfile::tempdir().unwrap();
        let (covers, status) = load_or_build(dir.path(), 3, Execution::Sequential).unwrap();
        assert_eq!((covers.len(), status), (13, CatalogStatus::Generated));
        let (again, status) = load_or_build(dir.path(), 3, Execution::Sequential).unwrap();
        assert_eq!(status, CatalogStatus::Reused);
        assert_eq!(again, covers);

        write_catalog(dir.path(), 3, &covers[..5]).unwrap();
        let (fixed, status) = load_or_build(dir.path(), 3, Execution::Sequential).unwrap();
        assert!(matches!(status, CatalogStatus::Regenerated { .. }));
        assert_eq!(fixed, covers);

        fs::write(catalog_path(dir.path(), 3), "not json\n").unwrap();
        let (_, status) = load_or_build(dir.path(), 3, Execution::Sequential).unwrap();
        assert!(matches!(status, CatalogStatus::Regenerated { .. }));
    }
}
