use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::filter::io::decode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairStatus {
    Ok,
    MissingCounterpart,
    NonRgb,
    Corrupt,
}

impl PairStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PairStatus::Ok => "ok",
            PairStatus::MissingCounterpart => "missing-counterpart",
            PairStatus::Corrupt => "corrupt",
            PairStatus::NonRgb => "non-rgb",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    /// Path relative to the domain root, `/`-separated.
    pub pair_id: String,
    pub human_path: Option<PathBuf>,
    pub cat_path: Option<PathBuf>,
    pub status: PairStatus,
}

/// Filename-level join of two mirrored directory trees, sorted by pair id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairManifest {
    records: Vec<PairRecord>,
}

impl PairManifest {
    pub fn records(&self) -> &[PairRecord] {
        &self.records
    }

    /// Records usable downstream.
    pub fn ok(&self) -> impl Iterator<Item = &PairRecord> {
        self.records.iter().filter(|r| r.status == PairStatus::Ok)
    }

    pub fn count(&self, status: PairStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["pair_id", "human_path", "cat_path", "status"])?;
        let show = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.pair_id.as_str(),
                &show(&r.human_path),
                &show(&r.cat_path),
                r.status.as_str(),
            ])?;
        }
        w.into_inner().map_err(|e| Error::invalid(e.to_string()))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }
}

/// Regular files under `root` keyed by `/`-joined relative path, skipping
/// hidden entries.
fn walk(root: &Path) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = WalkDir::new(root)
        .follow_links(true)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in entries {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(root).expect("walk stays under root");
        let id = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        out.insert(id, entry.into_path());
    }
    Ok(out)
}

fn inspect(path: &Path) -> PairStatus {
    match decode(path) {
        Ok(img) if img.color().has_color() => PairStatus::Ok,
        Ok(_) => PairStatus::NonRgb,
        Err(_) => PairStatus::Corrupt,
    }
}

/// Pairs files by relative path. Unmatched, undecodable and single-channel
/// files are kept with their exclusion status.
pub fn build_manifest(human_dir: impl AsRef<Path>, cat_dir: impl AsRef<Path>) -> Result<PairManifest> {
    let (human_dir, cat_dir) = (human_dir.as_ref(), cat_dir.as_ref());
    let human = walk(human_dir)?;
    let cat = walk(cat_dir)?;

    let mut ids: Vec<&String> = human.keys().chain(cat.keys()).collect();
    ids.sort();
    ids.dedup();
    let records: Vec<PairRecord> = ids
        .par_iter()
        .map(|&id| {
            let (h, c) = (human.get(id).cloned(), cat.get(id).cloned());
            let status = match (&h, &c) {
                (Some(hp), Some(cp)) => inspect(hp).max(inspect(cp)),
                _ => PairStatus::MissingCounterpart,
            };
            PairRecord {
                pair_id: id.clone(),
                human_path: h,
                cat_path: c,
                status,
            }
        })
        .collect();

    let manifest = PairManifest { records };
    if manifest.ok().next().is_none() {
        log::warn!(
            "no usable pairs between {} and {}",
            human_dir.display(),
            cat_dir.display()
        );
    }
    Ok(manifest)
}
