use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::statctl::derive_seed;

use super::{load_feature_matrix, read_sidecar};

/// Smallest paired sample a layer may carry.
pub const MIN_PAIRS: usize = 4;

/// One row of the layer manifest CSV.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct LayerEntry {
    pub model: String,
    pub layer: String,
    pub human_feature_path: PathBuf,
    pub cat_feature_path: PathBuf,
    pub sidecar_path: PathBuf,
    /// Cat-domain sidecar; when given it must list the same ids as `sidecar_path`.
    #[serde(default)]
    pub cat_sidecar_path: Option<PathBuf>,
}

/// Human and cat features for one (model, layer), aligned by pair id.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerTable {
    pub model: String,
    pub layer: String,
    pub x_human: FeatureMatrix,
    pub y_cat: FeatureMatrix,
}

impl LayerTable {
    pub fn new(model: impl Into<String>, layer: impl Into<String>, x: FeatureMatrix, y: FeatureMatrix) -> Result<Self> {
        let (model, layer) = (model.into(), layer.into());
        if x.pair_ids() != y.pair_ids() {
            return Err(Error::Misaligned(format!(
                "layer {model}/{layer}: human and cat pair ids differ"
            )));
        }
        if x.n() < MIN_PAIRS {
            return Err(Error::invalid(format!(
                "layer {model}/{layer}: {} pairs, need at least {MIN_PAIRS}",
                x.n()
            )));
        }
        Ok(Self {
            model,
            layer,
            x_human: x,
            y_cat: y,
        })
    }

    pub fn n(&self) -> usize {
        self.x_human.n()
    }
}

/// Reads the layer manifest; relative paths resolve against its directory.
pub fn read_layer_manifest(path: impl AsRef<Path>) -> Result<Vec<LayerEntry>> {
    let path = path.as_ref();
    let base = path.parent().unwrap_or(Path::new(""));
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for row in csv::Reader::from_reader(file).deserialize::<LayerEntry>() {
        let mut e = row?;
        for p in [&mut e.human_feature_path, &mut e.cat_feature_path, &mut e.sidecar_path] {
            *p = base.join(&*p);
        }
        if let Some(p) = e.cat_sidecar_path.as_mut() {
            *p = base.join(&*p);
        }
        entries.push(e);
    }
    let mut keys: Vec<(&str, &str)> = entries.iter().map(|e| (e.model.as_str(), e.layer.as_str())).collect();
    keys.sort();
    if let Some(w) = keys.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::invalid(format!("layer {}/{} listed twice", w[0].0, w[0].1)));
    }
    if entries.is_empty() {
        return Err(Error::invalid(format!("{}: no layers listed", path.display())));
    }
    Ok(entries)
}

fn load_one(e: &LayerEntry) -> Result<LayerTable> {
    let name = format!("{}/{}", e.model, e.layer);
    let wrap = |err: Error| match err {
        Error::Misaligned(m) => Error::Misaligned(format!("layer {name}: {m}")),
        other => other,
    };
    if let Some(cat_sidecar) = &e.cat_sidecar_path {
        if read_sidecar(cat_sidecar)? != read_sidecar(&e.sidecar_path)? {
            return Err(Error::Misaligned(format!(
                "layer {name}: {} and {} list different pair ids",
                e.sidecar_path.display(),
                cat_sidecar.display()
            )));
        }
    }
    let x = load_feature_matrix(&e.human_feature_path, &e.sidecar_path).map_err(wrap)?;
    let y = load_feature_matrix(&e.cat_feature_path, &e.sidecar_path).map_err(wrap)?;
    LayerTable::new(&e.model, &e.layer, x, y)
}

/// Loads every layer in parallel, sorted by (model, layer).
pub fn load_layer_tables(entries: &[LayerEntry]) -> Result<Vec<LayerTable>> {
    let mut tables = entries.par_iter().map(load_one).collect::<Result<Vec<_>>>()?;
    tables.sort_by(|a, b| (&a.model, &a.layer).cmp(&(&b.model, &b.layer)));
    Ok(tables)
}

/// Keeps pairs whose seeded hash of the pair id is divisible by `k`.
pub fn golden_subset(table: &LayerTable, k: u64, seed: u64) -> Result<LayerTable> {
    if k == 0 {
        return Err(Error::invalid("golden subset modulus must be positive"));
    }
    let ids = table.x_human.pair_ids();
    let keep = |i: usize| derive_seed(seed, &[&ids[i]]).is_multiple_of(k);
    let x = table.x_human.select_rows(keep)?;
    let y = table.y_cat.select_rows(keep)?;
    LayerTable::new(&table.model, &table.layer, x, y)
}
