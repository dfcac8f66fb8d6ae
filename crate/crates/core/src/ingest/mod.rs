//! Paired-dataset manifests, feature files and activation vectorization.

mod layers;
mod manifest;
pub mod npy;
mod vectorize;

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;

pub use layers::{golden_subset, load_layer_tables, read_layer_manifest, LayerEntry, LayerTable, MIN_PAIRS};
pub use manifest::{build_manifest, PairManifest, PairRecord, PairStatus};
pub use npy::{read_npy, write_npy, Dtype, NpyArray};
pub use vectorize::{vectorize, RawActivation};

/// Reads a pair-id sidecar: one id per line, trailing newline optional.
pub fn read_sidecar(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let ids: Vec<String> = text.lines().map(|l| l.trim_end_matches('\r').to_owned()).collect();
    if let Some(i) = ids.iter().position(|s| s.is_empty()) {
        return Err(Error::invalid(format!(
            "{}: empty pair id on line {}",
            path.display(),
            i + 1
        )));
    }
    Ok(ids)
}

pub fn write_sidecar(path: impl AsRef<Path>, ids: &[String]) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::new();
    for id in ids {
        if id.is_empty() || id.contains(['\n', '\r']) {
            return Err(Error::invalid(format!("pair id {id:?} cannot be written to a sidecar")));
        }
        text.push_str(id);
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Loads an NPY feature file and its sidecar into an `f64` matrix.
pub fn load_feature_matrix(npy_path: impl AsRef<Path>, sidecar_path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let (npy_path, sidecar_path) = (npy_path.as_ref(), sidecar_path.as_ref());
    let arr = read_npy(npy_path)?;
    let ids = read_sidecar(sidecar_path)?;
    if ids.len() != arr.rows {
        return Err(Error::Misaligned(format!(
            "{} has {} rows but {} lists {} pair ids",
            npy_path.display(),
            arr.rows,
            sidecar_path.display(),
            ids.len()
        )));
    }
    FeatureMatrix::new(arr.rows, arr.cols, arr.values, ids)
        .map_err(|e| Error::invalid(format!("{}: {e}", npy_path.display())))
}

/// Writes a matrix as NPY plus sidecar.
pub fn save_feature_matrix(
    x: &FeatureMatrix,
    npy_path: impl AsRef<Path>,
    sidecar_path: impl AsRef<Path>,
    dtype: Dtype,
) -> Result<()> {
    write_npy(npy_path, x.n(), x.d(), dtype, x.values())?;
    write_sidecar(sidecar_path, x.pair_ids())
}
