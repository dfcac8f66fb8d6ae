use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metrics for one (model, layer). The `*_q` / `*_rejected` columns are
/// filled by the global FDR pass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub model: String,
    pub layer: String,
    pub n: usize,
    pub cka_linear: f64,
    pub cka_rbf: f64,
    pub rsa_spearman: f64,
    pub mantel_r: f64,
    pub mantel_p: f64,
    pub mmd_stat: f64,
    pub mmd_bandwidth: f64,
    pub mmd_p: f64,
    pub energy_stat: f64,
    pub energy_p: f64,
    pub w1: f64,
    pub mean_cosine: f64,
    pub mean_l2: f64,
    pub paired_test_type: String,
    pub paired_stat: Option<f64>,
    pub paired_p: f64,
    pub shapiro_p: Option<f64>,
    pub mantel_q: f64,
    pub mantel_rejected: bool,
    pub mmd_q: f64,
    pub mmd_rejected: bool,
    pub energy_q: f64,
    pub energy_rejected: bool,
    pub paired_q: f64,
    pub paired_rejected: bool,
}

impl LayerReport {
    pub fn key(&self) -> (&str, &str) {
        (&self.model, &self.layer)
    }
}

/// Serializes rows with a header; the header is written even when empty.
pub fn write_csv<S: Serialize>(path: impl AsRef<Path>, rows: &[S], header: &[&str]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(header)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_layer_reports(path: impl AsRef<Path>) -> Result<Vec<LayerReport>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(Error::from)
}

pub(crate) const LAYER_REPORT_COLUMNS: [&str; 28] = [
    "model",
    "layer",
    "n",
    "cka_linear",
    "cka_rbf",
    "rsa_spearman",
    "mantel_r",
    "mantel_p",
    "mmd_stat",
    "mmd_bandwidth",
    "mmd_p",
    "energy_stat",
    "energy_p",
    "w1",
    "mean_cosine",
    "mean_l2",
    "paired_test_type",
    "paired_stat",
    "paired_p",
    "shapiro_p",
    "mantel_q",
    "mantel_rejected",
    "mmd_q",
    "mmd_rejected",
    "energy_q",
    "energy_rejected",
    "paired_q",
    "paired_rejected",
];
