use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::report::LayerReport;

/// Per-model aggregates over its layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    pub n_layers: usize,
    pub mean_cka_linear: f64,
    pub max_cka_linear: f64,
    pub mean_cka_rbf: f64,
    pub max_cka_rbf: f64,
    pub mean_rsa_spearman: f64,
    pub max_rsa_spearman: f64,
    pub mean_mmd_stat: f64,
    pub max_mmd_stat: f64,
    pub mean_energy_stat: f64,
    pub max_energy_stat: f64,
    pub mean_w1: f64,
    pub max_w1: f64,
    pub mean_cosine: f64,
    pub max_cosine: f64,
    pub mean_l2: f64,
    pub max_l2: f64,
    pub best_layer_by_cka_rbf: String,
    pub best_layer_by_cka_linear: String,
}

pub(crate) const MODEL_SUMMARY_COLUMNS: [&str; 20] = [
    "model",
    "n_layers",
    "mean_cka_linear",
    "max_cka_linear",
    "mean_cka_rbf",
    "max_cka_rbf",
    "mean_rsa_spearman",
    "max_rsa_spearman",
    "mean_mmd_stat",
    "max_mmd_stat",
    "mean_energy_stat",
    "max_energy_stat",
    "mean_w1",
    "max_w1",
    "mean_cosine",
    "max_cosine",
    "mean_l2",
    "max_l2",
    "best_layer_by_cka_rbf",
    "best_layer_by_cka_linear",
];

fn mean_max(layers: &[&LayerReport], f: impl Fn(&LayerReport) -> f64) -> (f64, f64) {
    let vals: Vec<f64> = layers.iter().map(|r| f(r)).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    (mean, vals.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// First layer (in `(model, layer)` order) attaining the maximum.
fn argmax(layers: &[&LayerReport], f: impl Fn(&LayerReport) -> f64) -> String {
    let mut best = layers[0];
    for r in &layers[1..] {
        if f(r) > f(best) {
            best = r;
        }
    }
    best.layer.clone()
}

/// One summary per model, sorted by model id.
pub fn summarize_models(reports: &[LayerReport]) -> Vec<ModelSummary> {
    let mut by_model: BTreeMap<&str, Vec<&LayerReport>> = BTreeMap::new();
    for r in reports {
        by_model.entry(&r.model).or_default().push(r);
    }
    by_model
        .into_iter()
        .map(|(model, mut layers)| {
            layers.sort_by(|a, b| a.layer.cmp(&b.layer));
            let (mean_cka_linear, max_cka_linear) = mean_max(&layers, |r| r.cka_linear);
            let (mean_cka_rbf, max_cka_rbf) = mean_max(&layers, |r| r.cka_rbf);
            let (mean_rsa_spearman, max_rsa_spearman) = mean_max(&layers, |r| r.rsa_spearman);
            let (mean_mmd_stat, max_mmd_stat) = mean_max(&layers, |r| r.mmd_stat);
            let (mean_energy_stat, max_energy_stat) = mean_max(&layers, |r| r.energy_stat);
            let (mean_w1, max_w1) = mean_max(&layers, |r| r.w1);
            let (mean_cosine, max_cosine) = mean_max(&layers, |r| r.mean_cosine);
            let (mean_l2, max_l2) = mean_max(&layers, |r| r.mean_l2);
            ModelSummary {
                model: model.to_owned(),
                n_layers: layers.len(),
                mean_cka_linear,
                max_cka_linear,
                mean_cka_rbf,
                max_cka_rbf,
                mean_rsa_spearman,
                max_rsa_spearman,
                mean_mmd_stat,
                max_mmd_stat,
                mean_energy_stat,
                max_energy_stat,
                mean_w1,
                max_w1,
                mean_cosine,
                max_cosine,
                mean_l2,
                max_l2,
                best_layer_by_cka_rbf: argmax(&layers, |r| r.cka_rbf),
                best_layer_by_cka_linear: argmax(&layers, |r| r.cka_linear),
            }
        })
        .collect()
}
