use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::distshift::{energy_perm_test, mmd_perm_test, paired_shift_test, w1_projected, DEFAULT_NORMALITY_ALPHA};
use crate::error::{Error, Result};
use crate::ingest::{golden_subset, load_layer_tables, read_layer_manifest, LayerTable};
use crate::repgeom::{
    cka_linear, cka_rbf, mantel, rdm_cosine, Bandwidth, CorrelationMethod, DEFAULT_MANTEL_PERMUTATIONS,
};
use crate::statctl::{bh_fdr, derive_seed, PvalueGrid};

use super::rank::{rank_dissimilar, DissimilarityRanking};
use super::report::{write_csv, LayerReport, LAYER_REPORT_COLUMNS};
use super::summary::{summarize_models, ModelSummary, MODEL_SUMMARY_COLUMNS};
use super::{DISSIMILARITY_FILE, LAYER_REPORTS_FILE, MODEL_SUMMARY_FILE, REPORT_JSON_FILE};

/// Metrics whose p-values enter the FDR grid, in grid order per layer.
pub const METRICS: [&str; 4] = ["mantel", "mmd", "energy", "paired"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignOptions {
    pub seed: u64,
    pub perms_mantel: usize,
    pub perms_shift: usize,
    pub fdr_q: f64,
    /// Restrict every layer to the seeded hash subset `h(pair_id) % k == 0`.
    pub golden_subset_k: Option<u64>,
    pub mantel_method: CorrelationMethod,
    pub normality_alpha: f64,
    /// Include per-pair arrays in the JSON report.
    pub include_pairs: bool,
}

impl Default for AlignOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            perms_mantel: DEFAULT_MANTEL_PERMUTATIONS,
            perms_shift: 200,
            fdr_q: 0.05,
            golden_subset_k: None,
            mantel_method: CorrelationMethod::Spearman,
            normality_alpha: DEFAULT_NORMALITY_ALPHA,
            include_pairs: false,
        }
    }
}

impl AlignOptions {
    fn validate(&self) -> Result<()> {
        if self.perms_mantel == 0 || self.perms_shift == 0 {
            return Err(Error::config("permutation counts must be positive"));
        }
        if !(self.fdr_q > 0.0 && self.fdr_q < 1.0) {
            return Err(Error::config(format!("FDR level {} outside (0, 1)", self.fdr_q)));
        }
        if !(self.normality_alpha > 0.0 && self.normality_alpha < 1.0) {
            return Err(Error::config(format!(
                "normality level {} outside (0, 1)",
                self.normality_alpha
            )));
        }
        if self.golden_subset_k == Some(0) {
            return Err(Error::config("golden subset modulus must be positive"));
        }
        Ok(())
    }
}

/// Per-pair values behind a layer's paired statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDetail {
    pub model: String,
    pub layer: String,
    pub pair_ids: Vec<String>,
    pub cosine: Vec<f64>,
    pub l2: Vec<f64>,
    pub projected_difference: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignOutput {
    pub options: AlignOptions,
    pub reports: Vec<LayerReport>,
    pub summaries: Vec<ModelSummary>,
    pub ranking: DissimilarityRanking,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairDetail>,
}

fn layer_report(t: &LayerTable, opts: &AlignOptions) -> Result<(LayerReport, PairDetail)> {
    let (x, y) = (&t.x_human, &t.y_cat);
    let seed = |metric: &str| derive_seed(opts.seed, &[&t.model, &t.layer, metric]);

    let (dx, dy) = (rdm_cosine(x)?, rdm_cosine(y)?);
    let rsa = mantel(&dx, &dy, 1, 0, CorrelationMethod::Spearman)?.r;
    let mant = mantel(&dx, &dy, opts.perms_mantel, seed("mantel"), opts.mantel_method)?;
    let mmd = mmd_perm_test(x, y, Bandwidth::MedianHeuristic, opts.perms_shift, seed("mmd"))?;
    let energy = energy_perm_test(x, y, opts.perms_shift, seed("energy"))?;
    let w1 = w1_projected(x, y)?;
    let paired = paired_shift_test(x, y, opts.normality_alpha)?;
    let sim = crate::distshift::paired_similarity(x, y)?;

    let missing_p = || Error::Internal("permutation test returned no p-value".into());
    let report = LayerReport {
        model: t.model.clone(),
        layer: t.layer.clone(),
        n: t.n(),
        cka_linear: cka_linear(x, y)?,
        cka_rbf: cka_rbf(x, y, Bandwidth::MedianHeuristic)?,
        rsa_spearman: rsa,
        mantel_r: mant.r,
        mantel_p: mant.p,
        mmd_stat: mmd.statistic,
        mmd_bandwidth: mmd.bandwidth_used.unwrap_or(f64::NAN),
        mmd_p: mmd.p_value.ok_or_else(missing_p)?,
        energy_stat: energy.statistic,
        energy_p: energy.p_value.ok_or_else(missing_p)?,
        w1: w1.statistic,
        mean_cosine: paired.mean_cosine,
        mean_l2: paired.mean_l2,
        paired_test_type: paired.test_type.as_str().to_owned(),
        paired_stat: paired.statistic,
        paired_p: paired.p_value,
        shapiro_p: paired.shapiro_p,
        mantel_q: f64::NAN,
        mantel_rejected: false,
        mmd_q: f64::NAN,
        mmd_rejected: false,
        energy_q: f64::NAN,
        energy_rejected: false,
        paired_q: f64::NAN,
        paired_rejected: false,
    };
    let detail = PairDetail {
        model: t.model.clone(),
        layer: t.layer.clone(),
        pair_ids: x.pair_ids().to_vec(),
        cosine: sim.cosines,
        l2: sim.l2,
        projected_difference: paired.projected,
    };
    Ok((report, detail))
}

/// Computes every layer's report and applies one BH pass over all p-values.
pub fn align_tables(tables: &[LayerTable], opts: &AlignOptions) -> Result<AlignOutput> {
    opts.validate()?;
    if tables.is_empty() {
        return Err(Error::invalid("no layers to align"));
    }
    let mut tables: Vec<&LayerTable> = tables.iter().collect();
    tables.sort_by(|a, b| (&a.model, &a.layer).cmp(&(&b.model, &b.layer)));
    if let Some(w) = tables
        .windows(2)
        .find(|w| (&w[0].model, &w[0].layer) == (&w[1].model, &w[1].layer))
    {
        return Err(Error::invalid(format!(
            "layer {}/{} appears twice",
            w[0].model, w[0].layer
        )));
    }

    let results = tables
        .par_iter()
        .map(|t| {
            let name = format!("layer {}/{}", t.model, t.layer);
            let table = match opts.golden_subset_k {
                Some(k) => golden_subset(t, k, opts.seed).map_err(|e| e.context(&name))?,
                None => (*t).clone(),
            };
            layer_report(&table, opts).map_err(|e| e.context(&name))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut reports, details): (Vec<LayerReport>, Vec<PairDetail>) = results.into_iter().unzip();

    let mut grid = PvalueGrid::new();
    for r in &reports {
        for (metric, p) in METRICS.iter().zip([r.mantel_p, r.mmd_p, r.energy_p, r.paired_p]) {
            grid.push(&r.model, &r.layer, *metric, p)?;
        }
    }
    if grid.len() != METRICS.len() * reports.len() {
        return Err(Error::Internal(format!(
            "FDR grid holds {} p-values for {} layers",
            grid.len(),
            reports.len()
        )));
    }
    let fdr = bh_fdr(&grid, opts.fdr_q)?;
    for (r, chunk) in reports.iter_mut().zip(fdr.entries.chunks_exact(METRICS.len())) {
        (r.mantel_q, r.mantel_rejected) = (chunk[0].q_value, chunk[0].rejected);
        (r.mmd_q, r.mmd_rejected) = (chunk[1].q_value, chunk[1].rejected);
        (r.energy_q, r.energy_rejected) = (chunk[2].q_value, chunk[2].rejected);
        (r.paired_q, r.paired_rejected) = (chunk[3].q_value, chunk[3].rejected);
    }

    Ok(AlignOutput {
        options: *opts,
        summaries: summarize_models(&reports),
        ranking: rank_dissimilar(&reports),
        pairs: if opts.include_pairs { details } else { Vec::new() },
        reports,
    })
}

impl AlignOutput {
    /// Writes the three CSV reports and the JSON mirror into `out_dir`.
    pub fn write(&self, out_dir: impl AsRef<Path>) -> Result<()> {
        let out_dir = out_dir.as_ref();
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        write_csv(out_dir.join(LAYER_REPORTS_FILE), &self.reports, &LAYER_REPORT_COLUMNS)?;
        write_csv(
            out_dir.join(MODEL_SUMMARY_FILE),
            &self.summaries,
            &MODEL_SUMMARY_COLUMNS,
        )?;
        let rank_path = out_dir.join(DISSIMILARITY_FILE);
        std::fs::write(&rank_path, self.ranking.to_csv()?).map_err(|e| Error::io(rank_path, e))?;
        let json_path = out_dir.join(REPORT_JSON_FILE);
        let mut json = serde_json::to_vec_pretty(self)?;
        json.push(b'\n');
        std::fs::write(&json_path, json).map_err(|e| Error::io(json_path, e))
    }
}

/// Loads the layer manifest, aligns every layer and writes the reports.
pub fn run_align(
    layer_manifest: impl AsRef<Path>,
    out_dir: impl AsRef<Path>,
    opts: &AlignOptions,
) -> Result<AlignOutput> {
    opts.validate()?;
    let entries = read_layer_manifest(layer_manifest)?;
    let tables = load_layer_tables(&entries)?;
    let out = align_tables(&tables, opts)?;
    out.write(out_dir)?;
    Ok(out)
}
