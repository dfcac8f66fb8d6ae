use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::report::LayerReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLayer {
    pub model: String,
    pub layer: String,
    pub value: f64,
}

/// Layers ordered from most to least dissimilar under three criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissimilarityRanking {
    pub lowest_cka_linear: Vec<RankedLayer>,
    pub lowest_rsa_spearman: Vec<RankedLayer>,
    pub largest_w1: Vec<RankedLayer>,
}

/// One row of the flattened ranking CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct RankingRow<'a> {
    pub criterion: &'a str,
    pub rank: usize,
    pub model: &'a str,
    pub layer: &'a str,
    pub value: f64,
}

const RANKING_COLUMNS: [&str; 5] = ["criterion", "rank", "model", "layer", "value"];

fn ranked(reports: &[LayerReport], value: impl Fn(&LayerReport) -> f64, ascending: bool) -> Vec<RankedLayer> {
    let mut rows: Vec<RankedLayer> = reports
        .iter()
        .map(|r| RankedLayer {
            model: r.model.clone(),
            layer: r.layer.clone(),
            value: value(r),
        })
        .collect();
    rows.sort_by(|a, b| {
        let by_value = a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal);
        let by_value = if ascending { by_value } else { by_value.reverse() };
        by_value.then_with(|| (&a.model, &a.layer).cmp(&(&b.model, &b.layer)))
    });
    rows
}

/// Lowest linear CKA, lowest RSA and largest projected W1 first; ties fall
/// back to `(model, layer)` order.
pub fn rank_dissimilar(reports: &[LayerReport]) -> DissimilarityRanking {
    DissimilarityRanking {
        lowest_cka_linear: ranked(reports, |r| r.cka_linear, true),
        lowest_rsa_spearman: ranked(reports, |r| r.rsa_spearman, true),
        largest_w1: ranked(reports, |r| r.w1, false),
    }
}

impl DissimilarityRanking {
    /// Flattened `criterion,rank,model,layer,value` CSV.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows = self.rows();
        let mut w = csv::Writer::from_writer(Vec::new());
        if rows.is_empty() {
            w.write_record(RANKING_COLUMNS)?;
        }
        for row in rows {
            w.serialize(row)?;
        }
        w.into_inner().map_err(|e| Error::invalid(e.to_string()))
    }

    fn rows(&self) -> Vec<RankingRow<'_>> {
        [
            ("lowest_cka_linear", &self.lowest_cka_linear),
            ("lowest_rsa_spearman", &self.lowest_rsa_spearman),
            ("largest_w1", &self.largest_w1),
        ]
        .into_iter()
        .flat_map(|(criterion, list)| {
            list.iter().enumerate().map(move |(i, r)| RankingRow {
                criterion,
                rank: i + 1,
                model: &r.model,
                layer: &r.layer,
                value: r.value,
            })
        })
        .collect()
    }
}
