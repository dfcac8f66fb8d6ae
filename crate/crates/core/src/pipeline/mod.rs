//! End-to-end alignment runs: per-layer metrics, one global FDR pass,
//! per-model summaries and dissimilarity rankings.

mod align;
mod rank;
mod report;
mod summary;

pub use align::{align_tables, run_align, AlignOptions, AlignOutput, PairDetail, METRICS};
pub use rank::{rank_dissimilar, DissimilarityRanking, RankedLayer};
pub use report::{read_layer_reports, write_csv, LayerReport};
pub use summary::{summarize_models, ModelSummary};

pub const LAYER_REPORTS_FILE: &str = "layer_reports.csv";
pub const MODEL_SUMMARY_FILE: &str = "model_summary.csv";
pub const DISSIMILARITY_FILE: &str = "dissimilarity.csv";
pub const REPORT_JSON_FILE: &str = "report.json";
