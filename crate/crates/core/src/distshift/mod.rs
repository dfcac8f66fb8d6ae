//! Distribution-shift statistics between domains (MMD, energy distance,
//! projected 1-Wasserstein) and paired per-sample similarity and stability tests.

mod energy;
mod mmd;
mod normality;
mod paired;
mod wasserstein;
mod wilcoxon;

pub use energy::{energy_distance, energy_perm_test};
pub use mmd::{median_heuristic, mmd_perm_test, mmd_unbiased};
pub use normality::{shapiro_wilk, ShapiroWilk, SHAPIRO_MAX_N};
pub use paired::{
    paired_shift_test, paired_similarity, paired_t, PairedSimilarity, PairedStability, PairedTest,
    DEFAULT_NORMALITY_ALPHA,
};
pub use wasserstein::{w1_projected, w1_sorted};
pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonResult, WILCOXON_EXACT_MAX_N};

/// Outcome of a two-sample shift statistic, with its permutation p-value when tested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftResult<T = f64> {
    pub statistic: T,
    pub p_value: Option<f64>,
    pub bandwidth_used: Option<T>,
    pub n_x: usize,
    pub n_y: usize,
}
