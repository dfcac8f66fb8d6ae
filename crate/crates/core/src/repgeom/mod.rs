//! Geometric alignment between paired representations: centred Gram
//! matrices, HSIC, linear and RBF CKA, cosine RDMs and Mantel testing.

mod cka;
mod gram;
mod mantel;
mod rdm;

pub use cka::{cka_linear, cka_rbf, Bandwidth};
pub use gram::{center_gram, hsic, linear_gram, median_pairwise_distance, rbf_gram, GramMatrix};
pub use mantel::{mantel, CorrelationMethod, MantelResult, DEFAULT_MANTEL_PERMUTATIONS};
pub use rdm::{rdm_cosine, Rdm};
