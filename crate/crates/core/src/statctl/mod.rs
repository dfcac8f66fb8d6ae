//! Shared statistical machinery: Benjamini-Hochberg control and
//! reproducible random substreams for permutation tests.

mod fdr;
mod rng;

pub use fdr::{bh_fdr, FdrEntry, FdrOutcome, PvalueEntry, PvalueGrid};
pub use rng::{derive_seed, permutation_count_at_least, random_permutation, seeded_stream, Stream};
