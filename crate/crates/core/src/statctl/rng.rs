use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub type Stream = ChaCha8Rng;

/// Independent, reproducible random stream number `index` under `seed`.
///
/// Every permutation of a test draws from its own stream, so results do not
/// depend on how permutations are scheduled across worker threads.
pub fn seeded_stream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform random permutation of `0..n` drawn from stream `index`.
pub fn random_permutation(seed: u64, index: u64, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut seeded_stream(seed, index));
    perm
}

/// Counts permutations whose statistic reaches `observed`.
///
/// `stat` maps a permutation of `0..n` to the permuted statistic. Work is
/// spread over the current rayon pool; the count is schedule-independent.
pub fn permutation_count_at_least<F>(seed: u64, n_perm: usize, n: usize, observed: f64, stat: F) -> usize
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    (0..n_perm)
        .into_par_iter()
        .filter(|&k| {
            let perm = random_permutation(seed, k as u64, n);
            stat(&perm) >= observed
        })
        .count()
}

/// Stable 64-bit FNV-1a hash of `seed` followed by the given labels.
///
/// Used to give every (model, layer, metric) cell its own permutation seed and
/// for golden-subset selection. Stable across platforms and toolchains.
pub fn derive_seed(seed: u64, labels: &[&str]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    let mut eat = |b: u8| {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    };
    seed.to_le_bytes().into_iter().for_each(&mut eat);
    for label in labels {
        label.bytes().for_each(&mut eat);
        eat(0xff);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn draws(seed: u64, index: u64) -> Vec<u64> {
        let mut s = seeded_stream(seed, index);
        (0..8).map(|_| s.random()).collect()
    }

    #[test]
    fn same_seed_and_index_repeat() {
        assert_eq!(draws(7, 3), draws(7, 3));
    }

    #[test]
    fn distinct_indices_differ() {
        assert_ne!(draws(7, 0), draws(7, 1));
        assert_ne!(draws(7, 0), draws(8, 0));
    }

    #[test]
    fn count_is_independent_of_worker_count() {
        let data: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
        let stat = |p: &[usize]| p.iter().enumerate().map(|(i, &j)| i as f64 * data[j]).sum::<f64>();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| permutation_count_at_least(11, 400, 30, 0.0, stat))
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn derived_seeds_are_label_sensitive() {
        assert_ne!(derive_seed(1, &["a", "bc"]), derive_seed(1, &["ab", "c"]));
        assert_eq!(derive_seed(1, &["x"]), derive_seed(1, &["x"]));
    }
}
