//! Direct, unoptimised implementations used as test oracles, plus random
//! instance generators.
#![allow(dead_code)]

use felix_core::FeatureMatrix;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, d: usize, shift: f64) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| normal(rng) + shift).collect::<Vec<f64>>())
        .collect::<Vec<_>>()
}

pub fn gaussian(rng: &mut ChaCha8Rng, n: usize, d: usize, shift: f64) -> FeatureMatrix {
    FeatureMatrix::from_rows(&gaussian_rows(rng, n, d, shift)).unwrap()
}

/// `y = x A + noise` for a random `A`, so the pair has real structure.
pub fn related(rng: &mut ChaCha8Rng, x: &FeatureMatrix, dy: usize, noise: f64) -> FeatureMatrix {
    let a: Vec<f64> = (0..x.d() * dy).map(|_| normal(rng)).collect();
    let rows: Vec<Vec<f64>> = x
        .rows()
        .map(|r| {
            (0..dy)
                .map(|j| {
                    let lin: f64 = r.iter().enumerate().map(|(i, v)| v * a[i * dy + j]).sum();
                    lin + noise * normal(rng)
                })
                .collect()
        })
        .collect();
    FeatureMatrix::from_rows(&rows).unwrap()
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| normal(rng));
    g.qr().q()
}

pub fn to_matrix(x: &FeatureMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(x.n(), x.d(), x.values())
}

pub fn from_matrix(m: &DMatrix<f64>) -> FeatureMatrix {
    let rows: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    FeatureMatrix::from_rows(&rows).unwrap()
}

pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
}

fn sqdist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn centering(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64)
}

pub fn gram_linear(x: &FeatureMatrix) -> DMatrix<f64> {
    let m = to_matrix(x);
    &m * m.transpose()
}

pub fn gram_rbf(x: &FeatureMatrix, sigma: f64) -> DMatrix<f64> {
    DMatrix::from_fn(x.n(), x.n(), |i, j| {
        (-sqdist(x.row(i), x.row(j)) / (2.0 * sigma * sigma)).exp()
    })
}

/// `tr(K H L H) / (n-1)²` on raw Gram matrices.
pub fn hsic(k: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    let n = k.nrows();
    let h = centering(n);
    (k * &h * l * &h).trace() / ((n - 1) as f64).powi(2)
}

pub fn cka(k: &DMatrix<f64>, l: &DMatrix<f64>) -> f64 {
    hsic(k, l) / (hsic(k, k) * hsic(l, l)).sqrt()
}

pub fn median_nonzero_distance(rows: &[&[f64]]) -> f64 {
    let mut d: Vec<f64> = Vec::new();
    for i in 0..rows.len() {
        for j in 0..rows.len() {
            if i < j {
                let v = sqdist(rows[i], rows[j]).sqrt();
                if v > 0.0 {
                    d.push(v);
                }
            }
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = d.len();
    if m % 2 == 1 {
        d[m / 2]
    } else {
        0.5 * (d[m / 2 - 1] + d[m / 2])
    }
}

pub fn cka_rbf_median(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
    let sx = median_nonzero_distance(&x.rows().collect::<Vec<_>>());
    let sy = median_nonzero_distance(&y.rows().collect::<Vec<_>>());
    cka(&gram_rbf(x, sx), &gram_rbf(y, sy))
}

/// Unbiased MMD² straight from the three expectations.
pub fn mmd2(x: &FeatureMatrix, y: &FeatureMatrix, sigma: f64) -> f64 {
    let k = |a: &[f64], b: &[f64]| (-sqdist(a, b) / (2.0 * sigma * sigma)).exp();
    let (m, n) = (x.n() as f64, y.n() as f64);
    let mut kxx = 0.0;
    for i in 0..x.n() {
        for j in 0..x.n() {
            if i != j {
                kxx += k(x.row(i), x.row(j));
            }
        }
    }
    let mut kyy = 0.0;
    for i in 0..y.n() {
        for j in 0..y.n() {
            if i != j {
                kyy += k(y.row(i), y.row(j));
            }
        }
    }
    let mut kxy = 0.0;
    for i in 0..x.n() {
        for j in 0..y.n() {
            kxy += k(x.row(i), y.row(j));
        }
    }
    kxx / (m * (m - 1.0)) + kyy / (n * (n - 1.0)) - 2.0 * kxy / (m * n)
}

pub fn pooled_median(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
    let rows: Vec<&[f64]> = x.rows().chain(y.rows()).collect();
    median_nonzero_distance(&rows)
}

/// `2 E|X-Y| - E|X-X'| - E|Y-Y'|` with plug-in means over all index pairs.
pub fn energy(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
    let mean = |a: &FeatureMatrix, b: &FeatureMatrix| {
        let mut s = 0.0;
        for i in 0..a.n() {
            for j in 0..b.n() {
                s += sqdist(a.row(i), b.row(j)).sqrt();
            }
        }
        s / (a.n() * b.n()) as f64
    };
    2.0 * mean(x, y) - mean(x, x) - mean(y, y)
}

/// Projected W1 with the principal axis from a full symmetric eigendecomposition.
pub fn w1_projected(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
    let rows: Vec<&[f64]> = x.rows().chain(y.rows()).collect();
    let pooled = DMatrix::from_fn(rows.len(), x.d(), |i, j| rows[i][j]);
    let mean = pooled.row_mean();
    let mut centred = pooled.clone();
    for mut r in centred.row_iter_mut() {
        r -= &mean;
    }
    let cov = centred.transpose() * &centred;
    let eig = SymmetricEigen::new(cov);
    let top = eig.eigenvalues.imax();
    let w = eig.eigenvectors.column(top).into_owned();
    let project = |m: &FeatureMatrix| -> Vec<f64> { (to_matrix(m) * &w).iter().copied().collect() };
    let (mut s, mut t) = (project(x), project(y));
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    t.sort_by(|a, b| a.partial_cmp(b).unwrap());
    s.iter().zip(&t).map(|(a, b)| (a - b).abs()).sum::<f64>() / s.len() as f64
}

pub fn rdm(x: &FeatureMatrix) -> DMatrix<f64> {
    let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
    DMatrix::from_fn(x.n(), x.n(), |i, j| {
        if i == j {
            0.0
        } else {
            let (a, b) = (x.row(i), x.row(j));
            1.0 - a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>() / (norm(a) * norm(b))
        }
    })
}

pub fn upper(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Average ranks (1-based) by counting.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

pub fn spearman_rsa(x: &FeatureMatrix, y: &FeatureMatrix) -> f64 {
    pearson(&ranks(&upper(&rdm(x))), &ranks(&upper(&rdm(y))))
}

/// BH step-up decisions and q-values by direct search over every cutoff.
pub fn bh_brute(p: &[f64], q: f64) -> (Vec<bool>, Vec<f64>) {
    let m = p.len();
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut k = 0;
    for i in 1..=m {
        if sorted[i - 1] <= i as f64 / m as f64 * q {
            k = i;
        }
    }
    let threshold = if k == 0 { -1.0 } else { sorted[k - 1] };
    let rejected: Vec<bool> = p.iter().map(|&v| k > 0 && v <= threshold).collect();
    let qv: Vec<f64> = p
        .iter()
        .map(|&v| {
            (1..=m)
                .filter(|&i| sorted[i - 1] >= v)
                .map(|i| (m as f64 / i as f64 * sorted[i - 1]).min(1.0))
                .fold(1.0, f64::min)
        })
        .collect();
    (rejected, qv)
}

/// One-sample KS statistic against U(0, 1).
pub fn ks_uniform(samples: &[f64]) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &v)| ((i as f64 + 1.0) / n - v).max(v - i as f64 / n))
        .fold(0.0, f64::max)
}

/// How the cat-side features of a synthetic layer relate to the human side.
#[derive(Clone, Copy, Debug)]
pub enum LayerKind {
    /// `Y = X`.
    Identity,
    /// `Y = X + ε`, small isotropic noise.
    Noisy(f64),
    /// Independent draw shifted by `Δ` in every coordinate.
    Shifted(f64),
}

/// Writes feature files, sidecars and a layer manifest for `layers` into `dir`;
/// returns the manifest path.
pub fn write_grid(
    dir: &std::path::Path,
    n: usize,
    d: usize,
    layers: &[(&str, &str, LayerKind)],
    seed: u64,
) -> std::path::PathBuf {
    use felix_core::ingest::{write_npy, write_sidecar, Dtype};
    use std::fmt::Write as _;

    let mut r = rng(seed);
    let ids: Vec<String> = (0..n).map(|i| format!("scene_{i:03}.png")).collect();
    write_sidecar(dir.join("pairs.ids"), &ids).unwrap();
    let mut manifest = String::from("model,layer,human_feature_path,cat_feature_path,sidecar_path\n");
    for (model, layer, kind) in layers {
        let x: Vec<f64> = gaussian_rows(&mut r, n, d, 0.0).concat();
        let y: Vec<f64> = match *kind {
            LayerKind::Identity => x.clone(),
            LayerKind::Noisy(s) => x.iter().map(|v| v + s * normal(&mut r)).collect(),
            LayerKind::Shifted(delta) => gaussian_rows(&mut r, n, d, delta).concat(),
        };
        let (h, c) = (format!("{model}_{layer}_h.npy"), format!("{model}_{layer}_c.npy"));
        write_npy(dir.join(&h), n, d, Dtype::F8, &x).unwrap();
        write_npy(dir.join(&c), n, d, Dtype::F8, &y).unwrap();
        writeln!(manifest, "{model},{layer},{h},{c},pairs.ids").unwrap();
    }
    let path = dir.join("layers.csv");
    std::fs::write(&path, manifest).unwrap();
    path
}
