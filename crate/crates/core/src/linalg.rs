//! Small dense helpers: distances, means and the leading principal axis.

use crate::scalar::Scalar;

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let t = x - y;
        acc + t * t
    })
}

#[inline]
pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    sq_dist(a, b).sqrt()
}

pub fn mean<T: Scalar>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::of_usize(xs.len())
}

/// Symmetric `n x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    pub n: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }
}

/// Largest size solved with cyclic Jacobi; bigger problems use power iteration.
const JACOBI_LIMIT: usize = 128;

/// Leading eigenvector of a symmetric positive semi-definite matrix.
///
/// Returns `None` when the matrix is (numerically) zero.
pub fn top_eigenvector<T: Scalar>(m: &SymMatrix<T>) -> Option<Vec<T>> {
    let scale = m.data.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    if scale <= T::zero() {
        return None;
    }
    let v = if m.n <= JACOBI_LIMIT {
        jacobi_top(m)
    } else {
        power_top(m)
    };
    Some(v)
}

fn jacobi_top<T: Scalar>(m: &SymMatrix<T>) -> Vec<T> {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut total = T::zero();
        for i in 0..n {
            for j in 0..n {
                let x = a[i * n + j] * a[i * n + j];
                total = total + x;
                if i != j {
                    off = off + x;
                }
            }
        }
        if off <= eps * eps * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let best = (0..n)
        .max_by(|&i, &j| {
            a[i * n + i]
                .partial_cmp(&a[j * n + j])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(j.cmp(&i))
        })
        .unwrap_or(0);
    (0..n).map(|k| v[k * n + best]).collect()
}

fn power_top<T: Scalar>(m: &SymMatrix<T>) -> Vec<T> {
    let n = m.n;
    let matvec = |x: &[T]| -> Vec<T> { (0..n).map(|i| dot(&m.data[i * n..(i + 1) * n], x)).collect() };
    // Start from the column with the largest diagonal entry, which cannot be
    // orthogonal to the leading eigenvector of a PSD matrix unless that column is zero.
    let start = (0..n)
        .max_by(|&i, &j| {
            m.get(i, i)
                .partial_cmp(&m.get(j, j))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let mut x: Vec<T> = (0..n).map(|k| m.get(k, start)).collect();
    normalize(&mut x);
    let tol = T::of(1e-14);
    for _ in 0..20_000 {
        let mut y = matvec(&x);
        if !normalize(&mut y) {
            break;
        }
        let diff = x.iter().zip(&y).fold(T::zero(), |a, (&p, &q)| a.max((p - q).abs()));
        x = y;
        if diff < tol {
            break;
        }
    }
    x
}

fn normalize<T: Scalar>(x: &mut [T]) -> bool {
    let nrm = norm(x);
    if nrm <= T::zero() || !nrm.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|v| *v = *v / nrm);
    true
}

/// Flips `w` so that its largest-magnitude component is positive.
pub fn fix_sign<T: Scalar>(w: &mut [T]) {
    let mut best = 0;
    for (i, v) in w.iter().enumerate() {
        if v.abs() > w[best].abs() {
            best = i;
        }
    }
    if w.get(best).is_some_and(|v| *v < T::zero()) {
        w.iter_mut().for_each(|v| *v = -*v);
    }
}

/// First principal axis of the mean-centred rows, unit length, sign-normalised.
///
/// `None` when the rows have zero total variance.
pub fn first_principal_axis<T: Scalar>(rows: &[&[T]]) -> Option<Vec<T>> {
    let count = rows.len();
    let first = *rows.first()?;
    let d = first.len();
    if rows.iter().all(|r| *r == first) {
        return None;
    }
    let mut mu = vec![T::zero(); d];
    for r in rows {
        for (m, &v) in mu.iter_mut().zip(r.iter()) {
            *m = *m + v;
        }
    }
    let inv = T::one() / T::of_usize(count);
    mu.iter_mut().for_each(|m| *m = *m * inv);
    let centred: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().zip(&mu).map(|(&v, &m)| v - m).collect())
        .collect();

    let mut w = if d <= count {
        let mut cov = SymMatrix::zeros(d);
        for r in &centred {
            for i in 0..d {
                if r[i] == T::zero() {
                    continue;
                }
                for j in i..d {
                    let v = cov.get(i, j) + r[i] * r[j];
                    cov.set(i, j, v);
                }
            }
        }
        for i in 0..d {
            for j in 0..i {
                let v = cov.get(j, i);
                cov.set(i, j, v);
            }
        }
        top_eigenvector(&cov)?
    } else {
        // Dual route through the count x count Gram matrix.
        let mut gram = SymMatrix::zeros(count);
        for i in 0..count {
            for j in i..count {
                let v = dot(&centred[i], &centred[j]);
                gram.set(i, j, v);
                gram.set(j, i, v);
            }
        }
        let u = top_eigenvector(&gram)?;
        let mut w = vec![T::zero(); d];
        for (r, &ui) in centred.iter().zip(&u) {
            for (wk, &rk) in w.iter_mut().zip(r) {
                *wk = *wk + ui * rk;
            }
        }
        if !normalize(&mut w) {
            return None;
        }
        w
    };
    fix_sign(&mut w);
    Some(w)
}

/// Mid-ranks (1-based) of `xs`; tied values share the average of their ranks.
pub fn mid_ranks<T: Scalar>(xs: &[T]) -> Vec<T> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap_or(std::cmp::Ordering::Equal));
    let mut ranks = vec![T::zero(); n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        // positions i..j (0-based) share rank ((i+1) + j) / 2
        let r = T::of_usize(i + 1 + j) / T::of(2.0);
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson<T: Scalar>(a: &[T], b: &[T]) -> Option<T> {
    let ma = mean(a);
    let mb = mean(b);
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        sab = sab + dx * dy;
        saa = saa + dx * dx;
        sbb = sbb + dy * dy;
    }
    if saa <= T::zero() || sbb <= T::zero() {
        return None;
    }
    Some(sab / (saa * sbb).sqrt())
}
