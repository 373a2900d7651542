//! Dense symmetric eigendecomposition: Householder reduction to tridiagonal
//! form followed by the implicit QL algorithm with Wilkinson-style shifts
//! (the EISPACK `tred2`/`tql2` pair). Small-k requests on larger matrices
//! skip the vector updates and recover vectors by inverse iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Eigenpairs; `vectors[c]` is the unit eigenvector of `values[c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPairs<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
}

/// All eigenpairs of a symmetric matrix, eigenvalues ascending. Only the
/// lower triangle is read.
pub fn symmetric_eigen<T: Scalar>(m: &Matrix<T>) -> Result<EigenPairs<T>> {
    let n = m.n();
    if n == 0 {
        return Ok(EigenPairs {
            values: vec![],
            vectors: vec![],
        });
    }
    // symmetric input: the transpose of the lower triangle is the upper one
    let mut vt: Vec<Vec<T>> = (0..n).map(|c| (0..n).map(|r| m.get(r.max(c), r.min(c))).collect()).collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut vt, &mut d, &mut e);
    tql2(Some(&mut vt), &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    Ok(EigenPairs {
        values: order.iter().map(|&c| d[c]).collect(),
        vectors: order.iter().map(|&c| std::mem::take(&mut vt[c])).collect(),
    })
}

/// Householder tridiagonalization. Works on the transpose `w = vᵀ` of the
/// EISPACK working matrix so that every inner loop walks a row; on return
/// row `c` of `w` holds column `c` of the orthogonal transform.
fn tred2<T: Scalar>(w: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    reduce(w, d, e);
    accumulate(w, d, e);
}

/// Householder sweep only. Afterwards `w[j][j]` is the tridiagonal diagonal,
/// `e[i]` couples `i - 1` and `i`, and step `i` reflected coordinates `0..i`
/// by `I - u uᵀ / d[i]` with `u = w[i][..i]` (skipped when `d[i] == 0`).
fn reduce<T: Scalar>(w: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let zero = T::zero();
    for j in 0..n {
        d[j] = w[j][n - 1];
    }
    for i in (1..n).rev() {
        let mut scale = zero;
        let mut h = zero;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == zero {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[j][i - 1];
                w[j][i] = zero;
                w[i][j] = zero;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > zero {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for j in 0..i {
                e[j] = zero;
            }
            for j in 0..i {
                f = d[j];
                w[i][j] = f;
                g = e[j] + w[j][j] * f;
                for k in (j + 1)..i {
                    g += w[j][k] * d[k];
                    e[k] += w[j][k] * f;
                }
                e[j] = g;
            }
            f = zero;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    let upd = f * e[k] + g * d[k];
                    w[j][k] -= upd;
                }
                d[j] = w[j][i - 1];
                w[j][i] = zero;
            }
        }
        d[i] = h;
    }
}

/// Completes `tred2`: forms the orthogonal transform from the stored
/// Householder vectors and moves the diagonal into `d`.
fn accumulate<T: Scalar>(w: &mut [Vec<T>], d: &mut [T], e: &mut [T]) {
    let n = d.len();
    let zero = T::zero();
    for i in 0..n - 1 {
        w[i][n - 1] = w[i][i];
        w[i][i] = T::one();
        let h = d[i + 1];
        if h != zero {
            for k in 0..=i {
                d[k] = w[i + 1][k] / h;
            }
            for j in 0..=i {
                let mut g = zero;
                for k in 0..=i {
                    g += w[i + 1][k] * w[j][k];
                }
                for k in 0..=i {
                    let upd = g * d[k];
                    w[j][k] -= upd;
                }
            }
        }
        for k in 0..=i {
            w[i + 1][k] = zero;
        }
    }
    for j in 0..n {
        d[j] = w[j][n - 1];
        w[j][n - 1] = zero;
    }
    w[n - 1][n - 1] = T::one();
    e[0] = zero;
}

fn tql2<T: Scalar>(mut vt: Option<&mut [Vec<T>]>, d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    let zero = T::zero();
    let one = T::one();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = zero;

    let mut f = zero;
    let mut tst1 = zero;
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence);
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (e[l] + e[l]);
                let mut r = p.hypot(one);
                if p < zero {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = one;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = zero;
                let mut s2 = zero;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(vt) = vt.as_deref_mut() {
                        let (lo, hi) = vt.split_at_mut(i + 1);
                        for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = zero;
    }
    Ok(())
}

const FAST_MIN_N: usize = 64;

/// Eigenpairs for the `k` largest `|λ|` only: eigenvalues of the
/// tridiagonal form by QL without vector updates, vectors by inverse
/// iteration on the tridiagonal form mapped back through the Householder
/// transform. `None` when a vector fails its residual check against `m`,
/// in which case the caller falls back to the full decomposition.
fn selected_eigen<T: Scalar>(m: &Matrix<T>, k: usize) -> Result<Option<EigenPairs<T>>> {
    let n = m.n();
    let mut vt: Vec<Vec<T>> = (0..n).map(|c| (0..n).map(|r| m.get(r.max(c), r.min(c))).collect()).collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    reduce(&mut vt, &mut d, &mut e);
    e[0] = T::zero();
    let hs = d.clone();
    for j in 0..n {
        d[j] = vt[j][j];
    }
    // tridiagonal: diagonal `diag`, off-diagonal `off[i]` couples i and i + 1
    let diag = d.clone();
    let off: Vec<T> = (1..n).map(|i| e[i]).collect();
    tql2(None, &mut d, &mut e)?;

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let (x, y) = (d[a], d[b]);
        y.abs()
            .partial_cmp(&x.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y.partial_cmp(&x).unwrap_or(std::cmp::Ordering::Equal))
    });
    // pull in every eigenvalue tied in magnitude with the k-th
    let mut take = k;
    while take < n && (d[idx[take]].abs() - d[idx[k - 1]].abs()).abs() <= T::of(1e-12) {
        take += 1;
    }

    let norm = diag
        .iter()
        .zip(off.iter().chain(std::iter::once(&T::zero())))
        .fold(T::zero(), |acc, (a, b)| acc.max(a.abs() + b.abs() + b.abs()));
    let scale = norm.max(T::one());
    let cluster = T::of(1e-8) * scale;
    let mut values = Vec::with_capacity(take);
    let mut tri_vecs: Vec<Vec<T>> = Vec::with_capacity(take);
    let mut vectors = Vec::with_capacity(take);
    for &c in idx.iter().take(take) {
        let lambda = d[c];
        let shift = lambda + T::of(1e3) * T::epsilon() * scale;
        let mut x = vec![T::one() / T::of_usize(n).sqrt(); n];
        // deterministic, non-degenerate start
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += T::of(((i * 7919) % 101) as f64 * 1e-3);
        }
        for _ in 0..3 {
            x = tridiagonal_solve(&diag, &off, shift, &x);
            for (prev, &lp) in tri_vecs.iter().zip(values.iter()) {
                let lp: T = lp;
                if (lp - lambda).abs() <= cluster {
                    let dot: T = prev.iter().zip(&x).map(|(a, b)| *a * *b).sum();
                    x.iter_mut().zip(prev).for_each(|(xi, pi)| *xi -= dot * *pi);
                }
            }
            let len = x.iter().map(|v| *v * *v).sum::<T>().sqrt();
            if !(len > T::zero()) || !len.is_finite() {
                return Ok(None);
            }
            x.iter_mut().for_each(|v| *v /= len);
        }
        let mut v = x.clone();
        for i in 1..n {
            let h = hs[i];
            if h != T::zero() {
                let u = &vt[i][..i];
                let g = u.iter().zip(&v[..i]).map(|(a, b)| *a * *b).sum::<T>() / h;
                v[..i].iter_mut().zip(u).for_each(|(vi, ui)| *vi -= g * *ui);
            }
        }
        let res = (0..n)
            .map(|i| {
                let mv: T = m.row(i).iter().zip(&v).map(|(a, b)| *a * *b).sum();
                (mv - lambda * v[i]).powi(2)
            })
            .sum::<T>()
            .sqrt();
        if !(res <= T::tolerance() * T::of(10.0) * scale) {
            return Ok(None);
        }
        values.push(lambda);
        tri_vecs.push(x);
        vectors.push(v);
    }
    Ok(Some(EigenPairs { values, vectors }))
}

/// Solves `(T - σI) x = b` for tridiagonal `T` by Gaussian elimination with
/// partial pivoting; exact zero pivots are nudged to keep inverse iteration
/// going.
fn tridiagonal_solve<T: Scalar>(diag: &[T], off: &[T], sigma: T, b: &[T]) -> Vec<T> {
    let n = diag.len();
    let tiny = T::epsilon() * T::epsilon();
    // rows stored as (a, b, c) = (main, first super, second super)
    let mut a: Vec<T> = diag.iter().map(|&x| x - sigma).collect();
    let mut up: Vec<T> = off.to_vec();
    up.push(T::zero());
    let mut up2 = vec![T::zero(); n];
    let mut low: Vec<T> = off.to_vec();
    let mut x = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if low[i].abs() > a[i].abs() {
            // swap rows i and i + 1
            let (ai, ui, u2i, xi) = (a[i], up[i], up2[i], x[i]);
            a[i] = low[i];
            up[i] = a[i + 1];
            up2[i] = up[i + 1];
            x[i] = x[i + 1];
            let below = (ai, ui, u2i, xi);
            let f = below.0 / a[i];
            a[i + 1] = below.1 - f * up[i];
            up[i + 1] = below.2 - f * up2[i];
            x[i + 1] = below.3 - f * x[i];
        } else {
            if a[i] == T::zero() {
                a[i] = tiny;
            }
            let f = low[i] / a[i];
            a[i + 1] -= f * up[i];
            up[i + 1] -= f * up2[i];
            let xi = x[i];
            x[i + 1] -= f * xi;
        }
        low[i] = T::zero();
    }
    if a[n - 1] == T::zero() {
        a[n - 1] = tiny;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        if i + 1 < n {
            s -= up[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= up2[i] * x[i + 2];
        }
        x[i] = s / a[i];
    }
    x
}

/// The `k` eigenpairs of largest `|λ|`, ordered by `|λ|` descending with
/// ties broken by signed value descending (then solver order). Each vector
/// is oriented so its first non-negligible component is positive.
pub fn top_k_eigvecs<T: Scalar>(s: &Matrix<T>, k: usize) -> Result<EigenPairs<T>> {
    if k == 0 || k > s.n() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} must lie in [1, {}]",
            s.n()
        )));
    }
    let asym = s.max_asymmetry();
    if asym > T::of(1e-10) {
        return Err(Error::NotSymmetric(asym.f64()));
    }
    let all = if s.n() >= FAST_MIN_N && k * 8 <= s.n() {
        match selected_eigen(s, k)? {
            Some(pairs) => pairs,
            None => symmetric_eigen(s)?,
        }
    } else {
        symmetric_eigen(s)?
    };
    let mut idx: Vec<usize> = (0..all.values.len()).collect();
    idx.sort_by(|&a, &b| {
        let (x, y) = (all.values[a], all.values[b]);
        y.abs()
            .partial_cmp(&x.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y.partial_cmp(&x).unwrap_or(std::cmp::Ordering::Equal))
    });
    let cutoff = T::epsilon().sqrt();
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &c in idx.iter().take(k) {
        let mut v = all.vectors[c].clone();
        if let Some(&lead) = v.iter().find(|x| x.abs() > cutoff) {
            if lead < T::zero() {
                v.iter_mut().for_each(|x| *x = -*x);
            }
        }
        values.push(all.values[c]);
        vectors.push(v);
    }
    Ok(EigenPairs { values, vectors })
}
