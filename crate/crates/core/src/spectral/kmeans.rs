//! Lloyd's k-means with k-means++ seeding.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;

const MAX_ITERS: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult<T> {
    /// Cluster of each point, labelled in order of first appearance.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<T>>,
    pub objective: T,
    /// Objective after every Lloyd iteration of the winning restart.
    pub history: Vec<T>,
    /// Fewer than `k` distinct points were supplied.
    pub degenerate: bool,
}

fn dist2<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

fn nearest<T: Scalar>(p: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (c, cen) in centroids.iter().enumerate() {
        let d = dist2(p, cen);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init<T: Scalar>(points: &[Vec<T>], k: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = rng_from_seed(seed);
    let n = points.len();
    let mut centroids = vec![points[rng.gen_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0]).f64()).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && w > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centroids.push(points[pick].clone());
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(dist2(p, centroids.last().unwrap()).f64());
        }
    }
    centroids
}

fn lloyd<T: Scalar>(points: &[Vec<T>], mut centroids: Vec<Vec<T>>) -> (Vec<usize>, Vec<Vec<T>>, Vec<T>) {
    let n = points.len();
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; n];
    let mut history = Vec::new();
    for _ in 0..MAX_ITERS {
        let mut changed = false;
        let mut dists = vec![T::zero(); n];
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
            dists[i] = d;
        }
        // re-seed empty clusters from the point farthest from its centroid
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&c| counts[c] += 1);
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let donor = (0..n)
                .filter(|&i| counts[labels[i]] > 1)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if dists[b] >= dists[i] => Some(b),
                    _ => Some(i),
                });
            if let Some(i) = donor {
                counts[labels[i]] -= 1;
                labels[i] = c;
                counts[c] = 1;
                dists[i] = T::zero();
                changed = true;
            }
        }
        let mut sums = vec![vec![T::zero(); dim]; k];
        for (i, p) in points.iter().enumerate() {
            for (s, &x) in sums[labels[i]].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                let m = T::of_usize(counts[c]);
                centroids[c] = sums[c].iter().map(|&s| s / m).collect();
            }
        }
        let obj: T = points.iter().zip(&labels).map(|(p, &c)| dist2(p, &centroids[c])).sum();
        history.push(obj);
        if !changed {
            break;
        }
    }
    (labels, centroids, history)
}

/// Best of `restarts` seeded k-means runs on `points` (squared Euclidean
/// objective; ties go to the earlier restart). Restart `r` is seeded with
/// `derive_seed(seed, r)`.
pub fn kmeans<T: Scalar>(points: &[Vec<T>], k: usize, restarts: usize, seed: u64) -> Result<KMeansResult<T>> {
    let n = points.len();
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!("k-means needs 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidParameter("points have mixed dimensions".into()));
    }
    let mut distinct: Vec<&Vec<T>> = Vec::new();
    for p in points {
        if distinct.len() >= k {
            break;
        }
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let degenerate = distinct.len() < k;

    let mut best: Option<(Vec<usize>, Vec<Vec<T>>, Vec<T>)> = None;
    for r in 0..restarts.max(1) {
        let init = plus_plus_init(points, k, derive_seed(seed, r as u64));
        let run = lloyd(points, init);
        let obj = *run.2.last().unwrap();
        if best.as_ref().is_none_or(|b| obj < *b.2.last().unwrap()) {
            best = Some(run);
        }
    }
    let (labels, centroids, history) = best.unwrap();

    // canonical labels: order of first appearance
    let mut remap = vec![usize::MAX; k];
    let mut next = 0;
    for &c in &labels {
        if remap[c] == usize::MAX {
            remap[c] = next;
            next += 1;
        }
    }
    for slot in remap.iter_mut().filter(|s| **s == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let mut ordered = vec![Vec::new(); k];
    for (c, cen) in centroids.into_iter().enumerate() {
        ordered[remap[c]] = cen;
    }
    Ok(KMeansResult {
        labels: labels.iter().map(|&c| remap[c]).collect(),
        centroids: ordered,
        objective: *history.last().unwrap(),
        history,
        degenerate,
    })
}
