//! Degree distributions: histograms, the log-log power-law fit, Poisson
//! distance, tail sets, and connected components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Scalar;

/// Degree counts for `replicates` graphs on `n` nodes each; `counts[k]` is
/// the number of nodes (over all replicates) with degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    n: usize,
    replicates: usize,
    counts: Vec<u64>,
}

impl DegreeHistogram {
    pub fn from_degrees(n: usize, degrees: &[usize]) -> Result<Self> {
        if degrees.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: degrees.len(),
            });
        }
        let mut counts = vec![0u64; n.max(1)];
        for &d in degrees {
            if d >= n.max(1) {
                return Err(Error::InvalidParameter(format!("degree {d} exceeds n - 1 = {}", n.saturating_sub(1))));
            }
            counts[d] += 1;
        }
        Ok(DegreeHistogram {
            n,
            replicates: 1,
            counts,
        })
    }

    /// Sums histograms of equal `n`.
    pub fn pool<'a>(hists: impl IntoIterator<Item = &'a DegreeHistogram>) -> Result<Self> {
        let mut it = hists.into_iter();
        let first = it.next().ok_or(Error::Empty("histograms"))?;
        let mut out = first.clone();
        for h in it {
            out.merge(h)?;
        }
        Ok(out)
    }

    pub fn merge(&mut self, other: &DegreeHistogram) -> Result<()> {
        if other.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.replicates += other.replicates;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn replicates(&self) -> usize {
        self.replicates
    }

    /// Total node count, `n · replicates`.
    pub fn total(&self) -> u64 {
        (self.n * self.replicates) as u64
    }

    pub fn count(&self, k: usize) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn freq(&self, k: usize) -> f64 {
        self.count(k) as f64 / self.total() as f64
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    pub fn mean_degree(&self) -> f64 {
        let s: f64 = self.counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum();
        s / self.total() as f64
    }
}

pub fn degree_histogram<T: Scalar>(graph: &Graph<T>) -> DegreeHistogram {
    DegreeHistogram::from_degrees(graph.n(), &graph.degrees()).expect("graph degrees are below n")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub gamma0: f64,
    pub gamma1: f64,
    pub k_lo: usize,
    pub k_hi: usize,
    pub points_used: usize,
}

/// OLS of `log count_k` on `log k` over positive bins with
/// `k' ≤ k ≤ k''`, where `k'` is the modal degree in `[0, √n]` (smallest on
/// ties) and `k''` the largest observed degree. Empty bins and `k = 0` are
/// skipped.
pub fn powerlaw_fit(hist: &DegreeHistogram) -> Result<PowerLawFit> {
    let root = (hist.n() as f64).sqrt();
    let mut limit = root.floor() as usize;
    if ((limit + 1) as f64) <= root {
        limit += 1;
    }
    let mut k_lo = 0;
    for k in 0..=limit.min(hist.counts().len() - 1) {
        if hist.count(k) > hist.count(k_lo) {
            k_lo = k;
        }
    }
    let k_hi = hist.max_degree().ok_or(Error::InsufficientSupport(0))?;
    let pts: Vec<(f64, f64)> = (k_lo.max(1)..=k_hi)
        .filter(|&k| hist.count(k) > 0)
        .map(|k| ((k as f64).ln(), (hist.count(k) as f64).ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientSupport(pts.len()));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let gamma1 = sxy / sxx;
    Ok(PowerLawFit {
        gamma0: my - gamma1 * mx,
        gamma1,
        k_lo,
        k_hi,
        points_used: pts.len(),
    })
}

/// `P(X = k)` for `X ~ Poisson(λ)`, `k = 0..len`.
pub fn poisson_pmf(lambda: f64, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut log_fact = 0.0;
    for k in 0..len {
        if k > 0 {
            log_fact += (k as f64).ln();
        }
        let p = if lambda == 0.0 {
            if k == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-lambda + k as f64 * lambda.ln() - log_fact).exp()
        };
        out.push(p);
    }
    out
}

/// Total-variation distance between the empirical degree law and
/// `Poisson(λ)`; Poisson mass beyond the histogram's support is added as
/// `1 − Σ pmf`.
pub fn poisson_tv(hist: &DegreeHistogram, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be non-negative")));
    }
    let len = hist.counts().len();
    let pmf = poisson_pmf(lambda, len);
    let head: f64 = pmf.iter().sum();
    let diff: f64 = (0..len).map(|k| (hist.freq(k) - pmf[k]).abs()).sum();
    Ok((0.5 * (diff + (1.0 - head).max(0.0))).clamp(0.0, 1.0))
}

/// Degrees whose frequency reaches the heavy-tail profile `M_γ k^{−γ}`
/// (first set) and the tempered profile `M_{γ,μ} k^{−γ} e^{−μk}` (second),
/// each normalized to sum to one over `k = 1..n`.
pub fn tail_sets(hist: &DegreeHistogram, gamma: f64, mu: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(gamma > 1.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must exceed 1")));
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be positive")));
    }
    let n = hist.n();
    let heavy = |k: usize| (k as f64).powf(-gamma);
    let tempered = |k: usize| heavy(k) * (-mu * k as f64).exp();
    let m_heavy = 1.0 / (1..=n).map(heavy).sum::<f64>();
    let m_temp = 1.0 / (1..=n).map(tempered).sum::<f64>();
    let rel = 1.0 - 1e-12;
    let a = (1..=n).filter(|&k| hist.freq(k) >= m_heavy * heavy(k) * rel).collect();
    let b = (1..=n).filter(|&k| hist.freq(k) >= m_temp * tempered(k) * rel).collect();
    Ok((a, b))
}

/// Length of the longest run of consecutive integers in a sorted set.
pub fn longest_run(set: &[usize]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for (i, &k) in set.iter().enumerate() {
        cur = if i > 0 && set[i - 1] + 1 == k { cur + 1 } else { 1 };
        best = best.max(cur);
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub connected: bool,
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Connected components from an edge list on `n` nodes.
pub fn components_from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Components {
    let mut uf = UnionFind::new(n);
    for (i, j) in edges {
        uf.union(i, j);
    }
    let roots: Vec<usize> = (0..n).filter(|&x| uf.find(x) == x).collect();
    let mut sizes: Vec<usize> = roots.iter().map(|&x| uf.size[x]).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Components {
        connected: sizes.len() == 1,
        sizes,
    }
}

pub fn components<T: Scalar>(graph: &Graph<T>) -> Components {
    components_from_edges(graph.n(), graph.edges())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(n: usize, counts: &[(usize, u64)]) -> DegreeHistogram {
        let mut c = vec![0u64; n];
        for &(k, v) in counts {
            c[k] = v;
        }
        DegreeHistogram {
            n,
            replicates: 1,
            counts: c,
        }
    }

    #[test]
    fn histogram_examples() {
        let h = degree_histogram(&Graph::<f64>::complete(4));
        assert_eq!(h.counts(), &[0, 0, 0, 4]);
        let h = degree_histogram(&Graph::<f64>::empty(4));
        assert_eq!(h.counts(), &[4, 0, 0, 0]);
        let path = Graph::<f64>::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = degree_histogram(&path);
        assert_eq!((h.count(1), h.count(2)), (2, 1));
    }

    #[test]
    fn pooling_adds_counts() {
        let a = degree_histogram(&Graph::<f64>::complete(4));
        let b = degree_histogram(&Graph::<f64>::empty(4));
        let p = DegreeHistogram::pool([&a, &b]).unwrap();
        assert_eq!(p.total(), 8);
        assert_eq!(p.freq(3), 0.5);
        assert!(DegreeHistogram::pool([&a, &degree_histogram(&Graph::<f64>::empty(5))]).is_err());
    }

    #[test]
    fn exact_power_law_is_recovered() {
        // counts = 2520² / k² are exact integers; the rest sits at k = 0
        let (n, replicates) = (1_000_000usize, 10usize);
        let mut counts = vec![0u64; n];
        for k in 1..=10u64 {
            counts[k as usize] = 2520 * 2520 / (k * k);
        }
        counts[0] = (n * replicates) as u64 - counts.iter().sum::<u64>();
        let h = DegreeHistogram {
            n,
            replicates,
            counts,
        };
        let fit = powerlaw_fit(&h).unwrap();
        assert!((fit.gamma1 + 2.0).abs() < 1e-9, "{}", fit.gamma1);
        assert_eq!((fit.k_lo, fit.k_hi, fit.points_used), (1, 10, 10));
    }

    #[test]
    fn fit_window_and_support() {
        // mode at k = 2 within sqrt(16) = 4; zero bins skipped
        let h = hist(16, &[(0, 1), (2, 6), (3, 4), (5, 3), (7, 2)]);
        let fit = powerlaw_fit(&h).unwrap();
        assert_eq!((fit.k_lo, fit.k_hi, fit.points_used), (2, 7, 4));
        let h = hist(16, &[(2, 6), (3, 10)]);
        assert_eq!(powerlaw_fit(&h), Err(Error::InsufficientSupport(1)));
        // ties in the mode go to the smaller degree
        let h = hist(16, &[(1, 5), (3, 5), (4, 2), (6, 4)]);
        assert_eq!(powerlaw_fit(&h).unwrap().k_lo, 1);
    }

    #[test]
    fn poisson_examples() {
        let h = hist(10, &[(0, 10)]);
        assert!((poisson_tv(&h, 1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-12);
        assert_eq!(poisson_tv(&h, 0.0).unwrap(), 0.0);
        assert!(poisson_tv(&h, -1.0).is_err());
    }

    #[test]
    fn poisson_matching_histogram_is_close() {
        let n = 1_000_000usize;
        let pmf = poisson_pmf(3.0, 40);
        let mut counts = vec![0u64; n];
        for (k, p) in pmf.iter().enumerate() {
            counts[k] = (p * n as f64).round() as u64;
        }
        let total: u64 = counts.iter().sum();
        counts[3] = (counts[3] + n as u64) - total;
        let h = DegreeHistogram { n, replicates: 1, counts };
        assert!(poisson_tv(&h, 3.0).unwrap() < 1e-5);
    }

    #[test]
    fn tail_set_examples() {
        let n = 50;
        let m: f64 = 1.0 / (1..=n).map(|k| (k as f64).powf(-2.5)).sum::<f64>();
        // n * replicates = 1e12 nodes in total
        let replicates = 20_000_000_000usize;
        let total = (n * replicates) as u64;
        let mut counts = vec![0u64; n];
        for k in 1..n {
            counts[k] = (m * (k as f64).powf(-2.5) * total as f64).ceil() as u64;
        }
        counts[0] = total - counts.iter().sum::<u64>();
        let h = DegreeHistogram {
            n,
            replicates,
            counts,
        };
        let (a, _) = tail_sets(&h, 2.5, 0.1).unwrap();
        assert_eq!(a, (1..n).collect::<Vec<_>>());
        assert_eq!(longest_run(&a), n - 1);

        let h = hist(8, &[(0, 8)]);
        let (a, b) = tail_sets(&h, 2.0, 0.5).unwrap();
        assert!(a.is_empty() && b.is_empty());
        assert!(tail_sets(&h, 1.0, 0.5).is_err());
    }

    #[test]
    fn runs() {
        assert_eq!(longest_run(&[]), 0);
        assert_eq!(longest_run(&[1, 2, 3, 7, 8, 9, 10, 12]), 4);
    }

    #[test]
    fn component_examples() {
        let c = components(&Graph::<f64>::complete(4));
        assert_eq!((c.sizes.clone(), c.connected), (vec![4], true));
        let c = components(&Graph::<f64>::empty(4));
        assert_eq!((c.sizes.clone(), c.connected), (vec![1, 1, 1, 1], false));
        let g = Graph::<f64>::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(components(&g).sizes, vec![2, 2]);
    }

    /// Poisson–Poisson distance by direct summation far into the tail.
    fn poisson_poisson_tv(a: f64, b: f64) -> f64 {
        let (pa, pb) = (poisson_pmf(a, 400), poisson_pmf(b, 400));
        0.5 * pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).sum::<f64>()
    }

    proptest! {
        #[test]
        fn histogram_conserves_mass(degs in prop::collection::vec(0usize..20, 20)) {
            let h = DegreeHistogram::from_degrees(20, &degs).unwrap();
            prop_assert_eq!(h.counts().iter().sum::<u64>(), 20);
        }

        #[test]
        fn tv_is_bounded_and_triangle_consistent(
            degs in prop::collection::vec(0usize..30, 30),
            l in 0.0f64..12.0,
            l2 in 0.0f64..12.0,
        ) {
            let h = DegreeHistogram::from_degrees(30, &degs).unwrap();
            let a = poisson_tv(&h, l).unwrap();
            let b = poisson_tv(&h, l2).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(a <= b + poisson_poisson_tv(l, l2) + 1e-9);
        }

        #[test]
        fn components_partition_nodes(edges in prop::collection::vec((0usize..15, 0usize..15), 0..30)) {
            let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a != b).collect();
            let c = components_from_edges(15, edges);
            prop_assert_eq!(c.sizes.iter().sum::<usize>(), 15);
            prop_assert!(c.sizes.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
