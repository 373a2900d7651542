//! Combinatorial least-squares fits of block-constant probability matrices.
//!
//! The objective for an assignment `z` and block values `Q` is
//! `L(Q, z) = Σ_{i<j} (M_ij − Q_{z(i) z(j)})²`. For fixed `z` it is minimized
//! by block means; the solvers search over `z`.
//!
//! Groups without a within-group pair (empty or singleton) get `Q_aa = 0`
//! in the solvers: such a block owns no pair and contributes no loss.

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;
use crate::spectral::spectral_cluster_matrix;

/// Largest `k^n` that [`cls_exact`] will enumerate.
pub const EXACT_LIMIT: usize = 4096;
pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_MAX_ITERS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BlockEstimate<T> {
    #[serde(rename = "Q")]
    pub q: Matrix<T>,
    pub z: CommunityAssignment,
    pub loss: T,
    pub theta_hat: Matrix<T>,
    /// Loss after each alternating step of the winning restart (heuristic
    /// only).
    pub history: Vec<T>,
}

/// Which search [`cls`] and [`oracle_cls`] run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "snake_case")]
pub enum Solver {
    Exact,
    Heuristic { restarts: usize, max_iters: usize, seed: u64 },
}

impl Solver {
    pub fn heuristic(seed: u64) -> Self {
        Solver::Heuristic {
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            seed,
        }
    }
}

fn check_input<T: Scalar>(m: &Matrix<T>, k: usize) -> Result<()> {
    let n = m.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in [1, {n}]")));
    }
    let asym = m.max_asymmetry();
    if asym > T::of(1e-10) {
        return Err(Error::NotSymmetric(asym.f64()));
    }
    Ok(())
}

fn check_labels(m_n: usize, z: &CommunityAssignment) -> Result<()> {
    if z.n() != m_n {
        return Err(Error::SizeMismatch {
            expected: m_n,
            actual: z.n(),
        });
    }
    Ok(())
}

/// Pair sums and pair counts per block, upper triangle only.
fn block_sums<T: Scalar>(m: &Matrix<T>, labels: &[usize], k: usize) -> (Vec<T>, Vec<usize>) {
    let n = m.n();
    let mut sums = vec![T::zero(); k * k];
    let mut counts = vec![0usize; k * k];
    for i in 0..n {
        let a = labels[i];
        let row = m.row(i);
        for j in (i + 1)..n {
            let b = labels[j];
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            sums[lo * k + hi] += row[j];
            counts[lo * k + hi] += 1;
        }
    }
    (sums, counts)
}

/// Block means with `0` for blocks that own no pair.
fn means_total<T: Scalar>(m: &Matrix<T>, labels: &[usize], k: usize) -> Matrix<T> {
    let (sums, counts) = block_sums(m, labels, k);
    let mut q = Matrix::zeros(k);
    for a in 0..k {
        for b in a..k {
            let c = counts[a * k + b];
            if c > 0 {
                q.set_sym(a, b, sums[a * k + b] / T::of_usize(c));
            }
        }
    }
    q
}

/// Block means of a symmetric hollow matrix under `z`. Diagonal blocks
/// average over unordered within-group pairs; a group with fewer than two
/// members leaves its diagonal block undefined.
pub fn block_means<T: Scalar>(m: &Matrix<T>, z: &CommunityAssignment) -> Result<Matrix<T>> {
    check_labels(m.n(), z)?;
    let asym = m.max_asymmetry();
    if asym > T::of(1e-10) {
        return Err(Error::NotSymmetric(asym.f64()));
    }
    if let Some(a) = z.group_sizes().iter().position(|&s| s < 2) {
        return Err(Error::UndefinedBlock(a + 1));
    }
    Ok(means_total(m, z.labels(), z.k()))
}

/// `Σ_{i<j} (M_ij − Q_{z(i) z(j)})²`, summed directly.
pub fn cls_loss<T: Scalar>(m: &Matrix<T>, q: &Matrix<T>, z: &CommunityAssignment) -> Result<T> {
    check_labels(m.n(), z)?;
    if q.n() != z.k() {
        return Err(Error::SizeMismatch {
            expected: z.k(),
            actual: q.n(),
        });
    }
    Ok(direct_loss(m, q, z.labels()))
}

fn direct_loss<T: Scalar>(m: &Matrix<T>, q: &Matrix<T>, labels: &[usize]) -> T {
    let n = m.n();
    let mut loss = T::zero();
    for i in 0..n {
        let row = m.row(i);
        let qa = q.row(labels[i]);
        for j in (i + 1)..n {
            let r = row[j] - qa[labels[j]];
            loss += r * r;
        }
    }
    loss
}

/// `θ̂_ij = Q_{z(i) z(j)}` off the diagonal, zero on it.
pub fn induced_theta<T: Scalar>(q: &Matrix<T>, z: &CommunityAssignment) -> Matrix<T> {
    let l = z.labels();
    Matrix::from_fn(z.n(), |i, j| if i == j { T::zero() } else { q.get(l[i], l[j]) })
}

fn finish<T: Scalar>(m: &Matrix<T>, labels: Vec<usize>, k: usize, history: Vec<T>) -> Result<BlockEstimate<T>> {
    let q = means_total(m, &labels, k);
    let loss = direct_loss(m, &q, &labels);
    let z = CommunityAssignment::new(labels, k)?;
    let theta_hat = induced_theta(&q, &z);
    Ok(BlockEstimate {
        q,
        z,
        loss,
        theta_hat,
        history,
    })
}

/// Global minimizer by enumerating all `k^n` label sequences in
/// lexicographic order (node 1 most significant). A later sequence replaces
/// the incumbent only if it improves the loss by more than `1e-12`, so ties
/// go to the lexicographically smallest labeling.
pub fn cls_exact<T: Scalar>(a: &Matrix<T>, k: usize) -> Result<BlockEstimate<T>> {
    check_input(a, k)?;
    let n = a.n();
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(k).filter(|&t| t <= EXACT_LIMIT));
    let Some(total) = total else {
        return Err(Error::TooLarge(format!(
            "{k}^{n} assignments exceed the exact limit of {EXACT_LIMIT}; use cls_heuristic"
        )));
    };
    let sq: T = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j) * a.get(i, j))
        .sum();
    let tol = T::of(1e-12);
    let mut labels = vec![0usize; n];
    let mut best: Option<(T, Vec<usize>)> = None;
    for _ in 0..total {
        // for block means, L = Σ M² − Σ_blocks S²/N
        let (sums, counts) = block_sums(a, &labels, k);
        let fit: T = sums
            .iter()
            .zip(&counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&s, &c)| s * s / T::of_usize(c))
            .sum();
        let loss = sq - fit;
        if best.as_ref().is_none_or(|(b, _)| loss < *b - tol) {
            best = Some((loss, labels.clone()));
        }
        // next sequence in lexicographic order
        for pos in (0..n).rev() {
            labels[pos] += 1;
            if labels[pos] < k {
                break;
            }
            labels[pos] = 0;
        }
    }
    let (_, labels) = best.expect("at least one assignment");
    finish(a, labels, k, Vec::new())
}

/// Incremental state for one alternating-minimization run.
struct Search<'a, T> {
    m: &'a Matrix<T>,
    k: usize,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    /// `link[i * k + b] = Σ_{j ∈ b, j ≠ i} M_ij`.
    link: Vec<T>,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn new(m: &'a Matrix<T>, k: usize, labels: Vec<usize>) -> Self {
        let n = m.n();
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        let mut link = vec![T::zero(); n * k];
        for i in 0..n {
            let row = m.row(i);
            for j in 0..n {
                if j != i {
                    link[i * k + labels[j]] += row[j];
                }
            }
        }
        Search {
            m,
            k,
            labels,
            sizes,
            link,
        }
    }

    fn move_node(&mut self, i: usize, to: usize) {
        let from = self.labels[i];
        if from == to {
            return;
        }
        let k = self.k;
        for (j, &mji) in self.m.row(i).iter().enumerate() {
            if j != i {
                self.link[j * k + from] -= mji;
                self.link[j * k + to] += mji;
            }
        }
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        self.labels[i] = to;
    }

    /// Pair count between `i` and group `b`, excluding `i` itself.
    fn others(&self, i: usize, b: usize) -> usize {
        self.sizes[b] - usize::from(self.labels[i] == b)
    }

    /// `Σ_{j≠i} (M_ij − Q_{g z(j)})²` up to the `g`-free term `Σ M_ij²`.
    fn cost(&self, q: &Matrix<T>, i: usize, g: usize) -> T {
        let two = T::of(2.0);
        let qg = q.row(g);
        (0..self.k)
            .map(|b| {
                let c = T::of_usize(self.others(i, b));
                qg[b] * qg[b] * c - two * qg[b] * self.link[i * self.k + b]
            })
            .sum()
    }

    /// Moves every node to its cheapest group under fixed `q`; ties keep the
    /// current group, otherwise the smallest index. Returns whether any
    /// node moved.
    fn reassign(&mut self, q: &Matrix<T>) -> bool {
        let tol = T::of(1e-12);
        let mut changed = false;
        for i in 0..self.labels.len() {
            let cur = self.labels[i];
            let mut best = cur;
            let mut best_cost = self.cost(q, i, cur);
            for g in 0..self.k {
                let c = self.cost(q, i, g);
                if c < best_cost - tol {
                    best = g;
                    best_cost = c;
                }
            }
            if best != cur {
                self.move_node(i, best);
                changed = true;
            }
        }
        changed
    }

    /// Fills empty groups, each time moving the node with the largest loss
    /// contribution among groups of size > 1. With block means recomputed
    /// afterwards this never raises the loss: the moved node's pairs get a
    /// free block row.
    fn repair(&mut self, q: &Matrix<T>) -> bool {
        let mut repaired = false;
        while let Some(empty) = self.sizes.iter().position(|&s| s == 0) {
            let mut worst: Option<(T, usize)> = None;
            for i in 0..self.labels.len() {
                if self.sizes[self.labels[i]] < 2 {
                    continue;
                }
                let qa = q.row(self.labels[i]);
                let fit: T = self
                    .m
                    .row(i)
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(j, &v)| (v - qa[self.labels[j]]).powi(2))
                    .sum();
                if worst.is_none_or(|(w, _)| fit > w) {
                    worst = Some((fit, i));
                }
            }
            let (_, i) = worst.expect("n >= k leaves a group of size > 1");
            self.move_node(i, empty);
            repaired = true;
        }
        repaired
    }
}

fn alternate<T: Scalar>(m: &Matrix<T>, k: usize, init: Vec<usize>, max_iters: usize) -> (T, Vec<usize>, Vec<T>) {
    let mut s = Search::new(m, k, init);
    let mut q = means_total(m, &s.labels, k);
    if s.repair(&q) {
        q = means_total(m, &s.labels, k);
    }
    let mut history = vec![direct_loss(m, &q, &s.labels)];
    for _ in 0..max_iters {
        let moved = s.reassign(&q);
        let repaired = s.repair(&q);
        if !moved && !repaired {
            break;
        }
        q = means_total(m, &s.labels, k);
        history.push(direct_loss(m, &q, &s.labels));
    }
    let loss = *history.last().expect("non-empty history");
    (loss, s.labels, history)
}

/// Alternating minimization from a spectral start plus `restarts − 1`
/// uniformly random starts. Each step sets `Q` to block means and then
/// reassigns nodes one at a time, so the loss never increases. The lowest
/// final loss wins, ties going to the earliest restart.
pub fn cls_heuristic<T: Scalar>(
    a: &Matrix<T>,
    k: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
) -> Result<BlockEstimate<T>> {
    check_input(a, k)?;
    if restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let n = a.n();
    let random_labels = |r: usize| {
        let mut rng = rng_from_seed(derive_seed(seed, r as u64));
        (0..n).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>()
    };
    let runs: Vec<(T, Vec<usize>, Vec<T>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let init = if r == 0 && k > 1 {
                spectral_cluster_matrix(a, k, seed)
                    .map(|c| c.assignment.labels().to_vec())
                    .unwrap_or_else(|_| random_labels(r))
            } else if k == 1 {
                vec![0; n]
            } else {
                random_labels(r)
            };
            alternate(a, k, init, max_iters)
        })
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.0 < runs[best].0 {
            best = r;
        }
    }
    let (_, labels, history) = runs.into_iter().nth(best).expect("restarts >= 1");
    finish(a, labels, k, history)
}

/// Dispatches to the chosen solver.
pub fn cls<T: Scalar>(m: &Matrix<T>, k: usize, solver: &Solver) -> Result<BlockEstimate<T>> {
    match *solver {
        Solver::Exact => cls_exact(m, k),
        Solver::Heuristic {
            restarts,
            max_iters,
            seed,
        } => cls_heuristic(m, k, restarts, max_iters, seed),
    }
}

/// The least-squares fit applied to the true probability matrix.
pub fn oracle_cls<T: Scalar>(theta: &Matrix<T>, k: usize, solver: &Solver) -> Result<BlockEstimate<T>> {
    cls(theta, k, solver)
}

/// `(1/n²) Σ_{i,j} (θ̂_ij − θ_ij)²`.
pub fn mse<T: Scalar>(theta_hat: &Matrix<T>, theta: &Matrix<T>) -> Result<T> {
    if theta_hat.n() != theta.n() {
        return Err(Error::SizeMismatch {
            expected: theta.n(),
            actual: theta_hat.n(),
        });
    }
    let n = T::of_usize(theta.n());
    let ss: T = theta_hat
        .as_slice()
        .iter()
        .zip(theta.as_slice())
        .map(|(a, b)| (*a - *b) * (*a - *b))
        .sum();
    Ok(ss / (n * n))
}

/// `⌊n^{1/(1 + min(α, 1))}⌋`, clamped to `[1, n]`.
pub fn graphon_k_select(n: usize, alpha: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("n = {n} must be at least 2")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
    }
    let k = (n as f64).powf(1.0 / (1.0 + alpha.min(1.0)));
    // guard against n^(1/m) landing a hair below an exact integer
    Ok(((k + 1e-9).floor() as usize).clamp(1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn random_graph(n: usize, p: f64, seed: u64) -> Matrix<f64> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() < p {
                    m.set_sym(i, j, 1.0);
                }
            }
        }
        m
    }

    /// Independent oracle: every labeling, block means by explicit pair
    /// lists, loss by direct summation.
    fn brute_force(m: &Matrix<f64>, k: usize) -> f64 {
        let n = m.n();
        let mut best = f64::INFINITY;
        for code in 0..k.pow(n as u32) {
            let z: Vec<usize> = (0..n).map(|i| (code / k.pow(i as u32)) % k).collect();
            let mut loss = 0.0;
            for a in 0..k {
                for b in a..k {
                    let vals: Vec<f64> = (0..n)
                        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                        .filter(|&(i, j)| (z[i].min(z[j]), z[i].max(z[j])) == (a, b))
                        .map(|(i, j)| m.get(i, j))
                        .collect();
                    if vals.is_empty() {
                        continue;
                    }
                    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
                    loss += vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
                }
            }
            best = best.min(loss);
        }
        best
    }

    fn two_blocks() -> Matrix<f64> {
        let mut m = Matrix::zeros(4);
        m.set_sym(0, 1, 1.0);
        m.set_sym(2, 3, 1.0);
        m
    }

    #[test]
    fn block_means_examples() {
        let z = CommunityAssignment::new(vec![0, 0, 1, 1], 2).unwrap();
        let q = block_means(&two_blocks(), &z).unwrap();
        assert_eq!(q.to_rows(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);

        let c: Matrix<f64> = Matrix::from_fn(5, |i, j| if i == j { 0.0 } else { 0.3 });
        let z = CommunityAssignment::new(vec![0, 1, 0, 1, 1], 2).unwrap();
        let q = block_means(&c, &z).unwrap();
        assert!(q.as_slice().iter().all(|v| (v - 0.3).abs() < 1e-15));
    }

    #[test]
    fn block_means_rejects_singleton_diagonal() {
        let z = CommunityAssignment::new(vec![0, 0, 0, 1], 2).unwrap();
        assert_eq!(block_means(&two_blocks(), &z), Err(Error::UndefinedBlock(2)));
    }

    #[test]
    fn exact_recovers_perfect_blocks() {
        let e = cls_exact(&two_blocks(), 2).unwrap();
        assert_eq!(e.loss, 0.0);
        assert_eq!(e.z.labels(), &[0, 0, 1, 1]);
        assert!(e.theta_hat.is_hollow());
    }

    #[test]
    fn exact_on_empty_graph_returns_first_labeling() {
        let e = cls_exact(&Matrix::<f64>::zeros(5), 2).unwrap();
        assert_eq!(e.loss, 0.0);
        assert_eq!(e.z.labels(), &[0; 5]);
        assert!(e.q.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn exact_matches_enumeration_oracle() {
        for seed in 0..10 {
            let m = random_graph(8, 0.4, seed);
            let e = cls_exact(&m, 2).unwrap();
            assert!((e.loss - brute_force(&m, 2)).abs() < 1e-12, "seed {seed}");
        }
        let m = random_graph(6, 0.5, 77);
        assert!((cls_exact(&m, 3).unwrap().loss - brute_force(&m, 3)).abs() < 1e-12);
    }

    #[test]
    fn exact_size_guard() {
        assert!(cls_exact(&Matrix::<f64>::zeros(12), 2).is_ok());
        assert!(matches!(cls_exact(&Matrix::<f64>::zeros(13), 2), Err(Error::TooLarge(_))));
        assert!(matches!(cls_exact(&Matrix::<f64>::zeros(8), 3), Err(Error::TooLarge(_))));
    }

    #[test]
    fn heuristic_perfect_and_single_group() {
        let e = cls_heuristic(&two_blocks(), 2, 1, 50, 3).unwrap();
        assert_eq!(e.loss, 0.0);
        let m = random_graph(9, 0.5, 5);
        let e = cls_heuristic(&m, 1, 3, 50, 1).unwrap();
        let mean = (0..9).flat_map(|i| ((i + 1)..9).map(move |j| (i, j))).map(|(i, j)| m.get(i, j)).sum::<f64>() / 36.0;
        assert!((e.q.get(0, 0) - mean).abs() < 1e-15);
        assert_eq!(e.history.len(), 1);
    }

    #[test]
    fn heuristic_loss_never_increases() {
        for seed in 0..20 {
            let m = random_graph(30, 0.3, seed);
            for k in [2, 3, 5] {
                let e = cls_heuristic(&m, k, 4, 100, seed).unwrap();
                assert!(e.history.windows(2).all(|w| w[1] <= w[0] + 1e-12));
                assert!((e.loss - *e.history.last().unwrap()).abs() < 1e-9);
                assert!(e.z.all_groups_nonempty());
            }
        }
    }

    #[test]
    fn oracle_on_block_theta() {
        let z = CommunityAssignment::contiguous(&[3, 4]).unwrap();
        let q = Matrix::from_rows(&[vec![0.6, 0.1], vec![0.1, 0.4]]).unwrap();
        let theta = induced_theta(&q, &z);
        let e = oracle_cls(&theta, 2, &Solver::Exact).unwrap();
        assert!(e.loss < 1e-24);
        assert_eq!(crate::spectral::misclustered_count(&e.z, &z).unwrap(), 0);
        let e = oracle_cls(&theta, 7, &Solver::heuristic(1)).unwrap();
        assert!(e.loss < 1e-24);
    }

    #[test]
    fn mse_examples() {
        let c: Matrix<f64> = Matrix::from_fn(6, |i, j| if i == j { 0.0 } else { 0.2 });
        assert_eq!(mse(&c, &c).unwrap(), 0.0);
        let got = mse(&Matrix::zeros(6), &c).unwrap();
        assert!((got - 0.04 * 30.0 / 36.0).abs() < 1e-15);
        assert!(mse(&Matrix::<f64>::zeros(5), &c).is_err());
    }

    #[test]
    fn k_selection() {
        assert_eq!(graphon_k_select(100, 1.0).unwrap(), 10);
        assert_eq!(graphon_k_select(81, 0.5).unwrap(), 18);
        assert_eq!(graphon_k_select(100, 3.0).unwrap(), 10);
        assert_eq!(graphon_k_select(1000, 0.5).unwrap(), 100);
        assert!(graphon_k_select(1, 1.0).is_err());
        assert!(graphon_k_select(10, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn block_means_minimize_for_fixed_z(seed in 0u64..500, a in 0usize..2, b in 0usize..2, eps in prop::sample::select(vec![-1e-3, 1e-3, 0.05])) {
            let m = random_graph(9, 0.5, seed);
            let z = CommunityAssignment::new((0..9).map(|i| (i * 5 + seed as usize) % 2).collect(), 2).unwrap();
            prop_assume!(z.group_sizes().iter().all(|&s| s >= 2));
            let q = block_means(&m, &z).unwrap();
            let base = cls_loss(&m, &q, &z).unwrap();
            let mut p = q.clone();
            p.set_sym(a, b, q.get(a, b) + eps);
            prop_assert!(cls_loss(&m, &p, &z).unwrap() > base);
        }

        #[test]
        fn relabeling_leaves_loss_and_theta_unchanged(seed in 0u64..500) {
            let m = random_graph(10, 0.4, seed);
            let z = CommunityAssignment::new((0..10).map(|i| (i * 7 + seed as usize) % 3).collect(), 3).unwrap();
            prop_assume!(z.all_groups_nonempty());
            let q = means_total(&m, z.labels(), 3);
            let swapped = z.relabel(&[2, 0, 1]).unwrap();
            let qs = means_total(&m, swapped.labels(), 3);
            let l1 = cls_loss(&m, &q, &z).unwrap();
            let l2 = cls_loss(&m, &qs, &swapped).unwrap();
            prop_assert!((l1 - l2).abs() < 1e-12);
            prop_assert_eq!(induced_theta(&q, &z), induced_theta(&qs, &swapped));
        }

        #[test]
        fn exact_loss_is_sum_of_squares(seed in 0u64..200) {
            let m = random_graph(7, 0.5, seed);
            let e = cls_exact(&m, 2).unwrap();
            prop_assert!((e.loss - cls_loss(&m, &e.q, &e.z).unwrap()).abs() < 1e-15);
            prop_assert!(e.theta_hat.is_hollow());
            prop_assert!(e.q.max_asymmetry() == 0.0);
        }
    }
}
