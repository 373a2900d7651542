//! Composite stochastic block model: every edge depends on its parent edge
//! in the latent order, with kernels indexed by both block pairs.
//!
//! Block pairs `{a, b}` (`a <= b`, 0-based) are indexed row-major over the
//! upper triangle: `11, 12, ..., 1k, 22, ..., kk`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_probability, sample_markov_chain};
use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::graph::{graph_from_chain, EdgeChain, Graph, Truth};
use crate::matrix::Matrix;
use crate::ordering::Ordering;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

#[inline]
pub fn block_pair_count(k: usize) -> usize {
    k * (k + 1) / 2
}

#[inline]
pub fn block_pair_index(k: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * k - (a * a + a) / 2 + b
}

fn pair_label(k: usize, idx: usize) -> String {
    let mut c = 0;
    for a in 0..k {
        for b in a..k {
            if c == idx {
                return format!("({}, {})", a + 1, b + 1);
            }
            c += 1;
        }
    }
    format!("#{idx}")
}

/// Solved kernel of a composite SBM.
///
/// `rho_zero[prev][cur]` and `rho_one[prev][cur]` are the probabilities that
/// an edge of block pair `cur` is present given that the parent edge (of
/// block pair `prev`) is absent/present. `stationary[c]` is the marginal
/// edge probability of block pair `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsbmParams<T> {
    pub k: usize,
    pub rho_diag: Vec<T>,
    pub rho_one: Vec<Vec<T>>,
    pub rho_zero: Vec<Vec<T>>,
    pub stationary: Vec<T>,
}

/// Computes the stationary block probabilities from the self-transition
/// kernels and solves for every cross-pair zero-conditional probability so
/// that each block pair keeps its stationary marginal whatever block pair
/// precedes it.
///
/// `rho_diag[c]` is the zero-conditional self-transition probability of
/// block pair `c`; `rho_one[prev][cur]` is the full one-conditional table.
pub fn solve_csbm<T: Scalar>(k: usize, rho_diag: &[T], rho_one: &[Vec<T>]) -> Result<CsbmParams<T>> {
    let kp = block_pair_count(k);
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if rho_diag.len() != kp {
        return Err(Error::SizeMismatch {
            expected: kp,
            actual: rho_diag.len(),
        });
    }
    if rho_one.len() != kp {
        return Err(Error::SizeMismatch {
            expected: kp,
            actual: rho_one.len(),
        });
    }
    for (c, &r) in rho_diag.iter().enumerate() {
        check_probability(&format!("rho_diag{}", pair_label(k, c)), r)?;
    }
    for (prev, row) in rho_one.iter().enumerate() {
        if row.len() != kp {
            return Err(Error::SizeMismatch {
                expected: kp,
                actual: row.len(),
            });
        }
        for (cur, &r) in row.iter().enumerate() {
            check_probability(
                &format!("rho_one[{} -> {}]", pair_label(k, prev), pair_label(k, cur)),
                r,
            )?;
        }
    }

    let infeasible = |c: usize, reason: String| Error::InfeasibleBlock {
        pair: pair_label(k, c),
        reason,
    };

    let mut stationary = Vec::with_capacity(kp);
    for c in 0..kp {
        let p = super::stationary_probability(rho_diag[c], rho_one[c][c])
            .map_err(|_| infeasible(c, "self-transition kernel has 0/0 stationary law".into()))?;
        stationary.push(p);
    }

    let tol = T::tolerance();
    let mut rho_zero = vec![vec![T::zero(); kp]; kp];
    for prev in 0..kp {
        for cur in 0..kp {
            if prev == cur {
                rho_zero[prev][cur] = rho_diag[cur];
                continue;
            }
            let denom = T::one() - stationary[prev];
            if denom <= T::zero() {
                return Err(infeasible(
                    prev,
                    format!(
                        "stationary probability 1 leaves rho_zero[{} -> {}] undetermined",
                        pair_label(k, prev),
                        pair_label(k, cur)
                    ),
                ));
            }
            let mut v = (stationary[cur] - rho_one[prev][cur] * stationary[prev]) / denom;
            if v < -tol || v > T::one() + tol {
                return Err(infeasible(
                    cur,
                    format!(
                        "rho_zero[{} -> {}] = {v} lies outside [0, 1]",
                        pair_label(k, prev),
                        pair_label(k, cur)
                    ),
                ));
            }
            // only rounding residue survives the check above
            v = v.max(T::zero()).min(T::one());
            rho_zero[prev][cur] = v;
        }
    }

    Ok(CsbmParams {
        k,
        rho_diag: rho_diag.to_vec(),
        rho_one: rho_one.to_vec(),
        rho_zero,
        stationary,
    })
}

impl<T: Scalar> CsbmParams<T> {
    /// Stationary edge probabilities as a symmetric `k × k` block matrix.
    pub fn block_matrix(&self) -> Vec<Vec<T>> {
        let k = self.k;
        (0..k)
            .map(|a| (0..k).map(|b| self.stationary[block_pair_index(k, a, b)]).collect())
            .collect()
    }

    pub fn theta(&self, z: &CommunityAssignment) -> Matrix<T> {
        let k = self.k;
        Matrix::from_fn(z.n(), |i, j| {
            if i == j {
                T::zero()
            } else {
                self.stationary[block_pair_index(k, z.label(i), z.label(j))]
            }
        })
    }

    pub fn sample_chain(&self, ordering: &Ordering, z: &CommunityAssignment, seed: u64) -> Result<EdgeChain> {
        if z.k() != self.k || z.n() != ordering.n() {
            return Err(Error::InvalidParameter(format!(
                "assignment has n = {}, k = {}; expected n = {}, k = {}",
                z.n(),
                z.k(),
                ordering.n(),
                self.k
            )));
        }
        let k = self.k;
        let block_of = |s: usize| {
            let (i, j) = ordering.pair(s);
            block_pair_index(k, z.label(i), z.label(j))
        };
        let zero: Vec<Vec<f64>> = self.rho_zero.iter().map(|r| r.iter().map(|x| x.f64()).collect()).collect();
        let one: Vec<Vec<f64>> = self.rho_one.iter().map(|r| r.iter().map(|x| x.f64()).collect()).collect();
        let len = ordering.len();
        let first = if len > 0 { self.stationary[block_of(0)].f64() } else { 0.0 };
        let mut rng = rng_from_seed(seed);
        let mut prev_block = if len > 0 { block_of(0) } else { 0 };
        let bits = sample_markov_chain(
            len,
            first,
            |s| {
                let cur = block_of(s);
                let kern = (zero[prev_block][cur], one[prev_block][cur]);
                prev_block = cur;
                kern
            },
            &mut rng,
        );
        Ok(EdgeChain { bits })
    }
}

/// Samples a composite SBM along `ordering` with ground-truth groups `z`.
pub fn gen_csbm<T: Scalar>(
    n: usize,
    ordering: &Arc<Ordering>,
    params: &CsbmParams<T>,
    z: &CommunityAssignment,
    seed: u64,
) -> Result<Graph<T>> {
    if !z.all_groups_nonempty() {
        return Err(Error::InvalidParameter("every group must contain at least one node".into()));
    }
    let chain = params.sample_chain(ordering, z, seed)?;
    let mut g = graph_from_chain(&chain, ordering, n)?;
    g.ordering = Some(Arc::clone(ordering));
    g.truth = Some(Truth {
        assignment: Some(z.clone()),
        theta: Some(params.theta(z)),
    });
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_mecltg, MecltgParams};
    use crate::ordering::OrderingKind;

    pub(crate) fn table_s12() -> (Vec<f64>, Vec<Vec<f64>>) {
        (
            vec![0.1, 0.01, 0.2],
            vec![
                vec![0.4, 0.05, 0.3],
                vec![0.3, 0.1, 0.1],
                vec![0.2, 0.03, 0.6],
            ],
        )
    }

    #[test]
    fn pair_indexing() {
        let k = 3;
        let mut expect = 0;
        for a in 0..k {
            for b in a..k {
                assert_eq!(block_pair_index(k, a, b), expect);
                assert_eq!(block_pair_index(k, b, a), expect);
                expect += 1;
            }
        }
        assert_eq!(expect, block_pair_count(k));
    }

    #[test]
    fn two_group_tables() {
        let (d, o) = table_s12();
        let p = solve_csbm(2, &d, &o).unwrap();
        assert!((p.stationary[0] - 0.1 / 0.7).abs() < 1e-12);
        assert!((p.stationary[1] - 0.01 / 0.91).abs() < 1e-12);
        assert!((p.stationary[2] - 1.0 / 3.0).abs() < 1e-12);
        // parent 11, child 12
        let expect = (0.01 / 0.91 - 0.05 * (0.1 / 0.7)) / (1.0 - 0.1 / 0.7);
        assert!((p.rho_zero[0][1] - expect).abs() < 1e-12);
        assert!((p.rho_zero[0][1] - 0.004487).abs() < 1e-6);
        // constraint (b) for every ordered pair of distinct block pairs
        for prev in 0..3 {
            for cur in 0..3 {
                let lhs = p.rho_zero[prev][cur] * (1.0 - p.stationary[prev])
                    + p.rho_one[prev][cur] * p.stationary[prev];
                if prev != cur {
                    assert!((lhs - p.stationary[cur]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn infeasible_is_an_error() {
        let (d, mut o) = table_s12();
        // parent 22 present forces child 12 probability far above its marginal
        o[2][1] = 0.9;
        match solve_csbm(2, &d, &o) {
            Err(Error::InfeasibleBlock { pair, .. }) => assert_eq!(pair, "(1, 2)"),
            other => panic!("expected infeasibility, got {other:?}"),
        }
        assert!(solve_csbm(2, &[0.0, 0.1, 0.1], &[vec![1.0, 0.1, 0.1], vec![0.1; 3], vec![0.1; 3]]).is_err());
        assert!(solve_csbm(2, &d[..2], &o).is_err());
    }

    #[test]
    fn single_group_matches_mecltg() {
        let n = 40;
        let o = Arc::new(Ordering::new(OrderingKind::Omega1, n).unwrap());
        let p = solve_csbm(1, &[0.2], &[vec![0.6]]).unwrap();
        let z = CommunityAssignment::new(vec![0; n], 1).unwrap();
        for seed in 0..5 {
            let a = gen_csbm(n, &o, &p, &z, seed).unwrap();
            let b = gen_mecltg(n, &o, &MecltgParams::new(0.2, 0.6).unwrap(), seed).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn constant_kernel_is_independent() {
        let r: f64 = 0.3;
        let p = solve_csbm(2, &[r; 3], &vec![vec![r; 3]; 3]).unwrap();
        for row in &p.rho_zero {
            for &v in row {
                assert!((v - r).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn truth_is_block_constant() {
        let (d, o) = table_s12();
        let p = solve_csbm(2, &d, &o).unwrap();
        let z = CommunityAssignment::balanced(6, 2).unwrap();
        let ord = Arc::new(Ordering::new(OrderingKind::Omega2, 6).unwrap());
        let g = gen_csbm(6, &ord, &p, &z, 1).unwrap();
        let th = g.theta().unwrap();
        assert_eq!(th.get(0, 1), p.stationary[0]);
        assert_eq!(th.get(0, 5), p.stationary[1]);
        assert_eq!(th.get(4, 5), p.stationary[2]);
        assert_eq!(g.assignment(), Some(&z));
    }
}
