//! Single-group chain with a constant marginal and per-step persistence.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mecltg::constant_truth;
use super::sample_markov_chain;
use crate::error::{Error, Result};
use crate::graph::{graph_from_chain, EdgeChain, Graph};
use crate::ordering::Ordering;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InhomSchedule<T> {
    pub target: T,
    /// `P(B_i = 1 | B_{i-1} = 1)`
    pub q1: Vec<T>,
    /// `P(B_i = 1 | B_{i-1} = 0)`, derived
    pub q0: Vec<T>,
}

/// Derives `q0[i] = ϱ (1 - q1[i]) / (1 - ϱ)` so that every step keeps the
/// stationary marginal `ϱ`.
pub fn make_inhom_schedule<T: Scalar>(target: T, q1: Vec<T>) -> Result<InhomSchedule<T>> {
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::InvalidParameter(format!("target {target} must lie in (0, 1)")));
    }
    let mut q0 = Vec::with_capacity(q1.len());
    for (i, &q) in q1.iter().enumerate() {
        if !(q >= T::zero() && q < T::one()) {
            return Err(Error::InvalidParameter(format!("q1[{i}] = {q} must lie in [0, 1)")));
        }
        let v = target * (T::one() - q) / (T::one() - target);
        if v > T::one() {
            return Err(Error::InfeasibleSchedule { index: i, q0: v.f64() });
        }
        q0.push(v);
    }
    Ok(InhomSchedule { target, q1, q0 })
}

impl<T: Scalar> InhomSchedule<T> {
    pub fn sample_chain(&self, len: usize, seed: u64) -> Result<EdgeChain> {
        if self.q1.len() != len {
            return Err(Error::SizeMismatch {
                expected: len,
                actual: self.q1.len(),
            });
        }
        let q0: Vec<f64> = self.q0.iter().map(|x| x.f64()).collect();
        let q1: Vec<f64> = self.q1.iter().map(|x| x.f64()).collect();
        let mut rng = rng_from_seed(seed);
        Ok(EdgeChain {
            bits: sample_markov_chain(len, self.target.f64(), |s| (q0[s], q1[s]), &mut rng),
        })
    }
}

pub fn gen_inhom<T: Scalar>(
    n: usize,
    ordering: &Arc<Ordering>,
    schedule: &InhomSchedule<T>,
    seed: u64,
) -> Result<Graph<T>> {
    let chain = schedule.sample_chain(ordering.len(), seed)?;
    let mut g = graph_from_chain(&chain, ordering, n)?;
    g.ordering = Some(Arc::clone(ordering));
    g.truth = Some(constant_truth(n, schedule.target));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_with_half_persistence() {
        let s = make_inhom_schedule(1.0f64 / 3.0, vec![0.5; 4]).unwrap();
        for &q in &s.q0 {
            assert!((q - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn q1_equal_target_gives_independence() {
        let r: f64 = 0.37;
        let s = make_inhom_schedule(r, vec![r; 3]).unwrap();
        for &q in &s.q0 {
            assert!((q - r).abs() < 1e-15);
        }
    }

    #[test]
    fn forced_violation() {
        match make_inhom_schedule(0.9, vec![0.5, 0.0]) {
            Err(Error::InfeasibleSchedule { index, q0 }) => {
                assert_eq!(index, 0);
                assert!(q0 > 1.0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(make_inhom_schedule(0.0, vec![0.5]).is_err());
        assert!(make_inhom_schedule(0.5, vec![1.0]).is_err());
    }

    #[test]
    fn stationarity_of_each_step() {
        let s = make_inhom_schedule(0.2f64, vec![0.1, 0.5, 0.9, 0.3]).unwrap();
        for i in 0..4 {
            let p = s.q0[i] * (1.0 - 0.2) + s.q1[i] * 0.2;
            assert!((p - 0.2).abs() < 1e-15);
        }
    }
}
