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

/// Two-state edge chain: `p0 = P(B_s=1 | B_{s-1}=0)`, `p1 = P(B_s=1 | B_{s-1}=1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MecltgParams<T> {
    pub p0: T,
    pub p1: T,
}

/// `p0 / (1 + p0 - p1)`, the limiting marginal of the two-state chain.
pub fn stationary_probability<T: Scalar>(p0: T, p1: T) -> Result<T> {
    let denom = T::one() + p0 - p1;
    if denom == T::zero() {
        return Err(Error::DegenerateChain);
    }
    Ok(p0 / denom)
}

impl<T: Scalar> MecltgParams<T> {
    pub fn new(p0: T, p1: T) -> Result<Self> {
        check_probability("p0", p0)?;
        check_probability("p1", p1)?;
        Ok(MecltgParams { p0, p1 })
    }

    /// `p0 = λ0 / n`, `p1 = 1 - λ1 n^(-c)`.
    pub fn sparse(n: usize, lambda0: T, lambda1: T, c: T) -> Result<Self> {
        let nn = T::of_usize(n);
        Self::new(lambda0 / nn, T::one() - lambda1 * nn.powf(-c))
    }

    /// `p_w = λ_w log(n) / n`, the connectivity-threshold scaling.
    pub fn connectivity(n: usize, lambda0: T, lambda1: T) -> Result<Self> {
        let nn = T::of_usize(n);
        let base = nn.ln() / nn;
        Self::new(lambda0 * base, lambda1 * base)
    }

    pub fn stationary(&self) -> Result<T> {
        stationary_probability(self.p0, self.p1)
    }

    pub fn sample_chain(&self, len: usize, seed: u64) -> Result<EdgeChain> {
        let p = self.stationary()?.f64();
        let (p0, p1) = (self.p0.f64(), self.p1.f64());
        let mut rng = rng_from_seed(seed);
        Ok(EdgeChain {
            bits: sample_markov_chain(len, p, |_| (p0, p1), &mut rng),
        })
    }
}

pub(crate) fn constant_truth<T: Scalar>(n: usize, p: T) -> Truth<T> {
    Truth {
        assignment: CommunityAssignment::new(vec![0; n], 1).ok(),
        theta: Some(Matrix::from_fn(n, |i, j| if i == j { T::zero() } else { p })),
    }
}

/// Samples a first-order MECLTG: `B_1 ~ Bernoulli(p)` at stationarity, then
/// the two-state kernel along `ordering`.
pub fn gen_mecltg<T: Scalar>(
    n: usize,
    ordering: &Arc<Ordering>,
    params: &MecltgParams<T>,
    seed: u64,
) -> Result<Graph<T>> {
    let chain = params.sample_chain(ordering.len(), seed)?;
    let mut g = graph_from_chain(&chain, ordering, n)?;
    g.ordering = Some(Arc::clone(ordering));
    g.truth = Some(constant_truth(n, params.stationary()?));
    Ok(g)
}

/// Independent `Bernoulli(p)` edges drawn in chain order.
pub fn gen_erdos_renyi<T: Scalar>(n: usize, ordering: &Arc<Ordering>, p: T, seed: u64) -> Result<Graph<T>> {
    gen_mecltg(n, ordering, &MecltgParams::new(p, p)?, seed)
}
