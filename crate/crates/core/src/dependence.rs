//! Edge-dependence quantities for two-state edge chains: the dependence
//! parameter χ, closed-form k-step conditionals, the dependence measure
//! Δ(k) and its Monte Carlo estimate, and the rate helper `G(χ, N, u)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{stationary_probability, Model};
use crate::ordering::Ordering;
use crate::rng::derive_seed;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceProfile<T> {
    /// `(1 - 2α')^(1/l)`
    pub chi: T,
    /// Smallest transition probability of the kernel.
    pub alpha_prime: T,
    /// Markov order `l`; always 1 here.
    pub memory: usize,
    /// Largest spread of `P(B_s = 1 | ·)` across conditioning values,
    /// `|p1 - p0|`, which is also the exact geometric decay rate.
    pub p_tilde: T,
    pub stationary: T,
}

impl<T: Scalar> DependenceProfile<T> {
    pub fn decay_rate(&self) -> T {
        self.p_tilde
    }

    /// Closed-form `Δ(k) = max(p, 1-p) |p1 - p0|^k`.
    pub fn delta(&self, k: usize) -> T {
        self.stationary.max(T::one() - self.stationary) * self.p_tilde.powi(k as i32)
    }
}

fn check_open_unit<T: Scalar>(name: &str, p: T) -> Result<()> {
    if p > T::zero() && p < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {p}: the χ bound needs every transition probability in (0, 1)"
        )))
    }
}

/// Dependence profile of the first-order two-state kernel `(p0, p1)`.
pub fn chi_of_two_state<T: Scalar>(p0: T, p1: T) -> Result<DependenceProfile<T>> {
    check_open_unit("p0", p0)?;
    check_open_unit("p1", p1)?;
    let alpha_prime = p0.min(T::one() - p0).min(p1).min(T::one() - p1);
    let two = T::one() + T::one();
    Ok(DependenceProfile {
        chi: T::one() - two * alpha_prime,
        alpha_prime,
        memory: 1,
        p_tilde: (p1 - p0).abs(),
        stationary: stationary_probability(p0, p1)?,
    })
}

/// `P_k(a | b) = P(B_j = a | B_{j-k} = b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KStepConditionals<T> {
    pub one_given_zero: T,
    pub one_given_one: T,
    pub zero_given_one: T,
    pub zero_given_zero: T,
}

pub fn k_step_conditionals<T: Scalar>(p0: T, p1: T, k: usize) -> Result<KStepConditionals<T>> {
    if k == 0 {
        return Err(Error::InvalidParameter("lag k must be at least 1".into()));
    }
    let p = stationary_probability(p0, p1)?;
    let r = (p1 - p0).powi(k as i32);
    let one_given_zero = p - p * r;
    let one_given_one = p + (T::one() - p) * r;
    Ok(KStepConditionals {
        one_given_zero,
        one_given_one,
        zero_given_one: T::one() - one_given_one,
        zero_given_zero: T::one() - one_given_zero,
    })
}

/// `Δ(k) = max(p, 1 - p) |p1 - p0|^k`: the supremum over conditioning bit
/// and outcome of `|P_k(s | b) - P(B = s)|`.
pub fn delta_closed_form<T: Scalar>(p0: T, p1: T, k: usize) -> Result<T> {
    if k == 0 {
        return Err(Error::InvalidParameter("lag k must be at least 1".into()));
    }
    let p = stationary_probability(p0, p1)?;
    Ok(p.max(T::one() - p) * (p1 - p0).abs().powi(k as i32))
}

/// The cell `(position, conditioning bit)` attaining an empirical Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaCell {
    /// 1-based chain position `i`.
    pub position: usize,
    pub given: u8,
    /// Replications in which `B_{i-k} = given`.
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate {
    pub lag: usize,
    pub delta: f64,
    /// Normal-approximation binomial standard error of the argmax cell.
    pub se: f64,
    pub argmax: DeltaCell,
    /// Cells whose conditioning event never occurred; excluded from the max.
    pub undefined_cells: usize,
    pub replications: usize,
}

/// Estimates `Δ(k) = max_{i, b, s} |P(B_i = s | B_{i-k} = b) - P(B_i = s)|`
/// from independent replications of `model` along `ordering`.
///
/// Conditioning uses only `B_{i-k}`, which is exact for memory-1 chains.
/// `positions` are 1-based chain positions in `[k+1, N]`. Replication `r`
/// uses seed `derive_seed(seed, r)`.
pub fn delta_empirical<T: Scalar>(
    model: &Model<T>,
    ordering: &Ordering,
    k: usize,
    positions: &[usize],
    replications: usize,
    seed: u64,
) -> Result<DeltaEstimate> {
    if replications < 100 {
        return Err(Error::InvalidParameter(format!(
            "delta_empirical needs at least 100 replications, got {replications}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("lag k must be at least 1".into()));
    }
    if positions.is_empty() {
        return Err(Error::Empty("positions"));
    }
    let big_n = ordering.len();
    if let Some(&bad) = positions.iter().find(|&&i| i <= k || i > big_n) {
        return Err(Error::InvalidParameter(format!(
            "position {bad} outside [{}, {big_n}] for lag {k}",
            k + 1
        )));
    }

    // per replication: (B_{i-k}, B_i) for each requested position
    let samples: Vec<Vec<(u8, u8)>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            model
                .sample_chain(ordering, derive_seed(seed, r as u64))
                .map(|c| positions.iter().map(|&i| (c.bits[i - 1 - k], c.bits[i - 1])).collect())
        })
        .collect::<Result<_>>()?;

    let rf = replications as f64;
    let mut best: Option<(f64, f64, DeltaCell)> = None;
    let mut undefined = 0;
    for (col, &position) in positions.iter().enumerate() {
        let mut given = [0usize; 2];
        let mut ones_given = [0usize; 2];
        let mut ones = 0usize;
        for rep in &samples {
            let (b, s) = rep[col];
            given[b as usize] += 1;
            ones_given[b as usize] += s as usize;
            ones += s as usize;
        }
        let marginal = ones as f64 / rf;
        for b in 0..2 {
            if given[b] == 0 {
                undefined += 1;
                continue;
            }
            let cond = ones_given[b] as f64 / given[b] as f64;
            // |P(0|b) - P(0)| equals |P(1|b) - P(1)|
            let dev = (cond - marginal).abs();
            let se = (cond * (1.0 - cond) / given[b] as f64).sqrt();
            let cell = DeltaCell {
                position,
                given: b as u8,
                support: given[b],
            };
            if best.is_none_or(|(d, _, _)| dev > d) {
                best = Some((dev, se, cell));
            }
        }
    }
    let (delta, se, argmax) = best.ok_or(Error::Empty("no conditioning event was observed"))?;
    Ok(DeltaEstimate {
        lag: k,
        delta,
        se,
        argmax,
        undefined_cells: undefined,
        replications,
    })
}

/// `G(χ, N, u) = Σ_{r=0}^{N} r^u χ^{r/2}`, with `0^0 = 1`.
pub fn g_function<T: Scalar>(chi: T, big_n: usize, u: u32) -> Result<T> {
    if !(chi >= T::zero() && chi < T::one()) {
        return Err(Error::InvalidParameter(format!("chi = {chi} must lie in [0, 1)")));
    }
    let root = chi.sqrt();
    let mut sum = T::zero();
    let mut weight = T::one(); // χ^{r/2}
    for r in 0..=big_n {
        sum += T::of_usize(r).powi(u as i32) * weight;
        weight *= root;
        if weight == T::zero() {
            break;
        }
    }
    Ok(sum)
}
