//! Composite graphon with memory one.
//!
//! Marginals `m_s = f(ξ_i, ξ_j)` are fixed by the graphon; a single
//! persistence knob `d ∈ [0, 1)` sets
//! `q1(s) = m_s + d (1 - m_s)` and solves
//! `q0(s) = (m_s - q1(s) m_{s-1}) / (1 - m_{s-1})`, which keeps
//! `P(B_s = 1) = m_s` at every position by induction.

use std::sync::Arc;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{check_probability, sample_markov_chain, LATENT_STREAM};
use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::graph::{graph_from_chain, EdgeChain, Graph, Truth};
use crate::matrix::Matrix;
use crate::ordering::Ordering;
use crate::rng::{derive_seed, rng_from_seed};
use crate::scalar::Scalar;

/// Symmetric `f: [0,1]² → [0,1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphonFn<T> {
    Constant { value: T },
    /// Block-constant: `cuts` are increasing thresholds in `(0, 1)`
    /// splitting `[0, 1)` into `cuts.len() + 1` groups; `table` is the
    /// symmetric group-by-group value matrix.
    Block { cuts: Vec<T>, table: Vec<Vec<T>> },
    /// `scale · x · y`
    Product { scale: T },
    /// `near + (far - near) · |x - y|`
    Distance { near: T, far: T },
}

impl<T: Scalar> GraphonFn<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            GraphonFn::Constant { value } => check_probability("graphon value", *value),
            GraphonFn::Product { scale } => check_probability("graphon scale", *scale),
            GraphonFn::Distance { near, far } => {
                check_probability("graphon near value", *near)?;
                check_probability("graphon far value", *far)
            }
            GraphonFn::Block { cuts, table } => {
                let k = cuts.len() + 1;
                let increasing = cuts.windows(2).all(|w| w[0] < w[1]);
                let inside = cuts.iter().all(|&c| c > T::zero() && c < T::one());
                if !increasing || !inside {
                    return Err(Error::InvalidParameter(
                        "block graphon cuts must be strictly increasing inside (0, 1)".into(),
                    ));
                }
                if table.len() != k || table.iter().any(|r| r.len() != k) {
                    return Err(Error::InvalidParameter(format!(
                        "block graphon table must be {k} x {k}"
                    )));
                }
                for a in 0..k {
                    for b in 0..k {
                        check_probability("graphon block value", table[a][b])?;
                        if table[a][b] != table[b][a] {
                            return Err(Error::InvalidParameter("block graphon table is not symmetric".into()));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: T, y: T) -> T {
        match self {
            GraphonFn::Constant { value } => *value,
            GraphonFn::Product { scale } => *scale * x * y,
            GraphonFn::Distance { near, far } => *near + (*far - *near) * (x - y).abs(),
            GraphonFn::Block { cuts, table } => table[Self::group(cuts, x)][Self::group(cuts, y)],
        }
    }

    fn group(cuts: &[T], x: T) -> usize {
        cuts.iter().take_while(|&&c| x >= c).count()
    }

    /// Induced assignment for block graphons.
    pub fn assignment(&self, latent: &[T]) -> Option<CommunityAssignment> {
        match self {
            GraphonFn::Block { cuts, .. } => CommunityAssignment::new(
                latent.iter().map(|&x| Self::group(cuts, x)).collect(),
                cuts.len() + 1,
            )
            .ok(),
            GraphonFn::Constant { .. } => CommunityAssignment::new(vec![0; latent.len()], 1).ok(),
            _ => None,
        }
    }

    pub fn scaled(&self, rho: T) -> Self {
        match self {
            GraphonFn::Constant { value } => GraphonFn::Constant { value: *value * rho },
            GraphonFn::Product { scale } => GraphonFn::Product { scale: *scale * rho },
            GraphonFn::Distance { near, far } => GraphonFn::Distance {
                near: *near * rho,
                far: *far * rho,
            },
            GraphonFn::Block { cuts, table } => GraphonFn::Block {
                cuts: cuts.clone(),
                table: table.iter().map(|r| r.iter().map(|&v| v * rho).collect()).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GraphonSpec<T> {
    pub f: GraphonFn<T>,
    /// Hölder smoothness of `f`; metadata for the block-count rule.
    #[serde(default = "one")]
    pub alpha: T,
    /// Memory-1 persistence `d ∈ [0, 1)`; 0 gives conditionally independent
    /// edges.
    #[serde(default)]
    pub persistence: T,
    /// Injected latent positions `ξ_i`; sampled when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latent: Option<Vec<T>>,
}

fn one<T: Scalar>() -> T {
    T::one()
}

impl<T: Scalar> GraphonSpec<T> {
    pub fn new(f: GraphonFn<T>, persistence: T) -> Self {
        GraphonSpec {
            f,
            alpha: T::one(),
            persistence,
            latent: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.f.validate()?;
        if !(self.persistence >= T::zero() && self.persistence < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "persistence d = {} must lie in [0, 1)",
                self.persistence
            )));
        }
        if !(self.alpha > T::zero()) {
            return Err(Error::InvalidParameter("alpha must be positive".into()));
        }
        if let Some(xi) = &self.latent {
            if xi.iter().any(|&x| !(x >= T::zero() && x <= T::one())) {
                return Err(Error::InvalidParameter("latent positions must lie in [0, 1]".into()));
            }
        }
        Ok(())
    }

    /// Injected positions, or `n` uniforms from the latent stream of `seed`.
    pub fn latent_positions(&self, n: usize, seed: u64) -> Result<Vec<T>> {
        match &self.latent {
            Some(xi) if xi.len() == n => Ok(xi.clone()),
            Some(xi) => Err(Error::SizeMismatch {
                expected: n,
                actual: xi.len(),
            }),
            None => {
                let mut rng = rng_from_seed(derive_seed(seed, LATENT_STREAM));
                Ok((0..n).map(|_| T::of(rng.gen::<f64>())).collect())
            }
        }
    }

    pub fn theta(&self, latent: &[T]) -> Matrix<T> {
        Matrix::from_fn(latent.len(), |i, j| {
            if i == j {
                T::zero()
            } else {
                self.f.eval(latent[i], latent[j])
            }
        })
    }

    /// Samples the chain; returns it with the latent positions used.
    pub fn sample_chain(&self, ordering: &Ordering, seed: u64) -> Result<(EdgeChain, Vec<T>)> {
        self.validate()?;
        let latent = self.latent_positions(ordering.n(), seed)?;
        let marginals: Vec<f64> = ordering
            .pairs()
            .map(|(i, j)| self.f.eval(latent[i], latent[j]).f64())
            .collect();
        let kernels = persistence_schedule(&marginals, self.persistence.f64())?;
        let mut rng = rng_from_seed(seed);
        let first = marginals.first().copied().unwrap_or(0.0);
        let bits = sample_markov_chain(marginals.len(), first, |s| kernels[s], &mut rng);
        Ok((EdgeChain { bits }, latent))
    }
}

/// Per-position kernels `(q0, q1)` for marginals `m` and persistence `d`.
/// Entry 0 is unused (the first bit is drawn from its marginal).
pub fn persistence_schedule(marginals: &[f64], d: f64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(marginals.len());
    if let Some(&m) = marginals.first() {
        out.push((m, m));
    }
    for s in 1..marginals.len() {
        let (prev, m) = (marginals[s - 1], marginals[s]);
        if prev >= 1.0 {
            return Err(Error::DegenerateMarginal { position: s + 1 });
        }
        let q1 = m + d * (1.0 - m);
        let q0 = (m - q1 * prev) / (1.0 - prev);
        if !(-1e-12..=1.0 + 1e-12).contains(&q0) {
            let max_d = if m >= 1.0 || prev <= 0.0 {
                1.0
            } else {
                (m * (1.0 - prev) / ((1.0 - m) * prev)).min(1.0)
            };
            return Err(Error::InfeasiblePersistence {
                position: s + 1,
                requested: d,
                max_feasible: max_d,
            });
        }
        out.push((q0.clamp(0.0, 1.0), q1));
    }
    Ok(out)
}

/// Samples a composite graphon graph; truth carries `θ_ij = f(ξ_i, ξ_j)`.
pub fn gen_composite_graphon<T: Scalar>(
    n: usize,
    ordering: &Arc<Ordering>,
    spec: &GraphonSpec<T>,
    seed: u64,
) -> Result<Graph<T>> {
    let (chain, latent) = spec.sample_chain(ordering, seed)?;
    let mut g = graph_from_chain(&chain, ordering, n)?;
    g.ordering = Some(Arc::clone(ordering));
    g.truth = Some(Truth {
        assignment: spec.f.assignment(&latent),
        theta: Some(spec.theta(&latent)),
    });
    Ok(g)
}
