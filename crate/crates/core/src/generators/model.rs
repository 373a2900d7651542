//! Serializable model descriptions and their size-resolved forms.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    gen_composite_graphon, gen_csbm, gen_inhom, gen_mecltg, make_inhom_schedule, solve_csbm, CsbmParams,
    GraphonSpec, InhomSchedule, MecltgParams,
};
use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::graph::{EdgeChain, Graph};
use crate::ordering::Ordering;
use crate::scalar::Scalar;

/// MECLTG rates, either fixed (`p0`, `p1`) or scaled with `n`:
/// `lambda0`, `lambda1`, `c` give `p0 = λ0/n`, `p1 = 1 - λ1 n^(-c)`;
/// `lambda0`, `lambda1` with `log_scale` give `p_w = λ_w log(n)/n`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MecltgSpec<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<T>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub log_scale: bool,
}

impl<T: Scalar> MecltgSpec<T> {
    pub fn fixed(p0: T, p1: T) -> Self {
        MecltgSpec {
            p0: Some(p0),
            p1: Some(p1),
            ..Default::default()
        }
    }

    pub fn sparse(lambda0: T, lambda1: T, c: T) -> Self {
        MecltgSpec {
            lambda0: Some(lambda0),
            lambda1: Some(lambda1),
            c: Some(c),
            ..Default::default()
        }
    }

    pub fn connectivity(lambda0: T, lambda1: T) -> Self {
        MecltgSpec {
            lambda0: Some(lambda0),
            lambda1: Some(lambda1),
            log_scale: true,
            ..Default::default()
        }
    }

    pub fn resolve(&self, n: usize) -> Result<MecltgParams<T>> {
        match (self.p0, self.p1, self.lambda0, self.lambda1, self.c, self.log_scale) {
            (Some(p0), Some(p1), None, None, None, false) => MecltgParams::new(p0, p1),
            (None, None, Some(l0), Some(l1), None, true) => MecltgParams::connectivity(n, l0, l1),
            (None, None, Some(l0), Some(l1), Some(c), false) => MecltgParams::sparse(n, l0, l1, c),
            _ => Err(Error::InvalidParameter(
                "mecltg needs {p0, p1}, {lambda0, lambda1, c} or {lambda0, lambda1, log_scale: true}".into(),
            )),
        }
    }
}

/// Composite SBM inputs: `rho_diag` lists the zero-conditional
/// self-transition probability of each block pair in the order
/// `11, 12, ..., kk`; `rho_one[prev][cur]` is the full one-conditional
/// table. Groups are contiguous with sizes proportional to `proportions`
/// (equal by default).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CsbmSpec<T> {
    pub k: usize,
    pub rho_diag: Vec<T>,
    pub rho_one: Vec<Vec<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proportions: Option<Vec<f64>>,
}

/// Constant-marginal chain whose persistence pattern `q1` repeats
/// cyclically along the chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct InhomSpec<T> {
    pub target: T,
    pub q1: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
#[serde(bound = "T: Scalar")]
pub enum ModelSpec<T> {
    Mecltg(MecltgSpec<T>),
    Csbm(CsbmSpec<T>),
    Graphon(GraphonSpec<T>),
    Inhom(InhomSpec<T>),
    ErdosRenyi { p: T },
}

/// A model resolved for a fixed node count.
#[derive(Debug, Clone, PartialEq)]
pub enum Model<T> {
    Mecltg(MecltgParams<T>),
    Csbm {
        params: CsbmParams<T>,
        assignment: CommunityAssignment,
    },
    Graphon(GraphonSpec<T>),
    Inhom(InhomSchedule<T>),
    ErdosRenyi(T),
}

impl<T: Scalar> ModelSpec<T> {
    pub fn resolve(&self, n: usize) -> Result<Model<T>> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("models need n >= 2, got {n}")));
        }
        match self {
            ModelSpec::Mecltg(m) => Ok(Model::Mecltg(m.resolve(n)?)),
            ModelSpec::Csbm(c) => {
                let params = solve_csbm(c.k, &c.rho_diag, &c.rho_one)?;
                let assignment = match &c.proportions {
                    Some(w) if w.len() != c.k => {
                        return Err(Error::SizeMismatch {
                            expected: c.k,
                            actual: w.len(),
                        })
                    }
                    Some(w) => CommunityAssignment::proportional(n, w)?,
                    None => CommunityAssignment::balanced(n, c.k)?,
                };
                Ok(Model::Csbm { params, assignment })
            }
            ModelSpec::Graphon(g) => {
                g.validate()?;
                Ok(Model::Graphon(g.clone()))
            }
            ModelSpec::Inhom(s) => {
                if s.q1.is_empty() {
                    return Err(Error::Empty("inhom q1 pattern"));
                }
                let len = crate::ordering::pair_count(n);
                let q1 = s.q1.iter().copied().cycle().take(len).collect();
                Ok(Model::Inhom(make_inhom_schedule(s.target, q1)?))
            }
            ModelSpec::ErdosRenyi { p } => {
                super::check_probability("p", *p)?;
                Ok(Model::ErdosRenyi(*p))
            }
        }
    }
}

impl<T: Scalar> Model<T> {
    pub fn generate(&self, n: usize, ordering: &Arc<Ordering>, seed: u64) -> Result<Graph<T>> {
        match self {
            Model::Mecltg(p) => gen_mecltg(n, ordering, p, seed),
            Model::Csbm { params, assignment } => gen_csbm(n, ordering, params, assignment, seed),
            Model::Graphon(g) => gen_composite_graphon(n, ordering, g, seed),
            Model::Inhom(s) => gen_inhom(n, ordering, s, seed),
            Model::ErdosRenyi(p) => super::gen_erdos_renyi(n, ordering, *p, seed),
        }
    }

    /// The edge chain alone; identical to the chain of [`Model::generate`]
    /// for the same seed.
    pub fn sample_chain(&self, ordering: &Ordering, seed: u64) -> Result<EdgeChain> {
        match self {
            Model::Mecltg(p) => p.sample_chain(ordering.len(), seed),
            Model::Csbm { params, assignment } => params.sample_chain(ordering, assignment, seed),
            Model::Graphon(g) => g.sample_chain(ordering, seed).map(|(c, _)| c),
            Model::Inhom(s) => s.sample_chain(ordering.len(), seed),
            Model::ErdosRenyi(p) => MecltgParams::new(*p, *p)?.sample_chain(ordering.len(), seed),
        }
    }

    /// Marginal edge probability when it is the same for every pair.
    pub fn constant_marginal(&self) -> Option<T> {
        match self {
            Model::Mecltg(p) => p.stationary().ok(),
            Model::Inhom(s) => Some(s.target),
            Model::ErdosRenyi(p) => Some(*p),
            Model::Graphon(g) => match g.f {
                super::GraphonFn::Constant { value } => Some(value),
                _ => None,
            },
            Model::Csbm { params, .. } if params.k == 1 => Some(params.stationary[0]),
            Model::Csbm { .. } => None,
        }
    }
}

/// Multiplies every conditional success probability `P(B_s = 1 | ·)` by
/// `rho_n`, re-deriving dependent quantities so each model stays internally
/// consistent:
///
/// * MECLTG / Erdős–Rényi: `(p0, p1) → ρ (p0, p1)`.
/// * Composite SBM: the inputs `rho_diag`, `rho_one` are scaled and the
///   system re-solved.
/// * Graphon: `f → ρ f`; persistence is kept.
/// * Inhomogeneous chain: target and `q1` are scaled, `q0` re-derived.
pub fn apply_sparse_scaling<T: Scalar>(model: &Model<T>, rho_n: T) -> Result<Model<T>> {
    if !(rho_n > T::zero() && rho_n <= T::one()) {
        return Err(Error::InvalidParameter(format!("rho_n = {rho_n} must lie in (0, 1]")));
    }
    if rho_n == T::one() {
        return Ok(model.clone());
    }
    Ok(match model {
        Model::Mecltg(p) => Model::Mecltg(MecltgParams::new(p.p0 * rho_n, p.p1 * rho_n)?),
        Model::ErdosRenyi(p) => Model::ErdosRenyi(*p * rho_n),
        Model::Csbm { params, assignment } => {
            let diag: Vec<T> = params.rho_diag.iter().map(|&v| v * rho_n).collect();
            let one: Vec<Vec<T>> = params
                .rho_one
                .iter()
                .map(|r| r.iter().map(|&v| v * rho_n).collect())
                .collect();
            Model::Csbm {
                params: solve_csbm(params.k, &diag, &one)?,
                assignment: assignment.clone(),
            }
        }
        Model::Graphon(g) => Model::Graphon(GraphonSpec {
            f: g.f.scaled(rho_n),
            ..g.clone()
        }),
        Model::Inhom(s) => Model::Inhom(make_inhom_schedule(
            s.target * rho_n,
            s.q1.iter().map(|&q| q * rho_n).collect(),
        )?),
    })
}
