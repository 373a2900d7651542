//! Edge-chain generators.
//!
//! Every generator walks the latent order once, drawing one uniform
//! `u ∈ [0, 1)` per chain position from the stream seeded by `seed`; the
//! edge is present iff `u < P(B_s = 1 | B_{s-1})`. Latent node variables,
//! when a model has them, come from a separate stream
//! (`derive_seed(seed, LATENT_STREAM)`), so the chain draws of two models
//! with equal kernels coincide for equal seeds.

mod coupled;
mod csbm;
mod graphon;
mod inhom;
mod mecltg;
mod model;

pub use coupled::gen_coupled;
pub use csbm::{block_pair_count, block_pair_index, gen_csbm, solve_csbm, CsbmParams};
pub use graphon::{gen_composite_graphon, persistence_schedule, GraphonFn, GraphonSpec};
pub use inhom::{gen_inhom, make_inhom_schedule, InhomSchedule};
pub use mecltg::{gen_erdos_renyi, gen_mecltg, stationary_probability, MecltgParams};
pub use model::{apply_sparse_scaling, CsbmSpec, InhomSpec, MecltgSpec, Model, ModelSpec};

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

/// Stream index for latent node variables.
pub const LATENT_STREAM: u64 = 0x1A7E_17;

#[inline]
pub(crate) fn draw(rng: &mut Rng, p: f64) -> u8 {
    u8::from(rng.gen::<f64>() < p)
}

pub(crate) fn check_probability<T: Scalar>(name: &str, p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} = {p} is not a probability")))
    }
}

/// Memory-1 chain with per-position kernels. `first` is `P(B_1 = 1)`;
/// `kernel(s)` gives `(P(B_s=1|B_{s-1}=0), P(B_s=1|B_{s-1}=1))` for `s >= 1`.
pub(crate) fn sample_markov_chain(
    len: usize,
    first: f64,
    mut kernel: impl FnMut(usize) -> (f64, f64),
    rng: &mut Rng,
) -> Vec<u8> {
    let mut bits = Vec::with_capacity(len);
    if len == 0 {
        return bits;
    }
    let mut prev = draw(rng, first);
    bits.push(prev);
    for s in 1..len {
        let (q0, q1) = kernel(s);
        prev = draw(rng, if prev == 1 { q1 } else { q0 });
        bits.push(prev);
    }
    bits
}
