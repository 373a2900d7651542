use std::sync::Arc;

use rand::Rng as _;

use super::{check_probability, MecltgParams};
use crate::error::Result;
use crate::graph::{graph_from_chain, EdgeChain, Graph};
use crate::ordering::Ordering;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;

/// Generates an Erdős–Rényi graph `G(n, p_a)` and a first-order MECLTG from
/// the same uniforms: at each chain position one `u` decides both edges by
/// thresholding at `p_a` and at the MECLTG kernel. If `p_a >= max(p0, p1)`
/// every MECLTG edge is also an SRG edge; if `p_a <= min(p0, p1)` the
/// inclusion is reversed.
pub fn gen_coupled<T: Scalar>(
    n: usize,
    ordering: &Arc<Ordering>,
    p0: T,
    p1: T,
    p_a: T,
    seed: u64,
) -> Result<(Graph<T>, Graph<T>)> {
    let params = MecltgParams::new(p0, p1)?;
    check_probability("p_a", p_a)?;
    let p = params.stationary()?.f64();
    let (p0, p1, pa) = (p0.f64(), p1.f64(), p_a.f64());
    let len = ordering.len();
    let mut rng = rng_from_seed(seed);
    let mut srg = Vec::with_capacity(len);
    let mut chain = Vec::with_capacity(len);
    let mut prev = 0u8;
    for s in 0..len {
        let u: f64 = rng.gen();
        let threshold = if s == 0 {
            p
        } else if prev == 1 {
            p1
        } else {
            p0
        };
        srg.push(u8::from(u < pa));
        prev = u8::from(u < threshold);
        chain.push(prev);
    }
    let mut a = graph_from_chain(&EdgeChain { bits: srg }, ordering, n)?;
    let mut b = graph_from_chain(&EdgeChain { bits: chain }, ordering, n)?;
    a.ordering = Some(Arc::clone(ordering));
    b.ordering = Some(Arc::clone(ordering));
    Ok((a, b))
}
