//! Latent orderings: bijections between unordered node pairs and chain
//! positions.
//!
//! Nodes and positions are 0-based internally. The closed forms below are
//! the 1-based ones shifted by one.

use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Number of unordered pairs of `n` nodes.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major rank of the pair `(i, j)`, `i < j`, 0-based. This is the
/// omega1 position.
#[inline]
pub fn row_major_rank(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    n * i - i * (i + 1) / 2 + (j - i - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderingKind {
    /// Row by row: all pairs containing node 1, then node 2, ...
    Omega1,
    /// Diagonal by diagonal: increasing `j - i`, then increasing `i`.
    Omega2,
    /// Preferential-attachment arrival order: pairs grouped by the larger
    /// node.
    Pa,
    /// Seeded Fisher–Yates shuffle of the omega1 enumeration.
    Random(u64),
    /// Caller-supplied.
    Explicit,
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingKind::Omega1 => write!(f, "omega1"),
            OrderingKind::Omega2 => write!(f, "omega2"),
            OrderingKind::Pa => write!(f, "pa"),
            OrderingKind::Random(s) => write!(f, "random:{s}"),
            OrderingKind::Explicit => write!(f, "explicit"),
        }
    }
}

impl FromStr for OrderingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "omega1" | "w1" => Ok(OrderingKind::Omega1),
            "omega2" | "w2" => Ok(OrderingKind::Omega2),
            "pa" => Ok(OrderingKind::Pa),
            "explicit" => Ok(OrderingKind::Explicit),
            other => match other.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(OrderingKind::Random)
                    .map_err(|_| Error::InvalidParameter(format!("bad random seed `{seed}`"))),
                None => Err(Error::InvalidParameter(format!(
                    "unknown ordering `{s}` (expected omega1, omega2, pa, random:<seed>)"
                ))),
            },
        }
    }
}

impl Serialize for OrderingKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OrderingKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A validated latent order `ω` on the pairs of `n` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordering {
    n: usize,
    kind: OrderingKind,
    // indexed by row-major rank
    forward: Vec<u32>,
    // indexed by chain position
    inverse: Vec<(u32, u32)>,
}

impl Ordering {
    /// Builds one of the named orderings. `Random` carries its own seed;
    /// `Explicit` must go through [`Ordering::from_pairs`].
    pub fn new(kind: OrderingKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("ordering needs n >= 2, got {n}")));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidSize(format!("n = {n} is too large")));
        }
        let big_n = pair_count(n);
        let mut inverse = Vec::with_capacity(big_n);
        match kind {
            OrderingKind::Omega1 => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        inverse.push((i as u32, j as u32));
                    }
                }
            }
            OrderingKind::Omega2 => {
                for gap in 1..n {
                    for i in 0..(n - gap) {
                        inverse.push((i as u32, (i + gap) as u32));
                    }
                }
            }
            OrderingKind::Pa => {
                for j in 1..n {
                    for i in 0..j {
                        inverse.push((i as u32, j as u32));
                    }
                }
            }
            OrderingKind::Random(seed) => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        inverse.push((i as u32, j as u32));
                    }
                }
                let mut rng = rng_from_seed(seed);
                for s in (1..big_n).rev() {
                    let t = rng.gen_range(0..=s);
                    inverse.swap(s, t);
                }
            }
            OrderingKind::Explicit => {
                return Err(Error::InvalidParameter(
                    "explicit orderings are built with Ordering::from_pairs".into(),
                ))
            }
        }
        Self::from_inverse(n, kind, inverse)
    }

    /// Explicit ordering from 0-based pairs listed in chain order.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("ordering needs n >= 2, got {n}")));
        }
        let inverse = pairs
            .iter()
            .map(|&(a, b)| (a.min(b) as u32, a.max(b) as u32))
            .collect();
        Self::from_inverse(n, OrderingKind::Explicit, inverse)
    }

    fn from_inverse(n: usize, kind: OrderingKind, inverse: Vec<(u32, u32)>) -> Result<Self> {
        let big_n = pair_count(n);
        if inverse.len() != big_n {
            return Err(Error::SizeMismatch {
                expected: big_n,
                actual: inverse.len(),
            });
        }
        let mut forward = vec![u32::MAX; big_n];
        for (s, &(i, j)) in inverse.iter().enumerate() {
            let (i, j) = (i as usize, j as usize);
            if i >= j || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "pair ({}, {}) is not a valid unordered pair of {n} nodes",
                    i + 1,
                    j + 1
                )));
            }
            let r = row_major_rank(n, i, j);
            if forward[r] != u32::MAX {
                return Err(Error::InvalidParameter(format!(
                    "pair ({}, {}) appears twice",
                    i + 1,
                    j + 1
                )));
            }
            forward[r] = s as u32;
        }
        Ok(Ordering {
            n,
            kind,
            forward,
            inverse,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn kind(&self) -> OrderingKind {
        self.kind
    }

    /// Chain length `N = n(n-1)/2`.
    #[inline]
    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    /// Chain position (0-based) of the unordered pair `{i, j}`.
    #[inline]
    pub fn position(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.forward[row_major_rank(self.n, a, b)] as usize
    }

    /// Pair `(i, j)` with `i < j` at chain position `s` (0-based).
    #[inline]
    pub fn pair(&self, s: usize) -> (usize, usize) {
        let (i, j) = self.inverse[s];
        (i as usize, j as usize)
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.inverse.iter().map(|&(i, j)| (i as usize, j as usize))
    }
}

/// 1-based closed forms, kept for documentation and cross-checking.
pub mod closed_form {
    /// `n(i-1) - i(i-1)/2 + j - i` for `1 <= i < j <= n`.
    pub fn omega1(n: usize, i: usize, j: usize) -> usize {
        n * (i - 1) - i * (i - 1) / 2 + j - i
    }

    /// `i + (2n - (j-i)) (j-i-1) / 2`.
    pub fn omega2(n: usize, i: usize, j: usize) -> usize {
        let g = j - i;
        i + (2 * n - g) * (g - 1) / 2
    }

    /// `(j-1)(j-2)/2 + i`.
    pub fn pa(i: usize, j: usize) -> usize {
        (j - 1) * (j - 2) / 2 + i
    }
}
