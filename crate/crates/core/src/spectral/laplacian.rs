use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Normalized Laplacian `D^{-1/2} M D^{-1/2}` on the nodes of positive
/// degree. `kept[r]` is the original node of row `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Laplacian<T> {
    pub matrix: Matrix<T>,
    pub kept: Vec<usize>,
    pub isolated: Vec<usize>,
    /// Row sums of the input, one per original node.
    pub degrees: Vec<T>,
}

pub fn laplacian<T: Scalar>(m: &Matrix<T>) -> Result<Laplacian<T>> {
    let degrees = m.row_sums();
    let (kept, isolated): (Vec<usize>, Vec<usize>) = (0..m.n()).partition(|&i| degrees[i] > T::zero());
    if kept.is_empty() {
        return Err(Error::EmptyLaplacian);
    }
    let inv_sqrt: Vec<T> = kept.iter().map(|&i| T::one() / degrees[i].sqrt()).collect();
    let matrix = Matrix::from_fn(kept.len(), |a, b| m.get(kept[a], kept[b]) * inv_sqrt[a] * inv_sqrt[b]);
    Ok(Laplacian {
        matrix,
        kept,
        isolated,
        degrees,
    })
}

/// Sample Laplacian of `A` with, when `θ` is known, the population
/// Laplacian restricted to the same node set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplacianPair<T> {
    pub sample: Laplacian<T>,
    pub population: Option<Matrix<T>>,
    /// `τ_n = min_i D̄_ii / n`
    pub tau: Option<T>,
}

pub fn laplacian_pair<T: Scalar>(a: &Matrix<T>, theta: Option<&Matrix<T>>) -> Result<LaplacianPair<T>> {
    let sample = laplacian(a)?;
    let (population, tau) = match theta {
        None => (None, None),
        Some(th) => {
            if th.n() != a.n() {
                return Err(Error::SizeMismatch {
                    expected: a.n(),
                    actual: th.n(),
                });
            }
            let pop = laplacian(th)?;
            let tau = pop.degrees.iter().copied().fold(T::infinity(), T::min) / T::of_usize(th.n());
            // rows of pop.matrix are indexed by pop.kept; map sample nodes
            // onto them (nodes with zero population degree get zero rows)
            let mut row_of = vec![usize::MAX; th.n()];
            for (r, &i) in pop.kept.iter().enumerate() {
                row_of[i] = r;
            }
            let keep = &sample.kept;
            let restricted = Matrix::from_fn(keep.len(), |x, y| {
                let (rx, ry) = (row_of[keep[x]], row_of[keep[y]]);
                if rx == usize::MAX || ry == usize::MAX {
                    T::zero()
                } else {
                    pop.matrix.get(rx, ry)
                }
            });
            (Some(restricted), Some(tau))
        }
    };
    Ok(LaplacianPair {
        sample,
        population,
        tau,
    })
}

/// `‖L L - L̄ L̄‖_F`.
pub fn laplacian_discrepancy<T: Scalar>(l: &Matrix<T>, l_bar: &Matrix<T>) -> Result<T> {
    if l.n() != l_bar.n() {
        return Err(Error::SizeMismatch {
            expected: l.n(),
            actual: l_bar.n(),
        });
    }
    Ok(l.matmul(l)?.sub(&l_bar.matmul(l_bar)?)?.frobenius())
}

impl<T: Scalar> LaplacianPair<T> {
    /// `(‖LL - L̄L̄‖_F, τ_n)` when the population side is known.
    pub fn discrepancy(&self) -> Result<Option<(T, T)>> {
        match (&self.population, self.tau) {
            (Some(pop), Some(tau)) => Ok(Some((laplacian_discrepancy(&self.sample.matrix, pop)?, tau))),
            _ => Ok(None),
        }
    }
}
