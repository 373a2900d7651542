//! Spectral clustering on the normalized Laplacian.

mod eigen;
mod kmeans;
mod laplacian;

pub use eigen::{symmetric_eigen, top_k_eigvecs, EigenPairs};
pub use kmeans::{kmeans, KMeansResult};
pub use laplacian::{laplacian, laplacian_discrepancy, laplacian_pair, Laplacian, LaplacianPair};

use serde::{Deserialize, Serialize};

use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// k-means restarts used by [`spectral_cluster`].
pub const KMEANS_RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult<T> {
    pub assignment: CommunityAssignment,
    /// Centroids in the `k`-dimensional eigenvector embedding.
    pub centroids: Vec<Vec<T>>,
    /// Eigenvalues behind the embedding, `|λ|` descending.
    pub eigenvalues: Vec<T>,
    /// Zero-degree nodes, placed post hoc in the largest cluster.
    pub isolated: Vec<usize>,
    pub misclustered: Option<usize>,
    /// Largest estimated group size `P_n`.
    pub max_group_size: usize,
}

/// Clusters the nodes of a symmetric non-negative matrix (an adjacency
/// matrix or a population `θ`): Laplacian, top-`k` eigenvectors by `|λ|`,
/// then k-means on the rows of the eigenvector matrix.
pub fn spectral_cluster_matrix<T: Scalar>(m: &Matrix<T>, k: usize, seed: u64) -> Result<ClusterResult<T>> {
    let lap = laplacian(m)?;
    let kept = lap.kept.len();
    if k == 0 || k > kept {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the {kept} nodes with positive degree"
        )));
    }
    let eig = top_k_eigvecs(&lap.matrix, k)?;
    let rows: Vec<Vec<T>> = (0..kept).map(|r| eig.vectors.iter().map(|v| v[r]).collect()).collect();
    let km = kmeans(&rows, k, KMEANS_RESTARTS, seed)?;

    let mut sizes = vec![0usize; k];
    km.labels.iter().for_each(|&c| sizes[c] += 1);
    let largest = (0..k).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
    let mut labels = vec![largest; m.n()];
    for (r, &node) in lap.kept.iter().enumerate() {
        labels[node] = km.labels[r];
    }
    let assignment = CommunityAssignment::new(labels, k)?;
    let max_group_size = assignment.group_sizes().into_iter().max().unwrap_or(0);
    Ok(ClusterResult {
        assignment,
        centroids: km.centroids,
        eigenvalues: eig.values,
        isolated: lap.isolated,
        misclustered: None,
        max_group_size,
    })
}

/// Spectral clustering of a graph; when the graph carries a ground-truth
/// assignment the mis-clustered count is filled in.
pub fn spectral_cluster<T: Scalar>(graph: &Graph<T>, k: usize, seed: u64) -> Result<ClusterResult<T>> {
    let mut res = spectral_cluster_matrix(&graph.adjacency(), k, seed)?;
    if let Some(truth) = graph.assignment() {
        res.misclustered = Some(misclustered_count(&res.assignment, truth)?);
    }
    Ok(res)
}

/// Largest `k` for which [`misclustered_count`] enumerates permutations.
pub const MAX_PERMUTATION_GROUPS: usize = 8;

/// Minimum over label permutations of the Hamming distance between two
/// assignments.
pub fn misclustered_count(z_hat: &CommunityAssignment, z_star: &CommunityAssignment) -> Result<usize> {
    let n = z_star.n();
    if z_hat.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: z_hat.n(),
        });
    }
    let k = z_hat.k().max(z_star.k());
    if k > MAX_PERMUTATION_GROUPS {
        return Err(Error::TooLarge(format!(
            "{k} groups; permutation matching is limited to {MAX_PERMUTATION_GROUPS}"
        )));
    }
    let mut confusion = vec![vec![0usize; k]; k];
    for i in 0..n {
        confusion[z_hat.label(i)][z_star.label(i)] += 1;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    permute(&mut perm, 0, &mut |p| {
        let agree: usize = (0..k).map(|a| confusion[a][p[a]]).sum();
        best = best.max(agree);
    });
    Ok(n - best)
}

fn permute(p: &mut [usize], start: usize, visit: &mut impl FnMut(&[usize])) {
    if start == p.len() {
        visit(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute(p, start + 1, visit);
        p.swap(start, i);
    }
}
