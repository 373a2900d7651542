//! Node-to-group maps (ground truth and estimates).
//!
//! Group labels are 0-based in memory and 1-based in every file format.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CommunityAssignment {
    k: usize,
    labels: Vec<usize>,
}

impl CommunityAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&g| g >= k) {
            return Err(Error::InvalidParameter(format!(
                "group label {} outside [1, {k}]",
                bad + 1
            )));
        }
        Ok(CommunityAssignment { k, labels })
    }

    /// Contiguous blocks: the first `sizes[0]` nodes in group 1, and so on.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let labels = sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
            .collect();
        Self::new(labels, sizes.len())
    }

    /// Splits `n` nodes into `k` contiguous groups of near-equal size;
    /// earlier groups receive the remainder.
    pub fn balanced(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("cannot split {n} nodes into {k} groups")));
        }
        let sizes: Vec<usize> = (0..k).map(|g| n / k + usize::from(g < n % k)).collect();
        Self::contiguous(&sizes)
    }

    /// Contiguous groups proportional to `weights` (largest-remainder
    /// rounding, ties to the lower group index).
    pub fn proportional(n: usize, weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("group proportions must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        let exact: Vec<f64> = weights.iter().map(|w| w / total * n as f64).collect();
        let mut sizes: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let mut rem: Vec<(usize, f64)> = exact.iter().enumerate().map(|(g, x)| (g, x - x.floor())).collect();
        rem.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let missing = n - sizes.iter().sum::<usize>();
        for &(g, _) in rem.iter().take(missing) {
            sizes[g] += 1;
        }
        Self::contiguous(&sizes)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn label(&self, node: usize) -> usize {
        self.labels[node]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn labels_one_based(&self) -> Vec<usize> {
        self.labels.iter().map(|g| g + 1).collect()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &g in &self.labels {
            sizes[g] += 1;
        }
        sizes
    }

    pub fn members(&self, group: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.labels[i] == group).collect()
    }

    pub fn all_groups_nonempty(&self) -> bool {
        self.group_sizes().iter().all(|&s| s > 0)
    }

    /// Applies `perm[old] = new` to every label.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        Self::new(self.labels.iter().map(|&g| perm[g]).collect(), self.k)
    }

    /// Reads `node group` lines (1-based); `#` comments and blank lines are
    /// skipped. Every node 1..=n must appear exactly once.
    pub fn read(reader: impl BufRead) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut it = body.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.and_then(|t| t.parse::<usize>().ok())
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected `node group` with 1-based integers, got `{body}`"),
                    })
            };
            let node = parse(it.next())?;
            let group = parse(it.next())?;
            pairs.push((node - 1, group - 1));
        }
        let n = pairs.len();
        let mut labels = vec![usize::MAX; n];
        for &(node, group) in &pairs {
            if node >= n || labels[node] != usize::MAX {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("node {} missing, repeated or out of range", node + 1),
                });
            }
            labels[node] = group;
        }
        let k = labels.iter().copied().max().map_or(1, |g| g + 1);
        Self::new(labels, k)
    }

    pub fn write(&self, mut w: impl Write) -> Result<()> {
        for (i, g) in self.labels.iter().enumerate() {
            writeln!(w, "{} {}", i + 1, g + 1)?;
        }
        Ok(())
    }
}
