//! Adjacency storage, ordered edge chains, and the edge-list file format.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::assignment::CommunityAssignment;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ordering::{pair_count, Ordering};
use crate::scalar::Scalar;

/// Ordered edge variables `B_1..B_N` in chain order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeChain {
    pub bits: Vec<u8>,
}

impl EdgeChain {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }
}

/// Ground truth attached to simulated graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct Truth<T> {
    pub assignment: Option<CommunityAssignment>,
    /// Marginal edge probabilities `θ_ij` (zero diagonal).
    pub theta: Option<Matrix<T>>,
}

/// Symmetric, hollow, binary adjacency matrix.
#[derive(Debug, Clone)]
pub struct Graph<T = f64> {
    n: usize,
    adj: Vec<u8>,
    pub ordering: Option<Arc<Ordering>>,
    pub truth: Option<Truth<T>>,
}

impl<T> PartialEq for Graph<T> {
    /// Graphs compare by adjacency only.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl<T: Scalar> Graph<T> {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![0; n * n],
            ordering: None,
            truth: None,
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Builds from 0-based edges; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({}, {}) invalid for n = {n}",
                    i + 1,
                    j + 1
                )));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] != 0
    }

    #[inline]
    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.adj[i * self.n + j] = 1;
        self.adj[j * self.n + i] = 1;
    }

    #[inline]
    fn set_pair(&mut self, i: usize, j: usize, bit: u8) {
        self.adj[i * self.n + j] = bit;
        self.adj[j * self.n + i] = bit;
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| self.adj[i * self.n..(i + 1) * self.n].iter().map(|&b| b as usize).sum())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[i * self.n..(i + 1) * self.n];
        row.iter().enumerate().filter(|(_, &b)| b != 0).map(|(j, _)| j)
    }

    pub fn adjacency(&self) -> Matrix<T> {
        Matrix::from_fn(self.n, |i, j| {
            if self.has_edge(i, j) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    pub fn theta(&self) -> Option<&Matrix<T>> {
        self.truth.as_ref().and_then(|t| t.theta.as_ref())
    }

    pub fn assignment(&self) -> Option<&CommunityAssignment> {
        self.truth.as_ref().and_then(|t| t.assignment.as_ref())
    }

    /// Reads the edge-list format: `n <count>` then `<i> <j>` lines,
    /// 1-based. Blank lines and `#` comments are ignored.
    pub fn read_edge_list(reader: impl BufRead) -> Result<Self> {
        let mut graph: Option<Self> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let bad = |msg: String| Error::Parse { line: lineno, msg };
            match &mut graph {
                None => {
                    if toks.len() != 2 || toks[0] != "n" {
                        return Err(bad(format!("expected header `n <count>`, got `{body}`")));
                    }
                    let n: usize = toks[1]
                        .parse()
                        .map_err(|_| bad(format!("bad node count `{}`", toks[1])))?;
                    graph = Some(Self::empty(n));
                }
                Some(g) => {
                    if toks.len() != 2 {
                        return Err(bad(format!("expected `<i> <j>`, got `{body}`")));
                    }
                    let parse = |t: &str| -> Result<usize> {
                        t.parse::<usize>()
                            .ok()
                            .filter(|&v| v >= 1 && v <= g.n)
                            .ok_or_else(|| bad(format!("node `{t}` outside 1..={}", g.n)))
                    };
                    let (i, j) = (parse(toks[0])?, parse(toks[1])?);
                    if i == j {
                        return Err(bad(format!("self-loop on node {i}")));
                    }
                    if g.has_edge(i - 1, j - 1) {
                        return Err(bad(format!("duplicate edge {i} {j}")));
                    }
                    g.add_edge(i - 1, j - 1);
                }
            }
        }
        graph.ok_or(Error::Empty("edge list has no `n <count>` header"))
    }

    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "n {}", self.n)?;
        for (i, j) in self.edges() {
            writeln!(w, "{} {}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// Reads the graph's edges in chain order.
pub fn chain_from_graph<T: Scalar>(graph: &Graph<T>, ordering: &Ordering) -> Result<EdgeChain> {
    if ordering.n() != graph.n() {
        return Err(Error::SizeMismatch {
            expected: graph.n(),
            actual: ordering.n(),
        });
    }
    let bits = ordering
        .pairs()
        .map(|(i, j)| u8::from(graph.has_edge(i, j)))
        .collect();
    Ok(EdgeChain { bits })
}

/// Places chain bits onto node pairs through `ordering`.
pub fn graph_from_chain<T: Scalar>(chain: &EdgeChain, ordering: &Ordering, n: usize) -> Result<Graph<T>> {
    if ordering.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: ordering.n(),
        });
    }
    if chain.len() != pair_count(n) {
        return Err(Error::SizeMismatch {
            expected: pair_count(n),
            actual: chain.len(),
        });
    }
    let mut g = Graph::empty(n);
    for (s, (i, j)) in ordering.pairs().enumerate() {
        g.set_pair(i, j, chain.bits[s]);
    }
    Ok(g)
}

/// Node degrees straight from a chain, without a dense adjacency matrix.
pub fn degrees_from_chain(chain: &EdgeChain, ordering: &Ordering) -> Result<Vec<usize>> {
    if chain.len() != ordering.len() {
        return Err(Error::SizeMismatch {
            expected: ordering.len(),
            actual: chain.len(),
        });
    }
    let mut deg = vec![0usize; ordering.n()];
    for (s, (i, j)) in ordering.pairs().enumerate() {
        if chain.bits[s] != 0 {
            deg[i] += 1;
            deg[j] += 1;
        }
    }
    Ok(deg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordering::OrderingKind;

    type G = Graph<f64>;

    #[test]
    fn single_edge_chain() {
        let g = G::from_edges(3, &[(0, 1)]).unwrap();
        let o = Ordering::new(OrderingKind::Omega1, 3).unwrap();
        assert_eq!(chain_from_graph(&g, &o).unwrap().bits, vec![1, 0, 0]);
    }

    #[test]
    fn empty_and_complete_chains() {
        let o = Ordering::new(OrderingKind::Omega2, 4).unwrap();
        assert_eq!(chain_from_graph(&G::empty(4), &o).unwrap().bits, vec![0; 6]);
        for kind in [OrderingKind::Omega1, OrderingKind::Pa, OrderingKind::Random(5)] {
            let o = Ordering::new(kind, 3).unwrap();
            assert_eq!(chain_from_graph(&G::complete(3), &o).unwrap().bits, vec![1, 1, 1]);
        }
    }

    #[test]
    fn size_mismatches() {
        let o = Ordering::new(OrderingKind::Omega1, 4).unwrap();
        assert!(chain_from_graph(&G::empty(3), &o).is_err());
        let short = EdgeChain { bits: vec![0; 5] };
        assert!(graph_from_chain::<f64>(&short, &o, 4).is_err());
        assert!(graph_from_chain::<f64>(&EdgeChain { bits: vec![0; 6] }, &o, 5).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = G::from_edges(5, &[(3, 1), (0, 4), (0, 1)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "n 5\n1 2\n1 5\n2 4\n");
        let back = G::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edge_list_comments_and_errors() {
        let txt = "# header\n\nn 3\n1 2 # first\n\n2 3\n";
        let g = G::read_edge_list(txt.as_bytes()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(G::read_edge_list("n 3\n1 1\n".as_bytes()).is_err());
        assert!(G::read_edge_list("n 3\n1 4\n".as_bytes()).is_err());
        assert!(G::read_edge_list("n 3\n1 2\n2 1\n".as_bytes()).is_err());
        assert!(G::read_edge_list("1 2\n".as_bytes()).is_err());
        assert!(G::read_edge_list("".as_bytes()).is_err());
    }

    #[test]
    fn degrees_agree_with_adjacency() {
        let o = Ordering::new(OrderingKind::Omega2, 6).unwrap();
        let chain = EdgeChain {
            bits: (0..15).map(|s| (s % 3 == 0) as u8).collect(),
        };
        let g: G = graph_from_chain(&chain, &o, 6).unwrap();
        assert_eq!(degrees_from_chain(&chain, &o).unwrap(), g.degrees());
    }
}
