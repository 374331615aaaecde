//! Simple undirected graphs over dense vertex ids `0..n`.
//!
//! A [`Graph`] is immutable once built. Sparse graphs keep sorted adjacency
//! lists plus a hashed edge index; once `m > n²/8` the graph switches to a
//! packed bit matrix, which is what the reduction gadgets end up using.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitMatrix, Ones};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("endpoint out of range in pair ({u}, {v}); graph has {n} vertices")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range; graph has {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {0} listed twice in subset")]
    DuplicateVertex(usize),
    #[error("ordering is not a permutation of 0..{n}: {reason}")]
    NotPermutation { n: usize, reason: String },
}

/// Normalizes an unordered pair to `(min, max)`.
#[inline]
pub fn ordered(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A set of distinct unordered vertex pairs, stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(usize, usize)>", try_from = "Vec<(usize, usize)>")]
pub struct EdgeSet(BTreeSet<(usize, usize)>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    /// Collects pairs in either orientation; duplicates collapse, self-pairs are rejected.
    pub fn from_pairs<I>(pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in pairs {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert(ordered(u, v));
        }
        Ok(EdgeSet(set))
    }

    /// Inserts a pair; returns `false` if it was already present.
    ///
    /// Panics on a self-pair.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-pair in EdgeSet");
        self.0.insert(ordered(u, v))
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.0.contains(&ordered(u, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = (usize, usize)>) {
        for (u, v) in other {
            self.insert(u, v);
        }
    }

    /// Largest endpoint plus one, or zero when empty.
    pub fn vertex_bound(&self) -> usize {
        self.0.iter().map(|&(_, v)| v + 1).max().unwrap_or(0)
    }

    pub fn check_range(&self, n: usize) -> Result<(), GraphError> {
        match self.0.iter().find(|&&(_, v)| v >= n) {
            Some(&(u, v)) => Err(GraphError::OutOfRange { u, v, n }),
            None => Ok(()),
        }
    }
}

impl From<EdgeSet> for Vec<(usize, usize)> {
    fn from(set: EdgeSet) -> Self {
        set.0.into_iter().collect()
    }
}

impl TryFrom<Vec<(usize, usize)>> for EdgeSet {
    type Error = GraphError;

    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self, Self::Error> {
        EdgeSet::from_pairs(pairs)
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    /// Panics on self-pairs; use [`EdgeSet::from_pairs`] for untrusted input.
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        let mut set = EdgeSet::new();
        set.extend(iter);
        set
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = (usize, usize);
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, (usize, usize)>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

#[derive(Clone)]
enum Adjacency {
    Sparse {
        lists: Vec<Vec<usize>>,
        index: HashSet<(usize, usize)>,
    },
    Dense {
        rows: BitMatrix,
        degrees: Vec<usize>,
    },
}

/// Simple undirected graph with vertices `0..vertex_count`.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Adjacency,
}

/// Whether an edge count on `n` vertices selects the bit-matrix representation.
pub fn prefers_dense(n: usize, m: usize) -> bool {
    m > n * n / 8
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate pairs (in either orientation) collapse.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::OutOfRange { u, v, n: vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push(ordered(u, v));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_pairs(vertex_count, pairs))
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_sorted_pairs(vertex_count, Vec::new())
    }

    /// `pairs` must be sorted, deduplicated, normalized and in range.
    pub(crate) fn from_sorted_pairs(n: usize, pairs: Vec<(usize, usize)>) -> Self {
        let m = pairs.len();
        if prefers_dense(n, m) {
            let mut rows = BitMatrix::new(n);
            for &(u, v) in &pairs {
                rows.set_sym(u, v);
            }
            return Self::from_bit_matrix(rows);
        }
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            lists[u].push(v);
            lists[v].push(u);
        }
        for list in &mut lists {
            list.sort_unstable();
        }
        Graph {
            n,
            m,
            adj: Adjacency::Sparse {
                lists,
                index: pairs.into_iter().collect(),
            },
        }
    }

    /// Wraps a symmetric, irreflexive bit matrix. Always uses the dense representation.
    pub(crate) fn from_bit_matrix(rows: BitMatrix) -> Self {
        let n = rows.dim();
        let degrees: Vec<usize> = (0..n).map(|v| rows.row_count(v)).collect();
        debug_assert!((0..n).all(|v| !rows.get(v, v)));
        let m = degrees.iter().sum::<usize>() / 2;
        Graph {
            n,
            m,
            adj: Adjacency::Dense { rows, degrees },
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.adj, Adjacency::Dense { .. })
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        match &self.adj {
            Adjacency::Sparse { index, .. } => index.contains(&ordered(u, v)),
            Adjacency::Dense { rows, .. } => rows.get(u, v),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        match &self.adj {
            Adjacency::Sparse { lists, .. } => lists[v].len(),
            Adjacency::Dense { degrees, .. } => degrees[v],
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        match &self.adj {
            Adjacency::Sparse { lists, .. } => Neighbors::Sparse(lists[v].iter()),
            Adjacency::Dense { rows, .. } => Neighbors::Dense(rows.ones(v)),
        }
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    /// Copies the adjacency into a fresh bit matrix.
    pub fn to_bit_matrix(&self) -> BitMatrix {
        match &self.adj {
            Adjacency::Dense { rows, .. } => rows.clone(),
            Adjacency::Sparse { .. } => {
                let mut rows = BitMatrix::new(self.n);
                for (u, v) in self.edges() {
                    rows.set_sym(u, v);
                }
                rows
            }
        }
    }

    /// `G + extra`: a new graph with the union of edge sets.
    pub fn add_edges(&self, extra: &EdgeSet) -> Result<Graph, GraphError> {
        extra.check_range(self.n)?;
        if extra.is_empty() {
            return Ok(self.clone());
        }
        let m_upper = self.m + extra.len();
        if self.is_dense() || prefers_dense(self.n, m_upper) {
            let mut rows = self.to_bit_matrix();
            for (u, v) in extra {
                rows.set_sym(u, v);
            }
            let g = Self::from_bit_matrix(rows);
            if prefers_dense(g.n, g.m) {
                return Ok(g);
            }
            return Ok(Self::from_sorted_pairs(g.n, g.edges().collect()));
        }
        let mut pairs: Vec<_> = self.edges().chain(extra.iter()).collect();
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_pairs(self.n, pairs))
    }

    fn check_subset(&self, subset: &[usize]) -> Result<(), GraphError> {
        let mut seen = vec![false; self.n];
        for &v in subset {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        Ok(())
    }

    /// `G[subset]` relabeled to `0..subset.len()`; the returned map sends new ids to old ones.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_subset(subset)?;
        let mut pairs = Vec::new();
        for (i, &u) in subset.iter().enumerate() {
            for (j, &v) in subset.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_unstable();
        Ok((Self::from_sorted_pairs(subset.len(), pairs), subset.to_vec()))
    }

    /// Unordered pairs inside `subset` that are not edges.
    pub fn non_edges_within(&self, subset: &[usize]) -> Result<EdgeSet, GraphError> {
        self.check_subset(subset)?;
        let mut out = EdgeSet::new();
        for (i, &u) in subset.iter().enumerate() {
            for &v in &subset[i + 1..] {
                if !self.has_edge(u, v) {
                    out.insert(u, v);
                }
            }
        }
        Ok(out)
    }

    pub fn complement(&self) -> Graph {
        let all: Vec<usize> = (0..self.n).collect();
        let missing = self.non_edges_within(&all).expect("full vertex range is valid");
        Self::from_sorted_pairs(self.n, missing.iter().collect())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.edges().all(|(u, v)| other.has_edge(u, v))
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("dense", &self.is_dense())
            .finish()
    }
}

pub enum Neighbors<'a> {
    Sparse(std::slice::Iter<'a, usize>),
    Dense(Ones<'a>),
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::Sparse(it) => it.next().copied(),
            Neighbors::Dense(it) => it.next(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c4() -> Graph {
        Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn build_cycle_and_empty() {
        let g = c4();
        assert_eq!(g.edge_count(), 4);
        assert!(g.has_edge(3, 0) && g.has_edge(0, 3));
        assert!(!g.has_edge(0, 2));
        assert_eq!(Graph::new(3, []).unwrap().edge_count(), 0);
    }

    #[test]
    fn build_collapses_duplicates() {
        let g = Graph::new(5, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        let g = Graph::new(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn build_rejects_bad_pairs() {
        assert_eq!(
            Graph::new(3, [(0, 3)]).unwrap_err(),
            GraphError::OutOfRange { u: 0, v: 3, n: 3 }
        );
        assert_eq!(Graph::new(3, [(1, 1)]).unwrap_err(), GraphError::SelfLoop(1));
    }

    #[test]
    fn add_edges_examples() {
        let g = c4();
        let h = g.add_edges(&EdgeSet::from_pairs([(0, 2)]).unwrap()).unwrap();
        assert_eq!(h.edge_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.add_edges(&EdgeSet::new()).unwrap(), g);
        let k3 = Graph::empty(3)
            .add_edges(&EdgeSet::from_pairs([(0, 1), (1, 2), (0, 2)]).unwrap())
            .unwrap();
        assert_eq!(k3, Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap());
        assert!(EdgeSet::from_pairs([(2, 2)]).is_err());
        assert!(g.add_edges(&EdgeSet::from_pairs([(0, 9)]).unwrap()).is_err());
    }

    #[test]
    fn induced_subgraph_examples() {
        let c5 = Graph::new(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let (p3, map) = c5.induced_subgraph(&[1, 2, 3]).unwrap();
        assert_eq!(p3, Graph::new(3, [(0, 1), (1, 2)]).unwrap());
        assert_eq!(map, vec![1, 2, 3]);
        let (e, _) = c5.induced_subgraph(&[]).unwrap();
        assert_eq!(e.vertex_count(), 0);
        let k5 = Graph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        let (k3, _) = k5.induced_subgraph(&[4, 0, 2]).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert!(c5.induced_subgraph(&[1, 1]).is_err());
        assert!(c5.induced_subgraph(&[7]).is_err());
    }

    #[test]
    fn non_edges_examples() {
        let all = [0, 1, 2, 3];
        assert_eq!(
            c4().non_edges_within(&all).unwrap(),
            EdgeSet::from_pairs([(0, 2), (1, 3)]).unwrap()
        );
        let k4 = Graph::new(4, (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v)))).unwrap();
        assert!(k4.non_edges_within(&all).unwrap().is_empty());
        assert_eq!(Graph::empty(3).non_edges_within(&[0, 1, 2]).unwrap().len(), 3);
    }

    #[test]
    fn dense_switch_preserves_queries() {
        let k6 = Graph::new(6, (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v)))).unwrap();
        assert!(k6.is_dense());
        assert_eq!(k6.edge_count(), 15);
        assert_eq!(k6.neighbors(2).collect::<Vec<_>>(), vec![0, 1, 3, 4, 5]);
        let path = Graph::new(20, (0..19).map(|i| (i, i + 1))).unwrap();
        assert!(!path.is_dense());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (0..=max_n).prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let k = pairs.len();
            proptest::collection::vec(any::<bool>(), k).prop_map(move |mask| {
                let edges = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(&p, _)| p);
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn induced_plus_missing_is_all_pairs(g in arb_graph(12), seed in any::<u64>()) {
            let subset: Vec<usize> = (0..g.vertex_count()).filter(|v| (seed >> (v % 64)) & 1 == 1).collect();
            let (sub, _) = g.induced_subgraph(&subset).unwrap();
            let s = subset.len();
            prop_assert_eq!(sub.edge_count() + g.non_edges_within(&subset).unwrap().len(), s * s.saturating_sub(1) / 2);
        }

        #[test]
        fn degree_sum_is_twice_edges(g in arb_graph(14)) {
            let sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
            prop_assert_eq!(sum, 2 * g.edge_count());
            for (u, v) in g.edges() {
                prop_assert!(g.has_edge(v, u));
                prop_assert!(u != v);
            }
        }

        #[test]
        fn add_edges_is_associative(g in arb_graph(10), a in arb_graph(10), b in arb_graph(10)) {
            let n = g.vertex_count();
            let clip = |h: &Graph| -> EdgeSet { h.edges().filter(|&(_, v)| v < n).collect() };
            let (ea, eb) = (clip(&a), clip(&b));
            let lhs = g.add_edges(&ea).unwrap().add_edges(&eb).unwrap();
            let rhs = g.add_edges(&ea.union(&eb)).unwrap();
            prop_assert_eq!(lhs.edge_set(), rhs.edge_set());
        }

        #[test]
        fn complement_is_involution(g in arb_graph(12)) {
            prop_assert_eq!(g.complement().complement(), g);
        }
    }
}
