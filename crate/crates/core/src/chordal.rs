//! Chordality recognition with checkable certificates, split-graph
//! recognition, and the elimination game.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::{self, BitMatrix};
use crate::graph::{EdgeSet, Graph, GraphError};

/// A permutation of the vertices of a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EliminationOrdering(Vec<usize>);

impl EliminationOrdering {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, GraphError> {
        if order.len() != n {
            return Err(GraphError::NotPermutation {
                n,
                reason: format!("length {} differs from vertex count", order.len()),
            });
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(GraphError::NotPermutation {
                    n,
                    reason: format!("entry {v} out of range"),
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::NotPermutation {
                    n,
                    reason: format!("entry {v} repeated"),
                });
            }
        }
        Ok(EliminationOrdering(order))
    }

    pub fn identity(n: usize) -> Self {
        EliminationOrdering((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn reversed(&self) -> Self {
        EliminationOrdering(self.0.iter().rev().copied().collect())
    }

    /// `positions()[v]` is the step at which `v` appears.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

/// Maximum cardinality search. Returns the visit order; its reverse is an
/// elimination ordering that is perfect iff the graph is chordal.
///
/// Ties between vertices of maximal weight go to the smallest id.
pub fn mcs_ordering(g: &Graph) -> EliminationOrdering {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut buckets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    buckets[0].extend(0..n);
    let mut high = 0;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        while buckets[high].is_empty() {
            high -= 1;
        }
        let v = buckets[high].pop_first().expect("nonempty bucket");
        visited[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if visited[u] {
                continue;
            }
            let w = weight[u];
            buckets[w].remove(&u);
            buckets[w + 1].insert(u);
            weight[u] = w + 1;
            high = high.max(w + 1);
        }
    }
    EliminationOrdering(order)
}

/// Witness for or against chordality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChordalityCertificate {
    /// A perfect elimination ordering.
    Peo { order: Vec<usize> },
    /// An induced cycle on at least four vertices, in cyclic order.
    Hole { cycle: Vec<usize> },
}

impl ChordalityCertificate {
    pub fn is_chordal(&self) -> bool {
        matches!(self, ChordalityCertificate::Peo { .. })
    }

    /// Re-checks the certificate against `g` straight from the definitions.
    pub fn verify(&self, g: &Graph) -> bool {
        match self {
            ChordalityCertificate::Peo { order } => EliminationOrdering::new(order.clone(), g.vertex_count())
                .map(|o| is_perfect_elimination_ordering(g, &o))
                .unwrap_or(false),
            ChordalityCertificate::Hole { cycle } => is_hole(g, cycle),
        }
    }
}

/// Every vertex's later neighbors form a clique.
pub fn is_perfect_elimination_ordering(g: &Graph, ordering: &EliminationOrdering) -> bool {
    let n = g.vertex_count();
    if ordering.len() != n {
        return false;
    }
    let order = ordering.as_slice();
    if g.is_dense() {
        let rows = g.to_bit_matrix();
        let mut later = vec![0u64; rows.stride()];
        let mut lv = vec![0u64; rows.stride()];
        for &v in order.iter().rev() {
            for (dst, (a, b)) in lv.iter_mut().zip(rows.row(v).iter().zip(&later)) {
                *dst = a & b;
            }
            for u in bitset::Ones::new(&lv) {
                // L(v) \ {u} must be inside N(u)
                if bitset::count_and_not(&lv, &lv, rows.row(u)) != 1 {
                    return false;
                }
            }
            bitset::set_bit(&mut later, v);
        }
        true
    } else {
        let pos = ordering.positions();
        order.iter().all(|&v| {
            let later: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
            later
                .iter()
                .enumerate()
                .all(|(i, &a)| later[i + 1..].iter().all(|&b| g.has_edge(a, b)))
        })
    }
}

/// `cycle` lists at least four distinct vertices inducing exactly a cycle.
pub fn is_hole(g: &Graph, cycle: &[usize]) -> bool {
    let l = cycle.len();
    if l < 4 || cycle.iter().any(|&v| v >= g.vertex_count()) {
        return false;
    }
    let distinct: BTreeSet<_> = cycle.iter().collect();
    if distinct.len() != l {
        return false;
    }
    for i in 0..l {
        for j in i + 1..l {
            let consecutive = j == i + 1 || (i == 0 && j == l - 1);
            if g.has_edge(cycle[i], cycle[j]) != consecutive {
                return false;
            }
        }
    }
    true
}

/// First violation of the parent test: `v` has later neighbors `p` (the
/// earliest) and `w` with `p`, `w` non-adjacent.
fn peo_violation(g: &Graph, ordering: &EliminationOrdering) -> Option<(usize, usize, usize)> {
    let pos = ordering.positions();
    for &v in ordering.as_slice() {
        let later: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
        let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if let Some(&w) = later.iter().find(|&&w| w != parent && !g.has_edge(parent, w)) {
            return Some((v, parent, w));
        }
    }
    None
}

/// Shortest `p`–`w` path avoiding `N[v]` except for its endpoints, closed into a
/// cycle through `v`. Needs `p`, `w` non-adjacent neighbors of `v`.
fn hole_through(g: &Graph, v: usize, p: usize, w: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    blocked[v] = true;
    for u in g.neighbors(v) {
        blocked[u] = true;
    }
    blocked[p] = false;
    blocked[w] = false;
    let mut prev = vec![usize::MAX; n];
    prev[p] = p;
    let mut queue = VecDeque::from([p]);
    while let Some(x) = queue.pop_front() {
        if x == w {
            break;
        }
        for y in g.neighbors(x) {
            if blocked[y] || prev[y] != usize::MAX {
                continue;
            }
            prev[y] = x;
            queue.push_back(y);
        }
    }
    if prev[w] == usize::MAX {
        return None;
    }
    let mut path = vec![w];
    let mut x = w;
    while x != p {
        x = prev[x];
        path.push(x);
    }
    path.push(v);
    path.reverse();
    // path = [v, p, ..., w]
    Some(path)
}

fn find_any_hole(g: &Graph) -> Option<Vec<usize>> {
    for v in 0..g.vertex_count() {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        for (i, &p) in nbrs.iter().enumerate() {
            for &w in &nbrs[i + 1..] {
                if g.has_edge(p, w) {
                    continue;
                }
                if let Some(cycle) = hole_through(g, v, p, w) {
                    return Some(cycle);
                }
            }
        }
    }
    None
}

/// Decides chordality and returns a certificate that has been re-verified.
pub fn chordality(g: &Graph) -> ChordalityCertificate {
    let elimination = mcs_ordering(g).reversed();
    let cert = match peo_violation(g, &elimination) {
        None => ChordalityCertificate::Peo {
            order: elimination.into_vec(),
        },
        Some((v, p, w)) => {
            let cycle = hole_through(g, v, p, w)
                .or_else(|| find_any_hole(g))
                .expect("a graph without a perfect elimination ordering has a hole");
            ChordalityCertificate::Hole { cycle }
        }
    };
    assert!(cert.verify(g), "chordality certificate failed its own check");
    cert
}

pub fn is_chordal(g: &Graph) -> bool {
    chordality(g).is_chordal()
}

/// A clique / independent-set partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPartition {
    pub clique: Vec<usize>,
    pub independent: Vec<usize>,
}

impl SplitPartition {
    pub fn verify(&self, g: &Graph) -> bool {
        let mut all: Vec<usize> = self.clique.iter().chain(&self.independent).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len() == g.vertex_count()
            && self.clique.len() + self.independent.len() == g.vertex_count()
            && all.iter().enumerate().all(|(i, &v)| i == v)
            && pairwise(&self.clique, |a, b| g.has_edge(a, b))
            && pairwise(&self.independent, |a, b| !g.has_edge(a, b))
    }
}

fn pairwise(set: &[usize], pred: impl Fn(usize, usize) -> bool) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &a)| set[i + 1..].iter().all(|&b| pred(a, b)))
}

/// Split-graph recognition from the degree sequence (Hammer–Simeone).
pub fn split_partition(g: &Graph) -> Option<SplitPartition> {
    let n = g.vertex_count();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let degs: Vec<usize> = by_degree.iter().map(|&v| g.degree(v)).collect();
    let k = (1..=n).filter(|&i| degs[i - 1] + 1 >= i).max().unwrap_or(0);
    let head: usize = degs[..k].iter().sum();
    let tail: usize = degs[k..].iter().sum();
    if head != k * k.saturating_sub(1) + tail {
        return None;
    }
    let mut clique = by_degree[..k].to_vec();
    let mut independent = by_degree[k..].to_vec();
    clique.sort_unstable();
    independent.sort_unstable();
    let part = SplitPartition { clique, independent };
    assert!(
        part.verify(g),
        "degree-sequence split test produced an invalid partition"
    );
    Some(part)
}

pub fn is_split(g: &Graph) -> bool {
    split_partition(g).is_some()
}

/// Mutable state of the elimination game on a bit matrix.
pub(crate) struct EliminationGame {
    pub(crate) rows: BitMatrix,
    pub(crate) alive: Vec<u64>,
    scratch: Vec<u64>,
}

impl EliminationGame {
    pub(crate) fn new(g: &Graph) -> Self {
        let rows = g.to_bit_matrix();
        let mut alive = vec![0u64; rows.stride()];
        for v in 0..g.vertex_count() {
            bitset::set_bit(&mut alive, v);
        }
        let scratch = vec![0; rows.stride()];
        EliminationGame { rows, alive, scratch }
    }

    pub(crate) fn is_alive(&self, v: usize) -> bool {
        bitset::get_bit(&self.alive, v)
    }

    pub(crate) fn degree(&self, v: usize) -> usize {
        self.rows.row_count(v)
    }

    /// Non-adjacent pairs among the current neighbors of `v`.
    pub(crate) fn missing_pairs(&self, v: usize) -> usize {
        let nbrs = self.rows.row(v);
        let mut twice = 0;
        for u in bitset::Ones::new(nbrs) {
            // neighbors of v other than u that u does not see
            twice += bitset::count_and_not(nbrs, nbrs, self.rows.row(u)) - 1;
        }
        twice / 2
    }

    /// Eliminates `v`: cliques its live neighborhood and removes it.
    /// Added pairs are pushed to `fill` as `(min, max)`.
    pub(crate) fn eliminate(&mut self, v: usize, fill: &mut Vec<(usize, usize)>) {
        self.scratch.copy_from_slice(self.rows.row(v));
        let nbrs = std::mem::take(&mut self.scratch);
        for u in bitset::Ones::new(&nbrs) {
            let row = self.rows.row_mut(u);
            for (w_idx, (r, nb)) in row.iter_mut().zip(&nbrs).enumerate() {
                let mut fresh = nb & !*r;
                while fresh != 0 {
                    let w = w_idx * 64 + fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    if u < w {
                        fill.push((u, w));
                    }
                }
                *r |= nb;
            }
            bitset::clear_bit(row, u);
            bitset::clear_bit(row, v);
        }
        self.rows.row_mut(v).fill(0);
        bitset::clear_bit(&mut self.alive, v);
        self.scratch = nbrs;
    }
}

/// Plays the elimination game in the given order and returns the union of added edges.
pub fn elimination_fill(g: &Graph, ordering: &EliminationOrdering) -> Result<EdgeSet, GraphError> {
    let ordering = EliminationOrdering::new(ordering.as_slice().to_vec(), g.vertex_count())?;
    let mut game = EliminationGame::new(g);
    let mut fill = Vec::new();
    for &v in ordering.as_slice() {
        game.eliminate(v, &mut fill);
    }
    Ok(fill.into_iter().collect())
}

/// Outcome of checking a claimed fill-in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FillInVerdict {
    Valid,
    OutOfRange { u: usize, v: usize },
    AlreadyEdge { u: usize, v: usize },
    NotChordal { hole: Vec<usize> },
}

impl FillInVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, FillInVerdict::Valid)
    }
}

impl std::fmt::Display for FillInVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FillInVerdict::Valid => write!(f, "valid fill-in"),
            FillInVerdict::OutOfRange { u, v } => write!(f, "pair ({u}, {v}) is out of range"),
            FillInVerdict::AlreadyEdge { u, v } => write!(f, "pair ({u}, {v}) is already an edge"),
            FillInVerdict::NotChordal { hole } => write!(f, "completion is not chordal; hole {hole:?}"),
        }
    }
}

/// Checks that `fill` consists of non-edges of `g` and that `g + fill` is chordal.
pub fn verify_fillin(g: &Graph, fill: &EdgeSet) -> FillInVerdict {
    let n = g.vertex_count();
    for (u, v) in fill {
        if v >= n {
            return FillInVerdict::OutOfRange { u, v };
        }
        if g.has_edge(u, v) {
            return FillInVerdict::AlreadyEdge { u, v };
        }
    }
    let completed = g.add_edges(fill).expect("range checked above");
    match chordality(&completed) {
        ChordalityCertificate::Peo { .. } => FillInVerdict::Valid,
        ChordalityCertificate::Hole { cycle } => FillInVerdict::NotChordal { hole: cycle },
    }
}
