use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{SolveStats, SolverError, SolverLimits};
use crate::bitset::{self, BitMatrix, Ones};
use crate::graph::Graph;

/// A set of vertices of a host graph, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexCover(Vec<usize>);

impl VertexCover {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexCover(vertices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Some edge with neither end in the set, if any.
    pub fn uncovered_edge(&self, g: &Graph) -> Option<(usize, usize)> {
        g.edges().find(|&(u, v)| !self.contains(u) && !self.contains(v))
    }

    pub fn is_cover_of(&self, g: &Graph) -> bool {
        self.0.iter().all(|&v| v < g.vertex_count()) && self.uncovered_edge(g).is_none()
    }
}

struct CoverSearch<'a> {
    adj: &'a BitMatrix,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl CoverSearch<'_> {
    fn live_degree(&self, alive: &[u64], v: usize) -> usize {
        bitset::count_and(self.adj.row(v), alive)
    }

    /// Size of a greedy maximal matching among live vertices; a lower bound on the cover.
    fn matching_bound(&self, alive: &[u64]) -> usize {
        let mut free = alive.to_vec();
        let mut size = 0;
        for u in Ones::new(alive) {
            if !bitset::get_bit(&free, u) {
                continue;
            }
            let partner = self.adj.row(u).iter().zip(&free).enumerate().find_map(|(i, (a, f))| {
                let w = a & f;
                (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
            });
            if let Some(w) = partner {
                bitset::clear_bit(&mut free, u);
                bitset::clear_bit(&mut free, w);
                size += 1;
            }
        }
        size
    }

    fn search(&mut self, mut alive: Vec<u64>, chosen: &mut Vec<usize>) -> Result<(), SolverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolverError::BudgetExhausted { budget: self.budget });
        }
        let mark = chosen.len();
        // degree-0 and degree-1 simplification to a fixed point
        loop {
            let mut changed = false;
            let live: Vec<usize> = Ones::new(&alive).collect();
            for v in live {
                if !bitset::get_bit(&alive, v) {
                    continue;
                }
                match self.live_degree(&alive, v) {
                    0 => {
                        bitset::clear_bit(&mut alive, v);
                        changed = true;
                    }
                    1 => {
                        let u = Ones::new(self.adj.row(v))
                            .find(|&u| bitset::get_bit(&alive, u))
                            .expect("one live neighbor");
                        chosen.push(u);
                        bitset::clear_bit(&mut alive, u);
                        bitset::clear_bit(&mut alive, v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let result = self.branch(alive, chosen);
        chosen.truncate(mark);
        result
    }

    fn branch(&mut self, alive: Vec<u64>, chosen: &mut Vec<usize>) -> Result<(), SolverError> {
        if chosen.len() >= self.best.len() {
            return Ok(());
        }
        let pivot = Ones::new(&alive)
            .map(|v| (self.live_degree(&alive, v), v))
            .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)));
        let Some((degree, v)) = pivot.filter(|&(d, _)| d > 0) else {
            self.best = chosen.clone();
            return Ok(());
        };
        if chosen.len() + self.matching_bound(&alive) >= self.best.len() {
            return Ok(());
        }

        // take v
        let mut without_v = alive.clone();
        bitset::clear_bit(&mut without_v, v);
        chosen.push(v);
        self.search(without_v, chosen)?;
        chosen.pop();

        // or take all of N(v)
        if chosen.len() + degree < self.best.len() {
            let mut rest = alive;
            let nbrs: Vec<usize> = Ones::new(self.adj.row(v))
                .filter(|&u| bitset::get_bit(&rest, u))
                .collect();
            let mark = chosen.len();
            for u in nbrs {
                chosen.push(u);
                bitset::clear_bit(&mut rest, u);
            }
            bitset::clear_bit(&mut rest, v);
            self.search(rest, chosen)?;
            chosen.truncate(mark);
        }
        Ok(())
    }
}

/// Minimum vertex cover by branch and bound on a maximum-degree vertex.
///
/// Either the pivot joins the cover or its whole neighborhood does. Degree-0
/// vertices are dropped and degree-1 vertices force their neighbor in. The
/// bound is a greedy maximal matching.
pub fn exact_vertex_cover(g: &Graph, limits: &SolverLimits) -> Result<(VertexCover, SolveStats), SolverError> {
    let start = Instant::now();
    let n = g.vertex_count();
    let adj = g.to_bit_matrix();
    let mut alive = vec![0u64; adj.stride()];
    for v in 0..n {
        bitset::set_bit(&mut alive, v);
    }
    let mut search = CoverSearch {
        adj: &adj,
        best: Vec::new(),
        nodes: 0,
        budget: limits.node_budget,
    };
    // Initial incumbent: both ends of a maximal matching.
    let mut initial = Vec::new();
    let mut matched = vec![false; n];
    for (u, v) in g.edges() {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            initial.extend([u, v]);
        }
    }
    search.best = initial;
    let mut chosen = Vec::new();
    search.search(alive, &mut chosen)?;
    let cover = VertexCover::new(search.best);
    assert!(cover.is_cover_of(g), "vertex cover search returned a non-cover");
    Ok((
        cover,
        SolveStats {
            nodes: search.nodes,
            elapsed: start.elapsed(),
        },
    ))
}
