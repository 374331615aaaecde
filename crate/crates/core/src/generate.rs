//! Deterministic instance generators and a few named graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chordal::EliminationOrdering;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("no {d}-regular graph on {n} vertices: n*d must be even and d < n")]
    InfeasibleRegular { n: usize, d: usize },
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("failed to sample a simple {d}-regular graph on {n} vertices after {attempts} attempts")]
    RegularSamplingFailed { n: usize, d: usize, attempts: usize },
}

/// The one RNG every seeded routine uses.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn cycle(n: usize) -> Graph {
    assert!(n == 0 || n >= 3, "cycles need at least three vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}

/// `K_{a,b}` with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid K_ab")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::new(10, outer.chain(spokes).chain(inner)).expect("valid Petersen graph")
}

/// `rows x cols` grid, vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::new(rows * cols, edges).expect("valid grid")
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenerateError::BadProbability(p));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::new(n, edges).expect("valid gnp"))
}

/// Uniform-ish random `d`-regular graph via the pairing model with rejection.
pub fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<Graph, GenerateError> {
    if (n * d) % 2 == 1 || (n > 0 && d >= n) {
        return Err(GenerateError::InfeasibleRegular { n, d });
    }
    const ATTEMPTS: usize = 10_000;
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..ATTEMPTS {
        points.shuffle(rng);
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v {
                continue 'attempt;
            }
            edges.push(if u < v { (u, v) } else { (v, u) });
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let g = Graph::new(n, edges).expect("valid pairing");
        debug_assert!((0..n).all(|v| g.degree(v) == d));
        return Ok(g);
    }
    Err(GenerateError::RegularSamplingFailed {
        n,
        d,
        attempts: ATTEMPTS,
    })
}

/// Random graph with every degree at most `d`: random edges are kept while both ends have room.
pub fn random_bounded_degree(n: usize, d: usize, tries: usize, rng: &mut impl Rng) -> Graph {
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    if n >= 2 {
        for _ in 0..tries {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || deg[u] >= d || deg[v] >= d {
                continue;
            }
            let e = if u < v { (u, v) } else { (v, u) };
            if edges.contains(&e) {
                continue;
            }
            edges.push(e);
            deg[u] += 1;
            deg[v] += 1;
        }
    }
    Graph::new(n, edges).expect("valid bounded-degree graph")
}

pub fn random_ordering(n: usize, rng: &mut impl Rng) -> EliminationOrdering {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    EliminationOrdering::new(order, n).expect("shuffle is a permutation")
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut p = current.clone();
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(current)
    })
}

/// Every labeled graph on `n` vertices (`2^(n choose 2)` of them).
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "too many labeled graphs to enumerate");
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("valid pair subset")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(petersen().edge_count(), 15);
        assert!((0..10).all(|v| petersen().degree(v) == 3));
        assert_eq!(grid(2, 3).edge_count(), 7);
        assert_eq!(complete_bipartite(3, 3).edge_count(), 9);
        assert_eq!(star(5).degree(0), 5);
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = gnp(8, 0.5, &mut rng(1)).unwrap();
        let b = gnp(8, 0.5, &mut rng(1)).unwrap();
        assert_eq!(a.edge_set(), b.edge_set());
        assert!(gnp(3, 1.5, &mut rng(1)).is_err());
    }

    #[test]
    fn regular_generator_checks_degrees() {
        let g = random_regular(10, 3, &mut rng(7)).unwrap();
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert!(random_regular(5, 3, &mut rng(7)).is_err());
        assert!(random_regular(3, 3, &mut rng(7)).is_err());
    }

    #[test]
    fn permutation_and_graph_counts() {
        assert_eq!(permutations(4).count(), 24);
        assert_eq!(permutations(0).count(), 1);
        assert_eq!(all_graphs(4).count(), 64);
    }

    #[test]
    fn bounded_degree_respects_cap() {
        let g = random_bounded_degree(12, 3, 100, &mut rng(3));
        assert!(g.max_degree() <= 3);
    }
}
