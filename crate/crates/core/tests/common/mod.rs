//! Brute-force oracles written straight from the definitions, sharing no code with the library
//! beyond `Graph` adjacency queries.
#![allow(dead_code)]

use fillin_core::generate;
use fillin_core::{EdgeSet, Graph};

/// Whether the vertex set `mask` induces a cycle on at least four vertices.
fn induces_hole(g: &Graph, mask: u64) -> bool {
    let verts: Vec<usize> = (0..g.vertex_count()).filter(|v| mask >> v & 1 == 1).collect();
    if verts.len() < 4 {
        return false;
    }
    let inside = |v: usize| verts.iter().filter(|&&u| g.has_edge(u, v)).count();
    if verts.iter().any(|&v| inside(v) != 2) {
        return false;
    }
    // 2-regular: a hole iff connected
    let mut seen = 1u64 << verts[0];
    let mut stack = vec![verts[0]];
    while let Some(x) = stack.pop() {
        for &y in &verts {
            if seen >> y & 1 == 0 && g.has_edge(x, y) {
                seen |= 1 << y;
                stack.push(y);
            }
        }
    }
    seen == mask
}

/// Chordal iff no vertex subset induces a hole.
pub fn brute_is_chordal(g: &Graph) -> bool {
    let n = g.vertex_count();
    assert!(n <= 16, "subset enumeration only");
    (0u64..1 << n).all(|mask| !induces_hole(g, mask))
}

pub fn brute_vertex_cover(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 20);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    (0u32..1 << n)
        .filter(|&s| edges.iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Smallest set of non-edges whose addition leaves no hole, by increasing subset size.
pub fn brute_min_fill_by_subsets(g: &Graph) -> usize {
    let n = g.vertex_count();
    let non_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    assert!(non_edges.len() <= 20, "too many non-edges to enumerate");
    let mut best = usize::MAX;
    for mask in 0u32..1 << non_edges.len() {
        let k = mask.count_ones() as usize;
        if k >= best {
            continue;
        }
        let extra: Vec<(usize, usize)> = non_edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let h = Graph::new(n, g.edges().chain(extra)).unwrap();
        if brute_is_chordal(&h) {
            best = k;
        }
    }
    best
}

/// Fill of the elimination game, simulated on an adjacency matrix.
pub fn naive_elimination_fill(g: &Graph, order: &[usize]) -> EdgeSet {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut gone = vec![false; n];
    let mut fill = EdgeSet::new();
    for &v in order {
        let nbrs: Vec<usize> = (0..n).filter(|&u| !gone[u] && adj[v][u]).collect();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a][b] {
                    adj[a][b] = true;
                    adj[b][a] = true;
                    fill.insert(a, b);
                }
            }
        }
        gone[v] = true;
    }
    fill
}

/// Minimum elimination-game fill over all `n!` orderings.
pub fn brute_min_fill_by_permutations(g: &Graph) -> usize {
    generate::permutations(g.vertex_count())
        .map(|p| naive_elimination_fill(g, &p).len())
        .min()
        .unwrap()
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    generate::gnp(n, p, &mut generate::rng(seed)).unwrap()
}

/// A graph with maximum degree 3 and no `K4` component.
pub fn subcubic_without_k4(n: usize, rng: &mut impl rand::Rng) -> Graph {
    loop {
        let tries = rng.random_range(0..3 * n + 1);
        let g = generate::random_bounded_degree(n, 3, tries, rng);
        let k4 = g
            .components()
            .iter()
            .any(|c| c.len() == 4 && c.iter().all(|&v| g.degree(v) == 3));
        if !k4 {
            return g;
        }
    }
}

/// Graphs on `1..=max_n` vertices with every pair an edge independently.
pub fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = Graph> {
    use proptest::prelude::*;
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}
