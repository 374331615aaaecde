use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::ReductionError;
use crate::graph::Graph;
use crate::solvers::VertexCover;

/// A vertex coloring with `q` available colors (some classes may be empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
    pub q: usize,
    /// Set when Brooks' construction was abandoned for a greedy `d + 1` coloring.
    #[serde(default)]
    pub fallback: bool,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, q: usize) -> Result<Self, ReductionError> {
        if let Some((vertex, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= q) {
            return Err(ReductionError::ColorOutOfRange { vertex, color, q });
        }
        Ok(Coloring {
            colors,
            q,
            fallback: false,
        })
    }

    /// First monochromatic edge, if any.
    pub fn conflict(&self, g: &Graph) -> Option<(usize, usize)> {
        g.edges().find(|&(u, v)| self.colors[u] == self.colors[v])
    }

    pub fn check_proper(&self, g: &Graph) -> Result<(), ReductionError> {
        if self.colors.len() != g.vertex_count() {
            return Err(ReductionError::ColoringLength {
                expected: g.vertex_count(),
                found: self.colors.len(),
            });
        }
        match self.conflict(g) {
            Some((u, v)) => Err(ReductionError::ImproperColoring { u, v }),
            None => Ok(()),
        }
    }

    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.q];
        for &c in &self.colors {
            seen[c] = true;
        }
        seen.into_iter().filter(|&s| s).count()
    }
}

fn smallest_free_color(g: &Graph, colors: &[Option<usize>], v: usize) -> usize {
    let taken: Vec<usize> = g.neighbors(v).filter_map(|u| colors[u]).collect();
    (0..).find(|c| !taken.contains(c)).expect("some color is free")
}

/// BFS order from `root` inside `allowed`.
fn bfs_order(g: &Graph, root: usize, allowed: &[bool]) -> Vec<usize> {
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if allowed[y] && !seen[y] {
                seen[y] = true;
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    order
}

fn connected_without(g: &Graph, component: &[usize], removed: [usize; 2]) -> bool {
    let mut allowed = vec![false; g.vertex_count()];
    for &v in component {
        allowed[v] = true;
    }
    for r in removed {
        allowed[r] = false;
    }
    let Some(&start) = component.iter().find(|v| !removed.contains(v)) else {
        return true;
    };
    bfs_order(g, start, &allowed).len() == component.len() - 2
}

/// Greedy order for one component in which every vertex but the last sees
/// at most `d - 1` colored neighbors, or `None` if no such order was found.
fn brooks_order(g: &Graph, component: &[usize], d: usize) -> Option<Vec<usize>> {
    let mut allowed = vec![false; g.vertex_count()];
    for &v in component {
        allowed[v] = true;
    }
    if let Some(&root) = component.iter().find(|&&v| g.degree(v) < d) {
        // farthest from a low-degree root first; each vertex's BFS parent is still uncolored
        let mut order = bfs_order(g, root, &allowed);
        order.reverse();
        return Some(order);
    }
    // d-regular component: color two non-adjacent neighbors x, y of some v alike,
    // where removing x and y keeps the component connected; then v sees a repeat.
    for &v in component {
        let nbrs: Vec<usize> = g.neighbors(v).collect();
        for (i, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[i + 1..] {
                if g.has_edge(x, y) || !connected_without(g, component, [x, y]) {
                    continue;
                }
                let mut rest = allowed.clone();
                rest[x] = false;
                rest[y] = false;
                let mut tail = bfs_order(g, v, &rest);
                tail.reverse();
                let mut order = vec![x, y];
                order.extend(tail);
                return Some(order);
            }
        }
    }
    None
}

/// Proper coloring with at most `d` colors of a graph with maximum degree
/// `d >= 3` and no `K_{d+1}` (Brooks' theorem, constructively).
///
/// If the construction ever fails its own check, the result is a greedy
/// coloring with `q = d + 1` and `fallback` set.
pub fn brooks_coloring(g: &Graph, d: usize) -> Result<Coloring, ReductionError> {
    if d < 3 {
        return Err(ReductionError::DegreeBoundTooSmall { d });
    }
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) > d) {
        return Err(ReductionError::DegreeExceeds {
            vertex: v,
            degree: g.degree(v),
            d,
        });
    }
    let components = g.components();
    if let Some(clique) = components.iter().find(|c| is_clique_component(g, c, d)) {
        return Err(ReductionError::CliqueComponent {
            d,
            vertices: clique.clone(),
        });
    }

    let n = g.vertex_count();
    let mut colors: Vec<Option<usize>> = vec![None; n];
    let mut fallback = false;
    for comp in &components {
        match brooks_order(g, comp, d) {
            Some(order) => {
                for v in order {
                    colors[v] = Some(smallest_free_color(g, &colors, v));
                }
            }
            None => {
                fallback = true;
                for &v in comp {
                    colors[v] = Some(smallest_free_color(g, &colors, v));
                }
            }
        }
    }
    let colors: Vec<usize> = colors.into_iter().map(|c| c.expect("every vertex colored")).collect();
    if colors.iter().any(|&c| c >= d) {
        fallback = true;
    }
    let q = if fallback { d + 1 } else { d };
    let coloring = Coloring { colors, q, fallback };
    coloring.check_proper(g)?;
    debug_assert!(coloring.colors.iter().all(|&c| c < q));
    Ok(coloring)
}

fn is_clique_component(g: &Graph, comp: &[usize], d: usize) -> bool {
    comp.len() == d + 1 && comp.iter().all(|&v| g.degree(v) == d)
}

/// `G` with its `K_{d+1}` components removed, and the bookkeeping to lift a cover back.
#[derive(Clone, Debug)]
pub struct CliqueStripping {
    pub graph: Graph,
    /// `kept[i]` is the original id of vertex `i` of `graph`.
    pub kept: Vec<usize>,
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueStripping {
    /// Maps a cover of the stripped graph back and adds `d` vertices from each removed clique.
    pub fn lift_cover(&self, cover: &VertexCover) -> VertexCover {
        let mut out: Vec<usize> = cover.as_slice().iter().map(|&v| self.kept[v]).collect();
        for clique in &self.cliques {
            out.extend(&clique[..clique.len() - 1]);
        }
        VertexCover::new(out)
    }
}

/// Removes every connected component that is a clique on `d + 1` vertices.
pub fn strip_clique_components(g: &Graph, d: usize) -> CliqueStripping {
    let mut kept = Vec::new();
    let mut cliques = Vec::new();
    for comp in g.components() {
        if is_clique_component(g, &comp, d) {
            cliques.push(comp);
        } else {
            kept.extend(comp);
        }
    }
    kept.sort_unstable();
    let (graph, kept) = g.induced_subgraph(&kept).expect("component vertices are valid");
    CliqueStripping { graph, kept, cliques }
}
