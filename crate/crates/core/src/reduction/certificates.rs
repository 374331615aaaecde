use super::{ReducedInstance, ReductionError};
use crate::audit::{choose2, int, Rational};
use crate::chordal::verify_fillin;
use crate::graph::EdgeSet;
use crate::solvers::VertexCover;
use crate::FillIn;

/// Original vertices whose every missing edge to `U` is in `fill`. No validity checks.
pub(crate) fn full_set(inst: &ReducedInstance, fill: &FillIn) -> Vec<usize> {
    inst.original_vertices()
        .filter(|&v| inst.block(inst.missed_block(v)).all(|x| fill.contains(v, x)))
        .collect()
}

/// The full original vertices of a valid fill-in of `inst.host`; always a vertex cover of `G`.
///
/// If `uv` were an uncovered edge, some `x` in `u`'s missed block and some `y`
/// in `v`'s would stay non-adjacent to `u` and `v` respectively, and
/// `u v x y` would be a chordless 4-cycle.
pub fn full_vertices(inst: &ReducedInstance, fill: &FillIn) -> Result<VertexCover, ReductionError> {
    let verdict = verify_fillin(&inst.host, fill);
    if !verdict.is_valid() {
        return Err(ReductionError::InvalidFillIn(verdict));
    }
    let cover = VertexCover::new(full_set(inst, fill));
    if let Some((u, v)) = cover.uncovered_edge(inst.source()) {
        return Err(ReductionError::Falsified(format!(
            "full vertices {:?} of a valid fill-in leave edge ({u}, {v}) uncovered",
            cover.as_slice()
        )));
    }
    Ok(cover)
}

/// Fill-in joining each cover vertex to its missed block and cliquing the cover.
///
/// The result makes `C ∪ U` a clique and leaves `V(G) \ C` independent, so the completed graph is split.
pub fn split_completion(inst: &ReducedInstance, cover: &VertexCover) -> Result<FillIn, ReductionError> {
    let g = inst.source();
    if let Some(&v) = cover.as_slice().iter().find(|&&v| v >= inst.n()) {
        return Err(ReductionError::Graph(crate::GraphError::VertexOutOfRange {
            vertex: v,
            n: inst.n(),
        }));
    }
    if let Some((u, v)) = cover.uncovered_edge(g) {
        return Err(ReductionError::NotACover { u, v });
    }
    let mut fill = g.non_edges_within(cover.as_slice())?;
    for &v in cover.as_slice() {
        fill.extend(inst.block(inst.missed_block(v)).map(|x| (v, x)));
    }
    debug_assert_eq!(
        Rational::from_integer(fill.len() as i128),
        split_completion_size(
            inst.block_deficit(),
            cover.len(),
            g.induced_subgraph(cover.as_slice())?.0.edge_count()
        )
    );
    Ok(fill)
}

/// `|C|·deficit + C(|C|, 2) − |E(G[C])|`.
pub fn split_completion_size(deficit: usize, cover_size: usize, inner_edges: usize) -> Rational {
    int(cover_size * deficit) + choose2(cover_size) - int(inner_edges)
}

/// Every fill edge between `V(G)` and `U`, plus a triangulation of `G` itself.
pub(crate) fn saturating_fill(inst: &ReducedInstance, triangulation: &EdgeSet) -> FillIn {
    let mut fill = triangulation.clone();
    for v in inst.original_vertices() {
        fill.extend(inst.block(inst.missed_block(v)).map(|x| (v, x)));
    }
    fill
}
