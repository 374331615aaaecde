//! Vertex cover → fill-in gadgets and the certificate maps between the two problems.
//!
//! Both constructions keep `G` on ids `0..n` and append a clique `U` split
//! into equal blocks. Every original vertex misses exactly one block and is
//! joined to the rest of `U`.

mod certificates;
mod coloring;
mod verify;

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{self, BitMatrix};
use crate::chordal::FillInVerdict;
use crate::graph::{Graph, GraphError};
use crate::solvers::SolverError;

pub use certificates::{full_vertices, split_completion, split_completion_size};
pub use coloring::{brooks_coloring, strip_clique_components, CliqueStripping, Coloring};
pub use verify::{decision_check, verify_sandwich, DecisionVerdict, FillRecord, SandwichOptions, SandwichReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{what} = {value} exceeds the guardrail of {limit} (override to proceed)")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("the reduction needs at least one vertex")]
    EmptyGraph,
    #[error("block factor b must be positive")]
    ZeroBlockFactor,
    #[error("degree bound d = {d} is below 3")]
    DegreeBoundTooSmall { d: usize },
    #[error("vertex {vertex} has degree {degree} > d = {d}")]
    DegreeExceeds { vertex: usize, degree: usize, d: usize },
    #[error("component {vertices:?} is a K_{}; strip clique components first", d + 1)]
    CliqueComponent { d: usize, vertices: Vec<usize> },
    #[error("vertex {vertex} has color {color} but only {q} colors exist")]
    ColorOutOfRange { vertex: usize, color: usize, q: usize },
    #[error("coloring has {found} entries for {expected} vertices")]
    ColoringLength { expected: usize, found: usize },
    #[error("edge ({u}, {v}) is monochromatic")]
    ImproperColoring { u: usize, v: usize },
    #[error("not a vertex cover: edge ({u}, {v}) is uncovered")]
    NotACover { u: usize, v: usize },
    #[error("invalid fill-in: {0}")]
    InvalidFillIn(FillInVerdict),
    #[error("malformed instance: {0}")]
    Malformed(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    /// A proven statement failed on a concrete instance.
    #[error("internal consistency failure: {0}")]
    Falsified(String),
}

/// Size limits for the dense gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionLimits {
    pub max_primitive_n: usize,
    /// Bound on `b * q * n`, the size of `U` in the colored construction.
    pub max_colored_units: usize,
}

impl Default for ReductionLimits {
    fn default() -> Self {
        ReductionLimits {
            max_primitive_n: 40,
            max_colored_units: 1_000_000,
        }
    }
}

impl ReductionLimits {
    pub fn unbounded() -> Self {
        ReductionLimits {
            max_primitive_n: usize::MAX,
            max_colored_units: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    /// One block of `n²` vertices per original vertex.
    Primitive,
    /// One block of `b·n` vertices per color.
    Colored { b: usize, coloring: Coloring },
}

#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub host: Graph,
    source: Graph,
    block_size: usize,
    /// `missed[v]` is the block index that original vertex `v` is not joined to.
    missed: Vec<usize>,
    block_count: usize,
    kind: ReductionKind,
}

impl ReducedInstance {
    /// The graph the instance was built from, equal to `host` restricted to `0..n`.
    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn kind(&self) -> &ReductionKind {
        &self.kind
    }

    pub fn is_primitive(&self) -> bool {
        matches!(self.kind, ReductionKind::Primitive)
    }

    pub fn n(&self) -> usize {
        self.source.vertex_count()
    }

    pub fn original_vertices(&self) -> Range<usize> {
        0..self.n()
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Vertices per block, which is also the number of `U`-edges each original vertex misses.
    pub fn block_deficit(&self) -> usize {
        self.block_size
    }

    pub fn block(&self, i: usize) -> Range<usize> {
        assert!(i < self.block_count, "block {i} out of range");
        let start = self.n() + i * self.block_size;
        start..start + self.block_size
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.block_count).map(|i| self.block(i))
    }

    pub fn missed_block(&self, v: usize) -> usize {
        self.missed[v]
    }

    pub fn b(&self) -> Option<usize> {
        match &self.kind {
            ReductionKind::Colored { b, .. } => Some(*b),
            ReductionKind::Primitive => None,
        }
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match &self.kind {
            ReductionKind::Colored { coloring, .. } => Some(coloring),
            ReductionKind::Primitive => None,
        }
    }

    pub fn sidecar(&self) -> Sidecar {
        let (reduction, b, q, coloring) = match &self.kind {
            ReductionKind::Primitive => ("primitive", None, None, None),
            ReductionKind::Colored { b, coloring } => {
                ("colored", Some(*b), Some(coloring.q), Some(coloring.colors.clone()))
            }
        };
        Sidecar {
            reduction: reduction.to_string(),
            n: self.n(),
            b,
            q,
            blocks: self.blocks().map(|r| r.collect()).collect(),
            coloring,
            fallback: self.coloring().map(|c| c.fallback),
        }
    }

    /// Rebuilds an instance from a host graph and its sidecar, re-checking every invariant.
    pub fn from_sidecar(host: Graph, sidecar: &Sidecar) -> Result<Self, ReductionError> {
        let n = sidecar.n;
        if n == 0 || n > host.vertex_count() {
            return Err(ReductionError::Malformed(format!(
                "n = {n} for a host on {} vertices",
                host.vertex_count()
            )));
        }
        let kind = match sidecar.reduction.as_str() {
            "primitive" => ReductionKind::Primitive,
            "colored" => {
                let (Some(b), Some(q), Some(colors)) = (sidecar.b, sidecar.q, sidecar.coloring.clone()) else {
                    return Err(ReductionError::Malformed(
                        "colored sidecar needs b, q and coloring".into(),
                    ));
                };
                let mut coloring = Coloring::new(colors, q)?;
                coloring.fallback = sidecar.fallback.unwrap_or(false);
                ReductionKind::Colored { b, coloring }
            }
            other => return Err(ReductionError::Malformed(format!("unknown reduction `{other}`"))),
        };
        let originals: Vec<usize> = (0..n).collect();
        let (source, _) = host.induced_subgraph(&originals)?;
        let (block_size, missed, block_count) = layout(&source, &kind)?;
        let inst = ReducedInstance {
            host,
            source,
            block_size,
            missed,
            block_count,
            kind,
        };
        if inst.sidecar().blocks != sidecar.blocks {
            return Err(ReductionError::Malformed(
                "block lists do not match the canonical layout".into(),
            ));
        }
        inst.check_invariants()?;
        Ok(inst)
    }

    /// Checks every structural invariant of the construction against `host`.
    pub fn check_invariants(&self) -> Result<(), ReductionError> {
        let bad = |msg: String| Err(ReductionError::Malformed(msg));
        let n = self.n();
        let total = n + self.block_count * self.block_size;
        if self.host.vertex_count() != total {
            return bad(format!(
                "host has {} vertices, expected {total}",
                self.host.vertex_count()
            ));
        }
        for u in 0..n {
            for v in u + 1..n {
                if self.host.has_edge(u, v) != self.source.has_edge(u, v) {
                    return bad(format!("host and source disagree on ({u}, {v})"));
                }
            }
        }
        let u_size = total - n;
        for x in n..total {
            let outside = (0..n).filter(|&v| self.host.has_edge(v, x)).count();
            if self.host.degree(x) - outside != u_size - 1 {
                return bad(format!("U is not a clique at vertex {x}"));
            }
        }
        for v in 0..n {
            for (i, block) in self.blocks().enumerate() {
                let want = i != self.missed[v];
                if let Some(x) = block.clone().find(|&x| self.host.has_edge(v, x) != want) {
                    return bad(format!("vertex {v} has the wrong adjacency to {x} in block {i}"));
                }
            }
        }
        if let Some((u, v)) = self.source.edges().find(|&(u, v)| self.missed[u] == self.missed[v]) {
            return bad(format!("edge ({u}, {v}) misses a single block from both ends"));
        }
        let expected_edges = self.source.edge_count() + u_size * (u_size - 1) / 2 + n * (u_size - self.block_size);
        if self.host.edge_count() != expected_edges {
            return bad(format!(
                "host has {} edges, expected {expected_edges}",
                self.host.edge_count()
            ));
        }
        Ok(())
    }
}

/// The JSON sidecar written next to the host's DIMACS file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub reduction: String,
    pub n: usize,
    pub b: Option<usize>,
    pub q: Option<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub coloring: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<bool>,
}

/// Block size, missed-block map and block count for `kind` over `g`.
fn layout(g: &Graph, kind: &ReductionKind) -> Result<(usize, Vec<usize>, usize), ReductionError> {
    let n = g.vertex_count();
    match kind {
        ReductionKind::Primitive => Ok((n * n, (0..n).collect(), n)),
        ReductionKind::Colored { b, coloring } => {
            if *b == 0 {
                return Err(ReductionError::ZeroBlockFactor);
            }
            coloring.check_proper(g)?;
            Ok((b * n, coloring.colors.clone(), coloring.q))
        }
    }
}

fn build(g: &Graph, kind: ReductionKind) -> Result<ReducedInstance, ReductionError> {
    let n = g.vertex_count();
    let (block_size, missed, block_count) = layout(g, &kind)?;
    let total = n + block_size * block_count;
    let mut rows = BitMatrix::new(total);
    for (u, v) in g.edges() {
        rows.set_sym(u, v);
    }
    for x in n..total {
        bitset::set_range(rows.row_mut(x), n, total);
        rows.clear(x, x);
    }
    for (v, &block) in missed.iter().enumerate() {
        let missed_start = n + block * block_size;
        let row = rows.row_mut(v);
        bitset::set_range(row, n, missed_start);
        bitset::set_range(row, missed_start + block_size, total);
        for x in (n..missed_start).chain(missed_start + block_size..total) {
            rows.set(x, v);
        }
    }
    let inst = ReducedInstance {
        host: Graph::from_bit_matrix(rows),
        source: g.clone(),
        block_size,
        missed,
        block_count,
        kind,
    };
    inst.check_invariants()?;
    Ok(inst)
}

/// `G` plus `n` blocks of `n²` vertices; block `v` is the one vertex `v` misses.
pub fn reduce_primitive(g: &Graph) -> Result<ReducedInstance, ReductionError> {
    reduce_primitive_with(g, &ReductionLimits::default())
}

pub fn reduce_primitive_with(g: &Graph, limits: &ReductionLimits) -> Result<ReducedInstance, ReductionError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ReductionError::EmptyGraph);
    }
    if n > limits.max_primitive_n {
        return Err(ReductionError::TooLarge {
            what: "n",
            value: n,
            limit: limits.max_primitive_n,
        });
    }
    build(g, ReductionKind::Primitive)
}

/// `G` plus one block of `b·n` vertices per color; a vertex misses the block of its own color.
pub fn reduce_colored(g: &Graph, b: usize, coloring: &Coloring) -> Result<ReducedInstance, ReductionError> {
    reduce_colored_with(g, b, coloring, &ReductionLimits::default())
}

pub fn reduce_colored_with(
    g: &Graph,
    b: usize,
    coloring: &Coloring,
    limits: &ReductionLimits,
) -> Result<ReducedInstance, ReductionError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ReductionError::EmptyGraph);
    }
    if b == 0 {
        return Err(ReductionError::ZeroBlockFactor);
    }
    let units = b.saturating_mul(coloring.q).saturating_mul(n);
    if units > limits.max_colored_units {
        return Err(ReductionError::TooLarge {
            what: "b*q*n",
            value: units,
            limit: limits.max_colored_units,
        });
    }
    build(
        g,
        ReductionKind::Colored {
            b,
            coloring: coloring.clone(),
        },
    )
}
