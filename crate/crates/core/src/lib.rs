//! Minimum fill-in laboratory.
//!
//! Graph and chordality machinery, exact and heuristic fill-in solvers, the
//! vertex-cover → fill-in gadget reductions with their certificate maps, the
//! approximation-transfer audits, and the bridge to symbolic factorization of
//! sparse symmetric matrices.

pub mod audit;
pub mod bitset;
pub mod chordal;
pub mod dimacs;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod reduction;
pub mod report;
pub mod solvers;
pub mod transfer;

pub use chordal::{
    chordality, elimination_fill, is_chordal, is_split, mcs_ordering, split_partition, verify_fillin,
    ChordalityCertificate, EliminationOrdering, FillInVerdict, SplitPartition,
};
pub use graph::{EdgeSet, Graph, GraphError};

/// A set of non-edges claimed to triangulate its host graph.
pub type FillIn = EdgeSet;
