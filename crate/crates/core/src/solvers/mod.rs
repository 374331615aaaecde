//! Exact oracles for vertex cover and minimum fill-in, plus greedy elimination heuristics.

mod fillin;
mod greedy;
mod vertex_cover;

use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

pub use fillin::{
    exact_fillin_branch, exact_fillin_ordering_oracle, exact_fillin_ordering_oracle_with_limit, BranchOutcome,
    OracleSolution, ORACLE_HARD_MAX, ORACLE_LIMIT,
};
pub use greedy::{greedy_minfill_heuristic, GreedyStrategy, HeuristicSolution};
pub use vertex_cover::{exact_vertex_cover, VertexCover};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("node budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("ordering oracle limit exceeded: graph has {n} vertices, limit is {limit}")]
    OracleLimit { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    /// Maximum number of search nodes before giving up.
    pub node_budget: u64,
    /// Worker threads for the fill-in branch search; 1 keeps it sequential.
    pub workers: usize,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            node_budget: 50_000_000,
            workers: 1,
        }
    }
}

/// Search statistics attached to every exact answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}
