use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{SolveStats, SolverError, SolverLimits};
use crate::chordal::{chordality, ChordalityCertificate, EliminationOrdering};
use crate::graph::{ordered, EdgeSet, Graph};
use crate::FillIn;

/// Default vertex limit for the ordering oracle.
pub const ORACLE_LIMIT: usize = 10;
/// Ceiling even when the default limit is overridden.
pub const ORACLE_HARD_MAX: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSolution {
    pub fill: FillIn,
    pub ordering: EliminationOrdering,
}

/// Minimum fill-in over all elimination orderings, for graphs with at most
/// [`ORACLE_LIMIT`] vertices.
pub fn exact_fillin_ordering_oracle(g: &Graph) -> Result<OracleSolution, SolverError> {
    exact_fillin_ordering_oracle_with_limit(g, ORACLE_LIMIT)
}

/// Same as [`exact_fillin_ordering_oracle`] with a caller-chosen limit (capped at [`ORACLE_HARD_MAX`]).
///
/// Orderings sharing the same set of already-eliminated vertices lead to the
/// same elimination graph, so the minimum is a dynamic program over subsets.
/// When `v` is eliminated after the set `S`, the fill edges it creates are
/// `(v, x)` for every `x ∉ S` reachable from `v` through `S` but not adjacent
/// to `v`. Each fill edge is counted once, by its earlier endpoint.
pub fn exact_fillin_ordering_oracle_with_limit(g: &Graph, limit: usize) -> Result<OracleSolution, SolverError> {
    let n = g.vertex_count();
    let limit = limit.min(ORACLE_HARD_MAX);
    if n > limit {
        return Err(SolverError::OracleLimit { n, limit });
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).fold(0u32, |m, u| m | 1 << u)).collect();
    // Vertices outside `eliminated` reachable from v through `eliminated`.
    let reach = |eliminated: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut found = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[x] & !seen;
            seen |= nb;
            found |= nb & !eliminated;
            frontier |= nb & eliminated;
        }
        found
    };

    let full = (1u32 << n) - 1;
    let states = 1usize << n;
    let mut best = vec![u32::MAX; states];
    let mut last = vec![u8::MAX; states];
    best[0] = 0;
    for s in 1..states as u32 {
        let mut members = s;
        while members != 0 {
            let v = members.trailing_zeros() as usize;
            members &= members - 1;
            let prev = s & !(1 << v);
            let cost = (reach(prev, v) & !adj[v]).count_ones();
            let total = best[prev as usize] + cost;
            if total < best[s as usize] {
                best[s as usize] = total;
                last[s as usize] = v as u8;
            }
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();

    let mut fill = EdgeSet::new();
    let mut eliminated = 0u32;
    for &v in &order {
        let mut new = reach(eliminated, v) & !adj[v];
        while new != 0 {
            let x = new.trailing_zeros() as usize;
            new &= new - 1;
            fill.insert(v, x);
        }
        eliminated |= 1 << v;
    }
    debug_assert_eq!(fill.len() as u32, best[full as usize]);
    Ok(OracleSolution {
        fill,
        ordering: EliminationOrdering::new(order, n).expect("reconstructed permutation"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchOutcome {
    /// A minimum fill-in, of size at most the budget.
    Found(FillIn),
    /// Every fill-in is larger than the budget.
    NoneWithinBudget,
}

impl BranchOutcome {
    pub fn fill(&self) -> Option<&FillIn> {
        match self {
            BranchOutcome::Found(f) => Some(f),
            BranchOutcome::NoneWithinBudget => None,
        }
    }
}

struct BranchSearch {
    nodes: AtomicU64,
    budget: u64,
}

impl BranchSearch {
    fn tick(&self) -> Result<(), SolverError> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            return Err(SolverError::BudgetExhausted { budget: self.budget });
        }
        Ok(())
    }

    /// Chords of a hole not yet forbidden, in a fixed order.
    fn chords(cycle: &[usize], forbidden: &[(usize, usize)]) -> Vec<(usize, usize)> {
        let l = cycle.len();
        let mut out = Vec::new();
        for i in 0..l {
            for j in i + 2..l {
                if i == 0 && j == l - 1 {
                    continue;
                }
                let e = ordered(cycle[i], cycle[j]);
                if !forbidden.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }

    /// A fill-in of `g` of size at most `remaining` avoiding `forbidden`, if one exists.
    ///
    /// Every fill-in contains a chord of every hole. Branching on the first
    /// chord (in list order) that the solution uses lets each branch forbid
    /// the chords before it.
    fn search(
        &self,
        g: &Graph,
        remaining: usize,
        forbidden: &[(usize, usize)],
        parallel: bool,
    ) -> Result<Option<Vec<(usize, usize)>>, SolverError> {
        self.tick()?;
        let cycle = match chordality(g) {
            ChordalityCertificate::Peo { .. } => return Ok(Some(Vec::new())),
            ChordalityCertificate::Hole { cycle } => cycle,
        };
        // triangulating the hole alone takes len - 3 chords
        if cycle.len() - 3 > remaining {
            return Ok(None);
        }
        let chords = Self::chords(&cycle, forbidden);
        let explore = |idx: usize| -> Result<Option<Vec<(usize, usize)>>, SolverError> {
            let chord = chords[idx];
            let mut next_forbidden = forbidden.to_vec();
            next_forbidden.extend_from_slice(&chords[..idx]);
            let h = g
                .add_edges(&EdgeSet::from_pairs([chord]).expect("chord is not a loop"))
                .expect("chord within range");
            Ok(self.search(&h, remaining - 1, &next_forbidden, false)?.map(|mut rest| {
                rest.push(chord);
                rest
            }))
        };
        if parallel {
            // first hit in index order keeps the answer identical to the sequential run
            (0..chords.len())
                .into_par_iter()
                .map(explore)
                .find_first(|r| !matches!(r, Ok(None)))
                .unwrap_or(Ok(None))
        } else {
            for idx in 0..chords.len() {
                if let Some(found) = explore(idx)? {
                    return Ok(Some(found));
                }
            }
            Ok(None)
        }
    }
}

/// Minimum fill-in of size at most `k` by branching over the chords of a hole,
/// with iterative deepening on the size.
pub fn exact_fillin_branch(
    g: &Graph,
    k: usize,
    limits: &SolverLimits,
) -> Result<(BranchOutcome, SolveStats), SolverError> {
    let start = Instant::now();
    let search = BranchSearch {
        nodes: AtomicU64::new(0),
        budget: limits.node_budget,
    };
    let run = || -> Result<BranchOutcome, SolverError> {
        for size in 0..=k {
            if let Some(edges) = search.search(g, size, &[], limits.workers > 1)? {
                return Ok(BranchOutcome::Found(edges.into_iter().collect()));
            }
        }
        Ok(BranchOutcome::NoneWithinBudget)
    };
    let outcome = if limits.workers > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(limits.workers)
            .build()
            .expect("thread pool")
            .install(run)?
    } else {
        run()?
    };
    Ok((
        outcome,
        SolveStats {
            nodes: search.nodes.load(Ordering::Relaxed),
            elapsed: start.elapsed(),
        },
    ))
}
