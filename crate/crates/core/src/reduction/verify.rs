use serde::Serialize;

use super::certificates::{full_set, saturating_fill};
use super::{split_completion, ReducedInstance, ReductionError};
use crate::audit::{choose2, frac, int, AuditRecord, RatioAudit, Relation};
use crate::chordal::{elimination_fill, mcs_ordering, verify_fillin};
use crate::generate;
use crate::solvers::{
    exact_fillin_ordering_oracle_with_limit, exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy, SolverError,
    SolverLimits, ORACLE_LIMIT,
};
use crate::FillIn;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FillRecord {
    pub algorithm: String,
    pub size: usize,
    pub full: usize,
    pub valid: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub reduction: &'static str,
    pub n: usize,
    pub host_vertices: usize,
    pub tau: usize,
    pub deficit: usize,
    pub split_completion: usize,
    /// Exact minimum fill-in of the host, when within the oracle limit.
    pub phi: Option<usize>,
    pub oracle_note: Option<String>,
    /// Set when the colored instance uses `d + 1` colors.
    pub fallback_coloring: bool,
    pub fills: Vec<FillRecord>,
    pub checks: RatioAudit,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct SandwichOptions {
    pub limits: SolverLimits,
    pub oracle_limit: usize,
    /// Random elimination orderings tried on the host, in addition to the fixed heuristics.
    pub random_orderings: usize,
    pub seed: u64,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions {
            limits: SolverLimits::default(),
            oracle_limit: ORACLE_LIMIT,
            random_orderings: 2,
            seed: 0,
        }
    }
}

/// Every fill-in the crate can produce for the host, labeled by algorithm.
fn candidate_fills(inst: &ReducedInstance, split: &FillIn, opts: &SandwichOptions) -> Vec<(String, FillIn)> {
    let h = &inst.host;
    let mut out = Vec::new();
    for s in GreedyStrategy::ALL {
        out.push((s.name().to_string(), greedy_minfill_heuristic(h, s).fill));
    }
    let mcs = mcs_ordering(h).reversed();
    out.push((
        "mcs".to_string(),
        elimination_fill(h, &mcs).expect("ordering sized to host"),
    ));
    let mut rng = generate::rng(opts.seed);
    for i in 0..opts.random_orderings {
        let order = generate::random_ordering(h.vertex_count(), &mut rng);
        out.push((
            format!("random-{i}"),
            elimination_fill(h, &order).expect("ordering sized to host"),
        ));
    }
    out.push(("split-completion".to_string(), split.clone()));
    let tri = greedy_minfill_heuristic(inst.source(), GreedyStrategy::MinFill).fill;
    out.push(("saturating".to_string(), saturating_fill(inst, &tri)));
    out
}

/// Checks the sandwich `τ·D ≤ φ(H)` against the constructive upper bound, where `D` is the block deficit.
///
/// Upper side: the split completion of an optimal cover is a fill-in of size
/// `τ·D + C(τ,2) − |E(G[C])|`, which is below `(τ+1)·n²` for the primitive
/// gadget. Lower side: in any fill-in, distinct full vertices own disjoint
/// sets of `D` fill edges and form a cover, so `|E₊| ≥ |full|·D ≥ τ·D`.
pub fn verify_sandwich(inst: &ReducedInstance, opts: &SandwichOptions) -> Result<SandwichReport, ReductionError> {
    let g = inst.source();
    let n = inst.n();
    let deficit = inst.block_deficit();
    let (cover, _) = exact_vertex_cover(g, &opts.limits)?;
    let tau = cover.len();
    let mut checks = RatioAudit::new();

    let split = split_completion(inst, &cover)?;
    let s = split.len();
    let upper = int(tau * deficit) + choose2(tau);
    checks.push(AuditRecord::check(
        "split completion <= tau*D + C(tau,2)",
        int(s),
        Relation::Le,
        upper,
    ));
    if inst.is_primitive() {
        checks.push(AuditRecord::check(
            "split completion < (tau+1)*n^2",
            int(s),
            Relation::Lt,
            int((tau + 1) * n * n),
        ));
    } else {
        checks.push(AuditRecord::check_unless(
            tau == 0,
            "split completion < tau*bn + tau^2/2",
            int(s),
            Relation::Lt,
            int(tau * deficit) + frac((tau * tau) as i128, 2),
        ));
    }

    let mut fills = Vec::new();
    for (name, fill) in candidate_fills(inst, &split, opts) {
        let verdict = verify_fillin(&inst.host, &fill);
        let valid = verdict.is_valid();
        if !valid {
            checks.push(AuditRecord::failure(
                &format!("{name}: valid fill-in"),
                &verdict.to_string(),
            ));
            fills.push(FillRecord {
                algorithm: name,
                size: fill.len(),
                full: 0,
                valid,
            });
            continue;
        }
        let full = full_set(inst, &fill);
        let is_cover = crate::solvers::VertexCover::new(full.clone()).is_cover_of(g);
        if !is_cover {
            checks.push(AuditRecord::failure(
                &format!("{name}: full vertices cover G"),
                "uncovered edge",
            ));
        }
        checks.push(AuditRecord::check_int(
            &format!("{name}: |E+| >= |full|*D"),
            fill.len(),
            Relation::Ge,
            full.len() * deficit,
        ));
        checks.push(AuditRecord::check_int(
            &format!("{name}: |full|*D >= tau*D"),
            full.len() * deficit,
            Relation::Ge,
            tau * deficit,
        ));
        fills.push(FillRecord {
            algorithm: name,
            size: fill.len(),
            full: full.len(),
            valid,
        });
    }

    let (phi, oracle_note) = match exact_fillin_ordering_oracle_with_limit(&inst.host, opts.oracle_limit) {
        Ok(sol) => (Some(sol.fill.len()), None),
        Err(e @ SolverError::OracleLimit { .. }) => (None, Some(format!("phi not computed: {e}"))),
        Err(e) => return Err(e.into()),
    };
    if let Some(phi) = phi {
        checks.push(AuditRecord::check_int("phi >= tau*D", phi, Relation::Ge, tau * deficit));
        checks.push(AuditRecord::check_int("phi <= split completion", phi, Relation::Le, s));
        if inst.is_primitive() {
            checks.push(AuditRecord::check_int(
                "phi < (tau+1)*n^2",
                phi,
                Relation::Lt,
                (tau + 1) * n * n,
            ));
        }
    }

    let pass = checks.passes();
    Ok(SandwichReport {
        reduction: if inst.is_primitive() { "primitive" } else { "colored" },
        n,
        host_vertices: inst.host.vertex_count(),
        tau,
        deficit,
        split_completion: s,
        phi,
        oracle_note,
        fallback_coloring: inst.coloring().is_some_and(|c| c.fallback),
        fills,
        checks,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecisionVerdict {
    pub n: usize,
    pub c: usize,
    /// `(c+1)·n² − 1`.
    pub threshold: usize,
    pub fill_size: usize,
    pub qualifies: bool,
    pub full: Vec<usize>,
    pub tau: usize,
    pub split_completion: usize,
}

/// Decision equivalence on the primitive gadget: `τ(G) ≤ c` iff `H` has a fill-in of size at most `(c+1)n² − 1`.
///
/// The given fill-in exercises the "only if" side (a qualifying fill-in has at
/// most `c` full vertices, and they cover `G`); the split completion of an
/// optimal cover exercises the "if" side. Any violation is an error.
pub fn decision_check(
    inst: &ReducedInstance,
    c: usize,
    fill: &FillIn,
    limits: &SolverLimits,
) -> Result<DecisionVerdict, ReductionError> {
    if !inst.is_primitive() {
        return Err(ReductionError::Malformed(
            "decision check needs the primitive reduction".into(),
        ));
    }
    let n = inst.n();
    let threshold = (c + 1) * n * n - 1;
    let full = super::full_vertices(inst, fill)?;
    let qualifies = fill.len() <= threshold;
    let (cover, _) = exact_vertex_cover(inst.source(), limits)?;
    let tau = cover.len();
    let split = split_completion(inst, &cover)?.len();

    if qualifies && full.len() > c {
        return Err(ReductionError::Falsified(format!(
            "fill-in of size {} <= {threshold} has {} > {c} full vertices",
            fill.len(),
            full.len()
        )));
    }
    if qualifies && tau > c {
        return Err(ReductionError::Falsified(format!(
            "fill-in of size {} <= {threshold} exists but tau = {tau} > {c}",
            fill.len()
        )));
    }
    if tau <= c && split > threshold {
        return Err(ReductionError::Falsified(format!(
            "tau = {tau} <= {c} but the split completion has size {split} > {threshold}"
        )));
    }
    Ok(DecisionVerdict {
        n,
        c,
        threshold,
        fill_size: fill.len(),
        qualifies,
        full: full.into_vec(),
        tau,
        split_completion: split,
    })
}
