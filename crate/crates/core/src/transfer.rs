//! Turning fill-in / completion approximations into vertex cover approximations
//! through the colored gadget, with every step of the ratio argument audited.

use serde::Serialize;
use thiserror::Error;

use crate::audit::{choose2, int, to_f64, AuditRecord, RatioAudit, Rational, Relation};
use crate::chordal::{verify_fillin, FillInVerdict};
use crate::graph::{EdgeSet, Graph};
use crate::reduction::{
    brooks_coloring, full_vertices, reduce_colored_with, split_completion, ReducedInstance, ReductionError,
    ReductionLimits,
};
use crate::report::canonical_hash;
use crate::solvers::{exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy, SolverLimits, VertexCover};
use crate::FillIn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransferError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    EpsilonOutOfRange(Rational),
    #[error("degree bound must be at least 3, got {0}")]
    DegreeBoundTooSmall(usize),
    #[error("block factor b must be positive")]
    ZeroBlockFactor,
    #[error("procedure `{procedure}` returned an invalid fill-in: {verdict}")]
    InvalidFillIn { procedure: String, verdict: FillInVerdict },
    #[error("procedure `{procedure}` did not return a supergraph: {reason}")]
    NotSupergraph { procedure: String, reason: String },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl From<crate::solvers::SolverError> for TransferError {
    fn from(e: crate::solvers::SolverError) -> Self {
        TransferError::Reduction(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferMode {
    FillIn,
    Completion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferConfig {
    epsilon: Rational,
    d: usize,
    b: usize,
    b_defaulted: bool,
    pub mode: TransferMode,
    pub limits: SolverLimits,
    pub reduction_limits: ReductionLimits,
}

impl TransferConfig {
    /// `b` defaults to `⌈1/ε⌉`.
    pub fn new(epsilon: Rational, d: usize, mode: TransferMode) -> Result<Self, TransferError> {
        if epsilon <= int(0) || epsilon >= int(1) {
            return Err(TransferError::EpsilonOutOfRange(epsilon));
        }
        if d < 3 {
            return Err(TransferError::DegreeBoundTooSmall(d));
        }
        let inv = epsilon.recip();
        let b = ((inv.numer() + inv.denom() - 1) / inv.denom()) as usize;
        Ok(TransferConfig {
            epsilon,
            d,
            b,
            b_defaulted: true,
            mode,
            limits: SolverLimits::default(),
            reduction_limits: ReductionLimits::default(),
        })
    }

    pub fn with_b(mut self, b: usize) -> Result<Self, TransferError> {
        if b == 0 {
            return Err(TransferError::ZeroBlockFactor);
        }
        self.b = b;
        self.b_defaulted = false;
        Ok(self)
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Target ratio of the plugged procedure: `1 + ε/3` for fill-in, `1 + ε²/(10d³)` for completion.
    pub fn alpha(&self) -> Rational {
        alpha_for(self.mode, self.epsilon, self.d)
    }

    /// `c = (1/ε + 1)·d + 1`, with `|V(H)| ≤ c·n` for the default `b`.
    pub fn size_constant(&self) -> Rational {
        (self.epsilon.recip() + int(1)) * int(self.d) + int(1)
    }
}

fn alpha_for(mode: TransferMode, eps: Rational, d: usize) -> Rational {
    match mode {
        TransferMode::FillIn => int(1) + eps / int(3),
        TransferMode::Completion => int(1) + eps * eps / int(10 * d * d * d),
    }
}

/// Any procedure producing a fill-in of a gadget host.
pub trait FillInProcedure {
    fn name(&self) -> String {
        "custom".to_string()
    }
    fn fill_in(&self, inst: &ReducedInstance) -> FillIn;
}

/// Any procedure producing a chordal supergraph of a gadget host.
pub trait CompletionProcedure {
    fn name(&self) -> String {
        "custom".to_string()
    }
    fn complete(&self, inst: &ReducedInstance) -> Graph;
}

impl<F: Fn(&ReducedInstance) -> FillIn> FillInProcedure for F {
    fn fill_in(&self, inst: &ReducedInstance) -> FillIn {
        self(inst)
    }
}

impl<F: Fn(&ReducedInstance) -> Graph> CompletionProcedure for F {
    fn complete(&self, inst: &ReducedInstance) -> Graph {
        self(inst)
    }
}

/// Split completion of an exact minimum cover of the source graph.
#[derive(Clone, Debug, Default)]
pub struct ExactSplitProcedure {
    pub limits: SolverLimits,
}

impl ExactSplitProcedure {
    fn run(&self, inst: &ReducedInstance) -> FillIn {
        let (cover, _) = exact_vertex_cover(inst.source(), &self.limits).expect("exact cover within budget");
        split_completion(inst, &cover).expect("exact cover is a cover")
    }
}

impl FillInProcedure for ExactSplitProcedure {
    fn name(&self) -> String {
        "exact-split".to_string()
    }
    fn fill_in(&self, inst: &ReducedInstance) -> FillIn {
        self.run(inst)
    }
}

impl CompletionProcedure for ExactSplitProcedure {
    fn name(&self) -> String {
        "exact-split".to_string()
    }
    fn complete(&self, inst: &ReducedInstance) -> Graph {
        inst.host.add_edges(&self.run(inst)).expect("fill within range")
    }
}

/// Greedy elimination on the host.
#[derive(Clone, Copy, Debug)]
pub struct GreedyProcedure(pub GreedyStrategy);

impl FillInProcedure for GreedyProcedure {
    fn name(&self) -> String {
        format!("greedy-{}", self.0)
    }
    fn fill_in(&self, inst: &ReducedInstance) -> FillIn {
        greedy_minfill_heuristic(&inst.host, self.0).fill
    }
}

impl CompletionProcedure for GreedyProcedure {
    fn name(&self) -> String {
        format!("greedy-{}", self.0)
    }
    fn complete(&self, inst: &ReducedInstance) -> Graph {
        inst.host.add_edges(&self.fill_in(inst)).expect("fill within range")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub instance: String,
    pub mode: TransferMode,
    pub procedure: String,
    pub epsilon: f64,
    pub epsilon_exact: String,
    pub b: usize,
    pub d: usize,
    /// Colors used by the gadget; differs from `d` only when the coloring fell back to `d + 1`.
    pub q: usize,
    pub fallback_coloring: bool,
    /// Isolated vertices removed before building the gadget.
    pub isolated_removed: usize,
    pub n: usize,
    pub host_vertices: usize,
    pub host_edges: usize,
    pub fill_size: usize,
    /// `|split_completion(exact cover)|`, standing in for the unknown optimum of the host.
    pub upper_bound: usize,
    pub alpha_target: f64,
    /// Procedure objective over the same objective at `upper_bound`.
    pub alpha_measured: f64,
    pub alpha_reference: &'static str,
    pub inequalities: RatioAudit,
    pub cover_size: usize,
    pub tau: usize,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct TransferOutcome {
    /// Cover of the input graph, in its own vertex ids.
    pub cover: VertexCover,
    pub audit: RatioAudit,
    pub report: TransferReport,
}

/// Produced fill of one plugged procedure, already validated.
struct Produced {
    name: String,
    fill: FillIn,
}

fn check_input(g: &Graph, d: usize) -> Result<(), TransferError> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) > d) {
        return Err(ReductionError::DegreeExceeds {
            vertex: v,
            degree: g.degree(v),
            d,
        }
        .into());
    }
    Ok(())
}

/// Fill-in mode: an `α = 1 + ε/3` fill-in procedure yields a `1 + ε` cover.
pub fn vc_via_fillin(
    g: &Graph,
    procedure: &dyn FillInProcedure,
    config: &TransferConfig,
) -> Result<TransferOutcome, TransferError> {
    let config = TransferConfig {
        mode: TransferMode::FillIn,
        ..config.clone()
    };
    run(g, &config, |inst| {
        let name = procedure.name();
        let fill = procedure.fill_in(inst);
        let verdict = verify_fillin(&inst.host, &fill);
        if !verdict.is_valid() {
            return Err(TransferError::InvalidFillIn {
                procedure: name,
                verdict,
            });
        }
        Ok(Produced { name, fill })
    })
}

/// Completion mode: an `α = 1 + ε²/(10d³)` completion procedure yields a `1 + ε` cover.
pub fn vc_via_completion(
    g: &Graph,
    procedure: &dyn CompletionProcedure,
    config: &TransferConfig,
) -> Result<TransferOutcome, TransferError> {
    let config = TransferConfig {
        mode: TransferMode::Completion,
        ..config.clone()
    };
    run(g, &config, |inst| {
        let name = procedure.name();
        let sup = procedure.complete(inst);
        let h = &inst.host;
        if sup.vertex_count() != h.vertex_count() {
            return Err(TransferError::NotSupergraph {
                procedure: name,
                reason: format!("{} vertices instead of {}", sup.vertex_count(), h.vertex_count()),
            });
        }
        if let Some((u, v)) = h.edges().find(|&(u, v)| !sup.has_edge(u, v)) {
            return Err(TransferError::NotSupergraph {
                procedure: name,
                reason: format!("edge ({u}, {v}) was dropped"),
            });
        }
        let fill: EdgeSet = sup.edges().filter(|&(u, v)| !h.has_edge(u, v)).collect();
        let verdict = verify_fillin(h, &fill);
        if !verdict.is_valid() {
            return Err(TransferError::InvalidFillIn {
                procedure: name,
                verdict,
            });
        }
        Ok(Produced { name, fill })
    })
}

fn run(
    g: &Graph,
    config: &TransferConfig,
    produce: impl FnOnce(&ReducedInstance) -> Result<Produced, TransferError>,
) -> Result<TransferOutcome, TransferError> {
    let d = config.d;
    check_input(g, d)?;
    // isolated vertices are never in a minimum cover and break the degree-counting bound on tau
    let kept: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).collect();
    let isolated_removed = g.vertex_count() - kept.len();
    let (core, ids) = g.induced_subgraph(&kept).map_err(ReductionError::from)?;

    if core.vertex_count() == 0 {
        let audit = degenerate_audit(config);
        let report = TransferReport {
            instance: canonical_hash(g),
            mode: config.mode,
            procedure: "none".to_string(),
            epsilon: to_f64(&config.epsilon),
            epsilon_exact: config.epsilon.to_string(),
            b: config.b,
            d,
            q: d,
            fallback_coloring: false,
            isolated_removed,
            n: 0,
            host_vertices: 0,
            host_edges: 0,
            fill_size: 0,
            upper_bound: 0,
            alpha_target: to_f64(&config.alpha()),
            alpha_measured: 1.0,
            alpha_reference: "split completion of an exact cover",
            pass: audit.passes(),
            inequalities: audit.clone(),
            cover_size: 0,
            tau: 0,
            ratio: 1.0,
        };
        return Ok(TransferOutcome {
            cover: VertexCover::default(),
            audit,
            report,
        });
    }

    let coloring = brooks_coloring(&core, d)?;
    let inst = reduce_colored_with(&core, config.b, &coloring, &config.reduction_limits)?;
    let produced = produce(&inst)?;
    let cover = full_vertices(&inst, &produced.fill)?;
    let (exact, _) = exact_vertex_cover(&core, &config.limits)?;
    let split = split_completion(&inst, &exact)?;

    let facts = RunFacts {
        eps: config.epsilon,
        // when the coloring fell back, every bound is evaluated with q in place of d
        d: coloring.q,
        b: config.b,
        b_defaulted: config.b_defaulted,
        n: core.vertex_count(),
        host_vertices: inst.host.vertex_count(),
        host_edges: inst.host.edge_count(),
        source_edges: core.edge_count(),
        fill: produced.fill.len(),
        full: cover.len(),
        tau: exact.len(),
        upper: split.len(),
    };
    let alpha = alpha_for(config.mode, facts.eps, facts.d);
    let measured = facts.measured_alpha(config.mode);
    let mut audit = facts.common_records();
    match config.mode {
        TransferMode::FillIn => audit.extend(facts.fillin_chain(alpha, measured <= alpha)),
        TransferMode::Completion => audit.extend(facts.completion_chain(alpha, measured <= alpha)),
    }

    let lifted = VertexCover::new(cover.as_slice().iter().map(|&v| ids[v]).collect());
    debug_assert!(lifted.is_cover_of(g));
    let report = TransferReport {
        instance: canonical_hash(g),
        mode: config.mode,
        procedure: produced.name,
        epsilon: to_f64(&config.epsilon),
        epsilon_exact: config.epsilon.to_string(),
        b: config.b,
        d,
        q: coloring.q,
        fallback_coloring: coloring.fallback,
        isolated_removed,
        n: facts.n,
        host_vertices: facts.host_vertices,
        host_edges: facts.host_edges,
        fill_size: facts.fill,
        upper_bound: facts.upper,
        alpha_target: to_f64(&alpha),
        alpha_measured: to_f64(&measured),
        alpha_reference: "split completion of an exact cover",
        pass: audit.passes(),
        inequalities: audit.clone(),
        cover_size: facts.full,
        tau: facts.tau,
        ratio: to_f64(&(int(facts.full) / int(facts.tau))),
    };
    Ok(TransferOutcome {
        cover: lifted,
        audit,
        report,
    })
}

fn degenerate_audit(config: &TransferConfig) -> RatioAudit {
    let zero = int(0);
    let mut audit = RatioAudit::new();
    audit.push(AuditRecord::degenerate("|C| <= |E+|/(bn)", zero, Relation::Le, zero));
    audit.push(AuditRecord::degenerate("tau < n", zero, Relation::Lt, zero));
    audit.push(AuditRecord::degenerate("tau >= n/(d+1)", zero, Relation::Ge, zero));
    audit.push(AuditRecord::degenerate(
        "|C|/tau < 1+eps",
        int(1),
        Relation::Lt,
        int(1) + config.epsilon,
    ));
    audit
}

/// Every number the audit needs, taken from one run.
struct RunFacts {
    eps: Rational,
    d: usize,
    b: usize,
    b_defaulted: bool,
    n: usize,
    host_vertices: usize,
    host_edges: usize,
    source_edges: usize,
    fill: usize,
    full: usize,
    tau: usize,
    upper: usize,
}

impl RunFacts {
    fn bn(&self) -> Rational {
        int(self.b * self.n)
    }

    fn measured_alpha(&self, mode: TransferMode) -> Rational {
        match mode {
            TransferMode::FillIn if self.upper == 0 => int(1),
            TransferMode::FillIn => int(self.fill) / int(self.upper),
            TransferMode::Completion => int(self.host_edges + self.fill) / int(self.host_edges + self.upper),
        }
    }

    /// Lines that hold for any valid fill-in, plus the configuration arithmetic.
    fn common_records(&self) -> RatioAudit {
        let (n, tau, d, b) = (self.n, self.tau, self.d, self.b);
        let eps = self.eps;
        let mut a = RatioAudit::new();
        a.push(AuditRecord::check(
            "|C| <= |E+|/(bn)",
            int(self.full),
            Relation::Le,
            int(self.fill) / self.bn(),
        ));
        a.push(AuditRecord::check(
            "upper bound <= tau*bn + C(tau,2)",
            int(self.upper),
            Relation::Le,
            int(tau) * self.bn() + choose2(tau),
        ));
        a.push(AuditRecord::check(
            "upper bound < bn*tau + tau^2/2",
            int(self.upper),
            Relation::Lt,
            self.bn() * int(tau) + int(tau * tau) / int(2),
        ));
        a.push(AuditRecord::check_int("tau < n", tau, Relation::Lt, n));
        a.push(AuditRecord::check(
            "tau >= n/(d+1)",
            int(tau),
            Relation::Ge,
            int(n) / int(d + 1),
        ));
        a.push(AuditRecord::check_int("|C| >= tau", self.full, Relation::Ge, tau));
        a.push(AuditRecord::conditional(
            self.b_defaulted,
            "b >= 1/eps",
            int(b),
            Relation::Ge,
            eps.recip(),
        ));
        let c = (eps.recip() + int(1)) * int(d) + int(1);
        a.push(AuditRecord::conditional(
            self.b_defaulted,
            "|V(H)| <= c*n, c = (1/eps+1)d+1",
            int(self.host_vertices),
            Relation::Le,
            c * int(n),
        ));
        a
    }

    fn fillin_chain(&self, alpha: Rational, applies: bool) -> Vec<AuditRecord> {
        let tau = int(self.tau);
        let eps = self.eps;
        let bn = self.bn();
        let one = int(1);
        let ratio = int(self.full) / tau;
        let step = alpha * (one + tau / (int(2) * bn));
        vec![
            AuditRecord::conditional(
                applies,
                "|E+| <= alpha*upper bound",
                int(self.fill),
                Relation::Le,
                alpha * int(self.upper),
            ),
            AuditRecord::conditional(
                applies,
                "|C| < alpha*(bn*tau + tau^2/2)/(bn)",
                int(self.full),
                Relation::Lt,
                alpha * (bn * tau + tau * tau / int(2)) / bn,
            ),
            AuditRecord::conditional(applies, "|C|/tau < alpha*(1 + tau/(2bn))", ratio, Relation::Lt, step),
            AuditRecord::check(
                "tau/(2bn) < 1/(2b) (tau < n)",
                tau / (int(2) * bn),
                Relation::Lt,
                one / int(2 * self.b),
            ),
            AuditRecord::conditional(
                self.b_defaulted,
                "alpha*(1 + tau/(2bn)) <= alpha*(1+eps/2)",
                step,
                Relation::Le,
                alpha * (one + eps / int(2)),
            ),
            AuditRecord::check(
                "(1+eps/3)(1+eps/2) < 1+eps",
                (one + eps / int(3)) * (one + eps / int(2)),
                Relation::Lt,
                one + eps,
            ),
            AuditRecord::conditional(applies, "|C|/tau < 1+eps", ratio, Relation::Lt, one + eps),
        ]
    }

    fn completion_chain(&self, alpha: Rational, applies: bool) -> Vec<AuditRecord> {
        let (n, d, b) = (self.n, self.d, self.b);
        let (nq, dq, bq, tau) = (int(n), int(d), int(b), int(self.tau));
        let eps = self.eps;
        let one = int(1);
        let two = int(2);
        let bn = self.bn();
        let am1 = alpha - one;
        let eh = int(self.host_edges);
        let bdn = b * d * n;
        let counted = int(self.source_edges) + choose2(bdn) + int(n * (bdn - b * n));
        let counted_bound = dq * nq / two + (int(bdn * bdn) - int(bdn)) / two + int(b * (d - 1) * n * n);
        let b2d2n2 = int(bdn * bdn);
        let ratio = int(self.full) / tau;

        let l1 = (am1 * eh + alpha * int(self.upper)) / bn;
        let l2 = am1 * bq * dq * dq * nq + alpha * tau + alpha * tau * tau / (two * bn);
        let l3 = am1 * bq * dq * dq * nq + alpha * tau + alpha * tau / (two * bq);
        let r1 = am1 * bq * dq * dq * nq / tau + alpha + alpha / (two * bq);
        let d3 = dq * dq * dq;
        let r2 = two * am1 * bq * d3 + alpha + alpha / (two * bq);
        let r3 = two * am1 * bq * d3 + alpha + alpha * eps / two;
        let r4 = am1 * (two * bq * d3 + one + eps / two) + one + eps / two;
        let r5 = am1 * (int(4) * d3 / eps + one + eps / two) + one + eps / two;
        let r6 = am1 * int(5) * d3 / eps + one + eps / two;
        vec![
            AuditRecord::check("|E(H)| = |E(G)| + C(bdn,2) + n(bdn-bn)", eh, Relation::Eq, counted),
            AuditRecord::check(
                "|E(G)| + C(bdn,2) + n(bdn-bn) <= dn/2 + (b^2d^2n^2-bdn)/2 + b(d-1)n^2",
                counted,
                Relation::Le,
                counted_bound,
            ),
            AuditRecord::check(
                "dn/2 + (b^2d^2n^2-bdn)/2 + b(d-1)n^2 < b^2d^2n^2",
                counted_bound,
                Relation::Lt,
                b2d2n2,
            ),
            AuditRecord::check("|E(H)| < b^2d^2n^2", eh, Relation::Lt, b2d2n2),
            AuditRecord::check("tau > n/(2d)", tau, Relation::Gt, nq / (two * dq)),
            AuditRecord::conditional(
                applies,
                "|E(H)| + |E+| <= alpha*(|E(H)| + upper bound)",
                eh + int(self.fill),
                Relation::Le,
                alpha * (eh + int(self.upper)),
            ),
            AuditRecord::conditional(
                applies,
                "|C| <= ((alpha-1)|E(H)| + alpha*upper)/(bn)",
                int(self.full),
                Relation::Le,
                l1,
            ),
            AuditRecord::check(
                "((alpha-1)|E(H)| + alpha*upper)/(bn) < (alpha-1)bd^2n + alpha*tau + alpha*tau^2/(2bn)",
                l1,
                Relation::Lt,
                l2,
            ),
            AuditRecord::check("alpha*tau^2/(2bn) < alpha*tau/(2b)", l2, Relation::Lt, l3),
            AuditRecord::conditional(
                applies,
                "|C|/tau < (alpha-1)bd^2n/tau + alpha + alpha/(2b)",
                ratio,
                Relation::Lt,
                r1,
            ),
            AuditRecord::check(
                "(alpha-1)bd^2n/tau < 2(alpha-1)bd^3 (tau > n/(2d))",
                r1,
                Relation::Lt,
                r2,
            ),
            AuditRecord::conditional(
                self.b_defaulted,
                "alpha/(2b) <= alpha*eps/2 (b >= 1/eps)",
                r2,
                Relation::Le,
                r3,
            ),
            AuditRecord::check("regrouping: = (alpha-1)(2bd^3+1+eps/2) + 1+eps/2", r3, Relation::Eq, r4),
            AuditRecord::conditional(self.b_defaulted, "b < 2/eps", r4, Relation::Lt, r5),
            AuditRecord::check("4d^3/eps + 1 + eps/2 < 5d^3/eps", r5, Relation::Lt, r6),
            AuditRecord::check("(alpha-1)5d^3/eps + 1 + eps/2 = 1+eps", r6, Relation::Eq, one + eps),
            AuditRecord::conditional(applies, "|C|/tau < 1+eps", ratio, Relation::Lt, one + eps),
        ]
    }
}
