//! Verification suites over seeded random corpora.

use fillin_core::audit::{int, parse_rational, AuditRecord, RatioAudit, Rational, Relation};
use fillin_core::matrix::{fill_equivalence_check, symbolic_factor, SparsePattern};
use fillin_core::reduction::{
    decision_check, reduce_primitive_with, split_completion, strip_clique_components, verify_sandwich, SandwichOptions,
};
use fillin_core::report::RunReport;
use fillin_core::solvers::{exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy};
use fillin_core::transfer::{
    vc_via_completion, vc_via_fillin, ExactSplitProcedure, GreedyProcedure, TransferConfig, TransferMode,
};
use fillin_core::{elimination_fill, generate, mcs_ordering, EliminationOrdering, FillIn, Graph};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::commands::{oracle_limit, reduction_limits, solver_limits};
use crate::failure::Failure;
use crate::Suite;

pub struct SuiteSpec {
    pub suite: Suite,
    pub nmax: Option<usize>,
    pub trials: usize,
    pub eps: String,
    pub d: usize,
    pub seed: u64,
}

struct Trial {
    summary: Value,
    records: Vec<AuditRecord>,
}

/// Independent stream per trial, so results do not depend on `--jobs`.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    generate::rng(seed ^ (trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn prefixed(trial: usize, mut r: AuditRecord) -> AuditRecord {
    r.name = format!("trial {trial}: {}", r.name);
    r
}

pub fn parse_epsilon(text: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::invalid(format!("cannot read epsilon `{text}`")))
}

fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> Result<Graph, Failure> {
    let p = rng.random_range(0.2..0.8);
    Ok(generate::gnp(n, p, rng)?)
}

pub fn run(spec: &SuiteSpec) -> Result<RunReport, Failure> {
    let (name, nmax) = match spec.suite {
        Suite::Sandwich => ("sandwich", spec.nmax.unwrap_or(3)),
        Suite::Decision => ("decision", spec.nmax.unwrap_or(6)),
        Suite::Transfer => ("transfer", spec.nmax.unwrap_or(10)),
        Suite::Matrix => ("matrix", spec.nmax.unwrap_or(10)),
    };
    if nmax == 0 {
        return Err(Failure::invalid("--nmax must be positive"));
    }
    let mut parameters = json!({ "suite": name, "nmax": nmax, "trials": spec.trials, "seed": spec.seed });
    let eps = match spec.suite {
        Suite::Transfer => {
            let eps = parse_epsilon(&spec.eps)?;
            parameters["eps"] = json!(eps.to_string());
            parameters["d"] = json!(spec.d);
            Some(eps)
        }
        _ => None,
    };
    let trials: Result<Vec<Trial>, Failure> = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(spec.seed, i);
            match spec.suite {
                Suite::Sandwich => sandwich_trial(i, nmax, &mut rng),
                Suite::Decision => decision_trial(i, nmax, &mut rng),
                Suite::Transfer => transfer_trial(i, nmax, eps.expect("parsed above"), spec.d, &mut rng),
                Suite::Matrix => matrix_trial(i, nmax, &mut rng),
            }
        })
        .collect();
    let trials = trials?;
    let mut checks = RatioAudit::new();
    if let Suite::Matrix = spec.suite {
        checks.extend(structured_patterns(nmax));
    }
    let mut summaries = Vec::with_capacity(trials.len());
    for (i, t) in trials.into_iter().enumerate() {
        checks.extend(t.records.into_iter().map(|r| prefixed(i, r)));
        summaries.push(t.summary);
    }
    let outputs = json!({ "trials": summaries });
    Ok(RunReport::new(&format!("verify {name}"), parameters, outputs, checks))
}

fn sandwich_trial(i: usize, nmax: usize, rng: &mut ChaCha8Rng) -> Result<Trial, Failure> {
    let n = rng.random_range(1..=nmax);
    let g = random_graph(n, rng)?;
    let inst = reduce_primitive_with(&g, &reduction_limits())?;
    let opts = SandwichOptions {
        limits: solver_limits(None),
        oracle_limit: oracle_limit(),
        random_orderings: 2,
        seed: rng.random(),
    };
    let r = verify_sandwich(&inst, &opts)?;
    Ok(Trial {
        summary: json!({
            "trial": i, "n": n, "edges": g.edge_count(), "tau": r.tau,
            "phi": r.phi, "split_completion": r.split_completion, "pass": r.pass,
        }),
        records: r.checks.records,
    })
}

fn decision_trial(i: usize, nmax: usize, rng: &mut ChaCha8Rng) -> Result<Trial, Failure> {
    let n = rng.random_range(1..=nmax);
    let g = random_graph(n, rng)?;
    let c = rng.random_range(0..=n);
    let inst = reduce_primitive_with(&g, &reduction_limits())?;
    let limits = solver_limits(None);
    let (cover, _) = exact_vertex_cover(&g, &limits)?;
    let tau = cover.len();
    let h = &inst.host;
    let mut fills: Vec<(String, FillIn)> = GreedyStrategy::ALL
        .iter()
        .map(|&s| (s.name().to_string(), greedy_minfill_heuristic(h, s).fill))
        .collect();
    fills.push(("mcs".into(), elimination_fill(h, &mcs_ordering(h).reversed())?));
    let order = generate::random_ordering(h.vertex_count(), rng);
    fills.push(("random".into(), elimination_fill(h, &order)?));
    fills.push(("split-completion".into(), split_completion(&inst, &cover)?));

    let threshold = (c + 1) * n * n - 1;
    let mut records = Vec::new();
    let mut split = None;
    for (name, fill) in &fills {
        match decision_check(&inst, c, fill, &limits) {
            Ok(v) => split = Some(v.split_completion),
            Err(fillin_core::reduction::ReductionError::Falsified(msg)) => {
                records.push(AuditRecord::failure(&format!("{name}: decision equivalence"), &msg))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let smallest = fills.iter().map(|(_, f)| f.len()).min().expect("non-empty");
    if let Some(split) = split {
        records.push(AuditRecord::conditional(
            tau <= c,
            "tau <= c: split completion <= (c+1)n^2 - 1",
            int(split),
            Relation::Le,
            int(threshold),
        ));
    }
    records.push(AuditRecord::conditional(
        tau > c,
        "tau > c: smallest fill-in found > (c+1)n^2 - 1",
        int(smallest),
        Relation::Gt,
        int(threshold),
    ));
    Ok(Trial {
        summary: json!({
            "trial": i, "n": n, "edges": g.edge_count(), "c": c, "tau": tau,
            "threshold": threshold, "smallest_fill": smallest,
        }),
        records,
    })
}

/// A `d`-regular graph when one exists on the drawn size, otherwise a random degree-bounded one.
/// `K_{d+1}` components are outside the reduction's domain and are dropped.
fn transfer_graph(nmax: usize, d: usize, rng: &mut ChaCha8Rng) -> Graph {
    let lo = (d + 2).min(nmax);
    let n = rng.random_range(lo..=nmax);
    let g = match generate::random_regular(n, d, rng) {
        Ok(g) => g,
        Err(_) => generate::random_bounded_degree(n, d, n * d, rng),
    };
    strip_clique_components(&g, d).graph
}

fn transfer_trial(i: usize, nmax: usize, eps: Rational, d: usize, rng: &mut ChaCha8Rng) -> Result<Trial, Failure> {
    let g = transfer_graph(nmax, d, rng);
    let mut records = Vec::new();
    let mut runs = Vec::new();
    let configure = |mode| -> Result<TransferConfig, Failure> {
        let mut config = TransferConfig::new(eps, d, mode)?;
        config.limits = solver_limits(None);
        config.reduction_limits = reduction_limits();
        Ok(config)
    };
    let exact = ExactSplitProcedure {
        limits: solver_limits(None),
    };
    for mode in [TransferMode::FillIn, TransferMode::Completion] {
        let config = configure(mode)?;
        let out = match mode {
            TransferMode::FillIn => vc_via_fillin(&g, &exact, &config)?,
            TransferMode::Completion => vc_via_completion(&g, &exact, &config)?,
        };
        let tag = format!("exact {}", mode_name(mode));
        records.push(AuditRecord::check_int(
            &format!("{tag}: |C| = tau"),
            out.report.cover_size,
            Relation::Eq,
            out.report.tau,
        ));
        records.extend(out.audit.records.into_iter().map(|mut r| {
            r.name = format!("{tag}: {}", r.name);
            r
        }));
        runs.push(json!({ "procedure": tag, "cover": out.report.cover_size, "tau": out.report.tau }));
    }
    let config = configure(TransferMode::FillIn)?;
    for s in GreedyStrategy::ALL {
        let out = vc_via_fillin(&g, &GreedyProcedure(s), &config)?;
        let tag = format!("{s} fill-in");
        records.extend(out.audit.records.into_iter().map(|mut r| {
            r.name = format!("{tag}: {}", r.name);
            r
        }));
        runs.push(json!({ "procedure": tag, "cover": out.report.cover_size, "tau": out.report.tau }));
    }
    Ok(Trial {
        summary: json!({ "trial": i, "n": g.vertex_count(), "edges": g.edge_count(), "runs": runs }),
        records,
    })
}

fn mode_name(mode: TransferMode) -> &'static str {
    match mode {
        TransferMode::FillIn => "fill-in",
        TransferMode::Completion => "completion",
    }
}

const ORDERINGS_PER_PATTERN: usize = 10;

fn matrix_trial(i: usize, nmax: usize, rng: &mut ChaCha8Rng) -> Result<Trial, Failure> {
    let n = rng.random_range(1..=nmax);
    let p = SparsePattern::random(n, rng.random_range(0.1..0.6), rng);
    let mut differing = 0;
    for _ in 0..ORDERINGS_PER_PATTERN {
        let order = generate::random_ordering(n, rng);
        if !fill_equivalence_check(&p, &order)? {
            differing += 1;
        }
    }
    let record = AuditRecord::check_int(
        "orderings where symbolic and elimination fill differ",
        differing,
        Relation::Eq,
        0,
    );
    Ok(Trial {
        summary: json!({ "trial": i, "n": n, "entries": p.off_diagonal_count(), "orderings": ORDERINGS_PER_PATTERN }),
        records: vec![record],
    })
}

/// Tridiagonal and arrow patterns, whose fill under the natural and leaves-first orderings is known.
fn structured_patterns(nmax: usize) -> Vec<AuditRecord> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let natural = EliminationOrdering::identity(n);
        let tri = symbolic_factor(&SparsePattern::tridiagonal(n), &natural).expect("sized ordering");
        out.push(AuditRecord::check_int(
            &format!("tridiagonal n={n}: fill"),
            tri.fill.len(),
            Relation::Eq,
            0,
        ));
        let arrow = SparsePattern::arrow(n);
        let leaves = EliminationOrdering::new((1..n).chain(0..1).collect(), n).expect("permutation");
        let fill = symbolic_factor(&arrow, &leaves).expect("sized ordering").fill.len();
        out.push(AuditRecord::check_int(
            &format!("arrow n={n}, leaves first: fill"),
            fill,
            Relation::Eq,
            0,
        ));
        let k = n - 1;
        let fill = symbolic_factor(&arrow, &natural).expect("sized ordering").fill.len();
        out.push(AuditRecord::check_int(
            &format!("arrow n={n}, center first: fill"),
            fill,
            Relation::Eq,
            k * k.saturating_sub(1) / 2,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use fillin_core::audit::frac;

    #[test]
    fn epsilon_forms() {
        assert_eq!(parse_epsilon("0.5").unwrap(), frac(1, 2));
        assert_eq!(parse_epsilon("1/4").unwrap(), frac(1, 4));
        assert_eq!(parse_epsilon(".125").unwrap(), frac(1, 8));
        assert!(parse_epsilon("abc").is_err());
        assert!(parse_epsilon("0.-5").is_err());
    }
}
