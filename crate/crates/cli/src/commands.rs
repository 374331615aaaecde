use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use fillin_core::audit::{AuditRecord, RatioAudit, Relation};
use fillin_core::matrix::{graph_from_pattern, read_matrix_market, symbolic_factor};
use fillin_core::reduction::{brooks_coloring, reduce_colored_with, reduce_primitive_with, ReductionLimits};
use fillin_core::report::{canonical_hash, RunReport};
use fillin_core::solvers::{
    exact_fillin_ordering_oracle_with_limit, exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy,
    SolverLimits, VertexCover, ORACLE_HARD_MAX, ORACLE_LIMIT,
};
use fillin_core::{
    dimacs, elimination_fill, generate, mcs_ordering, verify_fillin, EliminationOrdering, FillIn, Graph,
};
use serde_json::{json, Value};

use crate::failure::{Failure, CHECK_FAILED, INVALID_INPUT};
use crate::{suites, Cli, Command, Model, Problem, ReduceMode, Strategy};

/// Set to anything but `0` or empty to lift the size and budget guardrails.
pub const OVERRIDE_VAR: &str = "FILLIN_LAB_LIMIT_OVERRIDE";

pub fn limits_overridden() -> bool {
    std::env::var(OVERRIDE_VAR).is_ok_and(|v| !v.is_empty() && v != "0")
}

pub fn oracle_limit() -> usize {
    if limits_overridden() {
        ORACLE_HARD_MAX
    } else {
        ORACLE_LIMIT
    }
}

pub fn reduction_limits() -> ReductionLimits {
    if limits_overridden() {
        ReductionLimits::unbounded()
    } else {
        ReductionLimits::default()
    }
}

pub fn solver_limits(budget: Option<u64>) -> SolverLimits {
    let mut limits = SolverLimits::default();
    if limits_overridden() {
        limits.node_budget = u64::MAX;
    }
    if let Some(b) = budget {
        limits.node_budget = b;
    }
    limits
}

/// A record that holds exactly when no violation was found.
pub fn no_violations(name: &str, violation: Option<String>) -> AuditRecord {
    match violation {
        None => AuditRecord::check_int(name, 0, Relation::Eq, 0),
        Some(detail) => AuditRecord::failure(name, &detail),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(dimacs::parse_graph(&read_text(path)?)?)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn edges_json(set: &FillIn) -> Value {
    json!(set.iter().map(|(u, v)| [u, v]).collect::<Vec<_>>())
}

fn emit(cli: &Cli, mut report: RunReport, started: Instant) -> Result<ExitCode, Failure> {
    if cli.timings {
        report.timings = Some(json!({ "wall_seconds": started.elapsed().as_secs_f64() }));
    }
    let text = report.to_json_pretty() + "\n";
    match &cli.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    let failed: Vec<_> = report.checks.failures().collect();
    eprintln!(
        "{}: {:?} ({} checks, {} failed)",
        report.command,
        report.verdict,
        report.checks.len(),
        failed.len()
    );
    for r in failed.iter().take(10) {
        eprintln!("  {r}");
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CHECK_FAILED)
    })
}

pub fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    match &cli.command {
        Command::Gen {
            model,
            n,
            p,
            d,
            rows,
            cols,
        } => {
            gen(cli, *model, *n, *p, *d, *rows, *cols)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reduce {
            input,
            mode,
            b,
            d,
            out_prefix,
        } => emit(cli, reduce(cli, input, *mode, *b, *d, out_prefix.as_deref())?, started),
        Command::Solve {
            input,
            problem,
            budget,
            strategy,
        } => emit(cli, solve(input, *problem, *budget, *strategy)?, started),
        Command::Verify {
            suite,
            nmax,
            trials,
            eps,
            d,
            jobs,
        } => {
            let spec = suites::SuiteSpec {
                suite: *suite,
                nmax: *nmax,
                trials: *trials,
                eps: eps.clone(),
                d: *d,
                seed: cli.seed,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*jobs.max(&1))
                .build()
                .map_err(|e| Failure::invalid(e.to_string()))?;
            let report = pool.install(|| suites::run(&spec))?;
            emit(cli, report, started)
        }
        Command::Eliminate { input, ordering } => emit(cli, eliminate(input, ordering)?, started),
        Command::Report { report, graph } => emit(cli, recheck(report, graph.as_deref())?, started),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::invalid(format!("--{flag} is required for this model")))
}

fn gen(
    cli: &Cli,
    model: Model,
    n: Option<usize>,
    p: Option<f64>,
    d: Option<usize>,
    rows: Option<usize>,
    cols: Option<usize>,
) -> Result<(), Failure> {
    let mut rng = generate::rng(cli.seed);
    let (g, description) = match model {
        Model::Gnp => {
            let (n, p) = (required(n, "n")?, required(p, "p")?);
            (
                generate::gnp(n, p, &mut rng)?,
                format!("gnp n={n} p={p} seed={}", cli.seed),
            )
        }
        Model::Regular => {
            let (n, d) = (required(n, "n")?, required(d, "d")?);
            let g = generate::random_regular(n, d, &mut rng)?;
            if (0..n).any(|v| g.degree(v) != d) {
                return Err(Failure::check(format!("generated graph is not {d}-regular")));
            }
            (g, format!("regular n={n} d={d} seed={}", cli.seed))
        }
        Model::Cycle => {
            let n = required(n, "n")?;
            if n != 0 && n < 3 {
                return Err(Failure::invalid("cycles need at least 3 vertices"));
            }
            (generate::cycle(n), format!("cycle n={n}"))
        }
        Model::Grid => {
            let (r, c) = (required(rows, "rows")?, required(cols, "cols")?);
            (generate::grid(r, c), format!("grid {r}x{c}"))
        }
    };
    let text = dimacs::write_graph(&g, &[&description]);
    match &cli.out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "gen: {description}: {} vertices, {} edges",
        g.vertex_count(),
        g.edge_count()
    );
    Ok(())
}

fn reduce(
    cli: &Cli,
    input: &Path,
    mode: ReduceMode,
    b: usize,
    d: Option<usize>,
    out_prefix: Option<&Path>,
) -> Result<RunReport, Failure> {
    let g = read_graph(input)?;
    let limits = reduction_limits();
    let n = g.vertex_count();
    let (inst, expected, formula, d) = match mode {
        ReduceMode::Primitive => (reduce_primitive_with(&g, &limits)?, n * n * n + n, "n^3 + n", None),
        ReduceMode::Colored => {
            let d = d.unwrap_or(g.max_degree().max(3));
            let coloring = brooks_coloring(&g, d)?;
            let q = coloring.q;
            (
                reduce_colored_with(&g, b, &coloring, &limits)?,
                (b * q + 1) * n,
                "(bq + 1)n",
                Some(d),
            )
        }
    };
    let mut checks = RatioAudit::new();
    checks.push(AuditRecord::check_int(
        &format!("|V(H)| = {formula}"),
        inst.host.vertex_count(),
        Relation::Eq,
        expected,
    ));
    checks.push(no_violations(
        "gadget structure",
        inst.check_invariants().err().map(|e| e.to_string()),
    ));

    let mut files = Vec::new();
    if let Some(prefix) = out_prefix {
        let graph_path = prefix.with_extension("dimacs");
        let sidecar_path = prefix.with_extension("json");
        let comment = format!("{} gadget of {}", mode_name(mode), input.display());
        write_text(&graph_path, &dimacs::write_graph(&inst.host, &[&comment]))?;
        let sidecar = serde_json::to_string_pretty(&inst.sidecar()).expect("sidecar serializes") + "\n";
        write_text(&sidecar_path, &sidecar)?;
        files = vec![graph_path.display().to_string(), sidecar_path.display().to_string()];
    }
    let outputs = json!({
        "host_vertices": inst.host.vertex_count(),
        "host_edges": inst.host.edge_count(),
        "host_sha256": canonical_hash(&inst.host),
        "block_count": inst.block_count(),
        "block_deficit": inst.block_deficit(),
        "q": inst.coloring().map(|c| c.q),
        "fallback_coloring": inst.coloring().map(|c| c.fallback),
        "files": files,
    });
    let parameters = json!({ "mode": mode_name(mode), "b": b, "d": d, "seed": cli.seed });
    Ok(RunReport::new("reduce", parameters, outputs, checks).with_instance(&g))
}

fn mode_name(mode: ReduceMode) -> &'static str {
    match mode {
        ReduceMode::Primitive => "primitive",
        ReduceMode::Colored => "colored",
    }
}

fn strategy(s: Strategy) -> GreedyStrategy {
    match s {
        Strategy::MinDegree => GreedyStrategy::MinDegree,
        Strategy::MinFill => GreedyStrategy::MinFill,
    }
}

fn fill_checks(g: &Graph, fill: &FillIn, ordering: &EliminationOrdering, checks: &mut RatioAudit) {
    let verdict = verify_fillin(g, fill);
    checks.push(no_violations(
        "G + fill is chordal",
        (!verdict.is_valid()).then(|| verdict.to_string()),
    ));
    let replay = elimination_fill(g, ordering).expect("ordering sized to graph");
    checks.push(AuditRecord::check_int(
        "|fill| = fill of the certificate ordering",
        fill.len(),
        Relation::Eq,
        replay.len(),
    ));
}

fn solve(input: &Path, problem: Problem, budget: Option<u64>, strat: Strategy) -> Result<RunReport, Failure> {
    let g = read_graph(input)?;
    let mut checks = RatioAudit::new();
    let (name, parameters, outputs) = match problem {
        Problem::Vc => {
            let (cover, stats) = exact_vertex_cover(&g, &solver_limits(budget))?;
            let uncovered = cover
                .uncovered_edge(&g)
                .map(|(u, v)| format!("edge ({u}, {v}) uncovered"));
            checks.push(no_violations("cover touches every edge", uncovered));
            let outputs = json!({ "size": cover.len(), "cover": cover.as_slice(), "nodes": stats.nodes });
            ("vc", json!({ "budget": budget }), outputs)
        }
        Problem::Fillin => {
            let sol = exact_fillin_ordering_oracle_with_limit(&g, oracle_limit())?;
            fill_checks(&g, &sol.fill, &sol.ordering, &mut checks);
            let outputs = json!({
                "size": sol.fill.len(),
                "fill": edges_json(&sol.fill),
                "ordering": sol.ordering.as_slice(),
            });
            ("fillin", json!({ "oracle_limit": oracle_limit() }), outputs)
        }
        Problem::FillinHeuristic => {
            let s = strategy(strat);
            let sol = greedy_minfill_heuristic(&g, s);
            fill_checks(&g, &sol.fill, &sol.ordering, &mut checks);
            let outputs = json!({
                "size": sol.fill.len(),
                "fill": edges_json(&sol.fill),
                "ordering": sol.ordering.as_slice(),
            });
            ("fillin-heuristic", json!({ "strategy": s.name() }), outputs)
        }
    };
    Ok(RunReport::new(&format!("solve {name}"), parameters, outputs, checks).with_instance(&g))
}

fn parse_ordering(spec: &str, g: &Graph) -> Result<EliminationOrdering, Failure> {
    let n = g.vertex_count();
    Ok(match spec {
        "natural" => EliminationOrdering::identity(n),
        "mcs" => mcs_ordering(g).reversed(),
        "min-degree" => greedy_minfill_heuristic(g, GreedyStrategy::MinDegree).ordering,
        "min-fill" => greedy_minfill_heuristic(g, GreedyStrategy::MinFill).ordering,
        path => {
            let text = read_text(Path::new(path))?;
            let ids = text
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(Failure::invalid(format!("ordering file: bad vertex id `{t}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            EliminationOrdering::new(ids, n)?
        }
    })
}

fn eliminate(input: &Path, ordering: &str) -> Result<RunReport, Failure> {
    let text = read_text(input)?;
    let pattern = if text.trim_start().starts_with("%%MatrixMarket") {
        Some(read_matrix_market(&text)?)
    } else {
        None
    };
    let g = match &pattern {
        Some(p) => graph_from_pattern(p),
        None => dimacs::parse_graph(&text)?,
    };
    let order = parse_ordering(ordering, &g)?;
    let fill = elimination_fill(&g, &order)?;
    let mut checks = RatioAudit::new();
    let verdict = verify_fillin(&g, &fill);
    checks.push(no_violations(
        "G + fill is chordal",
        (!verdict.is_valid()).then(|| verdict.to_string()),
    ));
    let mut outputs = json!({
        "ordering": order.as_slice(),
        "fill_size": fill.len(),
        "fill": edges_json(&fill),
    });
    if let Some(p) = &pattern {
        let factor = symbolic_factor(p, &order)?;
        let differing = factor.fill.iter().filter(|&(u, v)| !fill.contains(u, v)).count()
            + fill.iter().filter(|&(u, v)| !factor.fill.contains(u, v)).count();
        checks.push(AuditRecord::check_int(
            "pairs where symbolic fill and elimination fill differ",
            differing,
            Relation::Eq,
            0,
        ));
        outputs["factor_nonzeros"] = json!(factor.nonzeros);
    }
    let parameters = json!({
        "ordering": ordering,
        "format": if pattern.is_some() { "matrix-market" } else { "dimacs" },
    });
    Ok(RunReport::new("eliminate", parameters, outputs, checks).with_instance(&g))
}

fn certificate_checks(saved: &RunReport, g: &Graph, checks: &mut RatioAudit) -> Result<(), Failure> {
    let outputs = &saved.outputs;
    if let Some(cover) = outputs.get("cover") {
        let vertices: Vec<usize> =
            serde_json::from_value(cover.clone()).map_err(|e| Failure::invalid(format!("embedded cover: {e}")))?;
        if vertices.iter().any(|&v| v >= g.vertex_count()) {
            return Err(Failure::invalid("embedded cover names vertices outside the graph"));
        }
        let cover = VertexCover::new(vertices);
        let uncovered = cover
            .uncovered_edge(g)
            .map(|(u, v)| format!("edge ({u}, {v}) uncovered"));
        checks.push(no_violations("embedded cover touches every edge", uncovered));
    }
    if let Some(fill) = outputs.get("fill") {
        let pairs: Vec<(usize, usize)> =
            serde_json::from_value(fill.clone()).map_err(|e| Failure::invalid(format!("embedded fill: {e}")))?;
        let fill = FillIn::from_pairs(pairs)?;
        let verdict = verify_fillin(g, &fill);
        checks.push(no_violations(
            "embedded fill-in triangulates G",
            (!verdict.is_valid()).then(|| verdict.to_string()),
        ));
        if let Some(size) = outputs
            .get("size")
            .or_else(|| outputs.get("fill_size"))
            .and_then(Value::as_u64)
        {
            checks.push(AuditRecord::check_int(
                "reported size = |embedded fill|",
                size as usize,
                Relation::Eq,
                fill.len(),
            ));
        }
    }
    Ok(())
}

fn recheck(path: &Path, graph: Option<&Path>) -> Result<RunReport, Failure> {
    let saved: RunReport = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::invalid(format!("{}: not a report: {e}", path.display())))?;
    let mut checks = RatioAudit::new();
    checks.push(no_violations(
        "records re-evaluate to their claims",
        saved.recheck().err(),
    ));
    checks.push(no_violations(
        "saved verdict is PASS",
        (!saved.passed()).then(|| format!("{} failed records", saved.checks.failures().count())),
    ));
    if let Some(graph_path) = graph {
        let g = read_graph(graph_path)?;
        let hash = canonical_hash(&g);
        match &saved.instance {
            Some(inst) if inst.sha256 == hash => {}
            Some(inst) => {
                return Err(Failure {
                    code: INVALID_INPUT,
                    message: format!("graph hash {hash} does not match the report's {}", inst.sha256),
                })
            }
            None => return Err(Failure::invalid("report has no instance descriptor to match against")),
        }
        certificate_checks(&saved, &g, &mut checks)?;
    }
    let outputs = json!({ "command": saved.command, "records": saved.checks.len() });
    let parameters = json!({ "report": path.display().to_string() });
    Ok(RunReport::new("report", parameters, outputs, checks))
}
