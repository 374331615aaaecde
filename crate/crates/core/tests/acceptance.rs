//! Acceptance suite: one PASS/FAIL line per criterion. All tolerances are exact integer or rational comparisons.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{brute_is_chordal, brute_min_fill_by_subsets, brute_vertex_cover, subcubic_without_k4};
use fillin_core::audit::{frac, Rational, RecordStatus};
use fillin_core::matrix::{fill_equivalence_check, symbolic_factor, SparsePattern};
use fillin_core::reduction::{
    brooks_coloring, decision_check, full_vertices, reduce_colored, reduce_primitive, split_completion, ReducedInstance,
};
use fillin_core::solvers::{
    exact_fillin_branch, exact_fillin_ordering_oracle, exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy,
    SolverLimits, VertexCover,
};
use fillin_core::transfer::{
    vc_via_completion, vc_via_fillin, ExactSplitProcedure, GreedyProcedure, TransferConfig, TransferMode,
};
use fillin_core::{
    elimination_fill, generate, is_chordal, mcs_ordering, verify_fillin, EliminationOrdering, FillIn, Graph,
};
use rand::Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn limits() -> SolverLimits {
    SolverLimits::default()
}

fn tau(g: &Graph) -> usize {
    exact_vertex_cover(g, &limits()).unwrap().0.len()
}

fn elimination_fills(h: &Graph, random: usize, seed: u64) -> Vec<(String, FillIn)> {
    let mut out: Vec<(String, FillIn)> = GreedyStrategy::ALL
        .iter()
        .map(|&s| (s.name().to_string(), greedy_minfill_heuristic(h, s).fill))
        .collect();
    out.push(("mcs".into(), elimination_fill(h, &mcs_ordering(h).reversed()).unwrap()));
    let mut rng = generate::rng(seed);
    for i in 0..random {
        let order = generate::random_ordering(h.vertex_count(), &mut rng);
        out.push((format!("random-{i}"), elimination_fill(h, &order).unwrap()));
    }
    out
}

fn exact_window() -> Outcome {
    let mut graphs = 0;
    for n in 1..=2 {
        for g in generate::all_graphs(n) {
            let inst = reduce_primitive(&g).unwrap();
            let t = brute_vertex_cover(&g);
            let phi = exact_fillin_ordering_oracle(&inst.host).unwrap().fill.len();
            let brute = brute_min_fill_by_subsets(&inst.host);
            ensure(phi == brute, || format!("oracles disagree on n={n}: {phi} vs {brute}"))?;
            let sq = n * n;
            ensure(t * sq <= phi && phi < (t + 1) * sq, || {
                format!(
                    "window [{}, {}) misses phi={phi} for edges {:?}",
                    t * sq,
                    (t + 1) * sq,
                    g.edge_set()
                )
            })?;
            graphs += 1;
        }
    }
    Ok(format!(
        "{graphs} labeled graphs on n <= 2; ordering oracle and subset oracle agree"
    ))
}

fn property_window() -> Outcome {
    let cases: Vec<(usize, u64)> = (0..240).map(|i| (3 + i % 6, 1000 + i as u64)).collect();
    let checked: Result<Vec<usize>, String> = cases
        .par_iter()
        .map(|&(n, seed)| {
            let mut rng = generate::rng(seed);
            let p = rng.random_range(0.1..0.8);
            let g = generate::gnp(n, p, &mut rng).unwrap();
            let inst = reduce_primitive(&g).unwrap();
            let (cover, _) = exact_vertex_cover(&g, &limits()).unwrap();
            let t = cover.len();
            let sq = n * n;
            let split = split_completion(&inst, &cover).unwrap();
            ensure(split.len() < (t + 1) * sq, || {
                format!("seed {seed}: split {} >= {}", split.len(), (t + 1) * sq)
            })?;
            for s in GreedyStrategy::ALL {
                let fill = greedy_minfill_heuristic(&inst.host, s).fill;
                let full = full_vertices(&inst, &fill).map_err(|e| format!("seed {seed}: {e}"))?;
                ensure(fill.len() >= full.len() * sq && full.len() >= t, || {
                    format!("seed {seed} {s}: |E+|={} full={} tau={t}", fill.len(), full.len())
                })?;
            }
            Ok(n)
        })
        .collect();
    let checked = checked?;
    Ok(format!("{} random graphs, n in 3..=8", checked.len()))
}

fn soundness() -> Outcome {
    // primitive gadgets on random graphs, colored gadgets on subcubic graphs
    let primitive: Vec<u64> = (0..500).collect();
    let colored: Vec<u64> = (0..500).collect();
    let count = |inst: &ReducedInstance, seed: u64| -> Result<usize, String> {
        let g = inst.source();
        let mut rng = generate::rng(seed ^ 0x5eed);
        let mut fills = elimination_fills(&inst.host, 6, seed);
        let (opt, _) = exact_vertex_cover(g, &limits()).unwrap();
        let mut bigger = opt.clone().into_vec();
        bigger.extend((0..g.vertex_count()).filter(|_| rng.random_bool(0.3)));
        for c in [opt, VertexCover::new(bigger)] {
            fills.push(("split".into(), split_completion(inst, &c).unwrap()));
        }
        let mut trials = 0;
        for (name, fill) in fills {
            let cover = full_vertices(inst, &fill).map_err(|e| format!("seed {seed} {name}: {e}"))?;
            ensure(cover.is_cover_of(g), || format!("seed {seed} {name}: not a cover"))?;
            trials += 1;
        }
        Ok(trials)
    };
    let a: Result<usize, String> = primitive
        .par_iter()
        .map(|&seed| {
            let mut rng = generate::rng(seed);
            let n = rng.random_range(1..=5);
            let g = generate::gnp(n, rng.random_range(0.2..0.9), &mut rng).unwrap();
            count(&reduce_primitive(&g).unwrap(), seed)
        })
        .sum();
    let b: Result<usize, String> = colored
        .par_iter()
        .map(|&seed| {
            let mut rng = generate::rng(seed + 7_000);
            let n = rng.random_range(1..=12);
            let g = subcubic_without_k4(n, &mut rng);
            let coloring = brooks_coloring(&g, 3).unwrap();
            count(&reduce_colored(&g, rng.random_range(1..=3), &coloring).unwrap(), seed)
        })
        .sum();
    let (a, b) = (a?, b?);
    ensure(a + b >= 10_000, || format!("only {} trials", a + b))?;
    Ok(format!(
        "{} trials ({a} primitive, {b} colored), zero non-covers",
        a + b
    ))
}

fn decision_equivalence() -> Outcome {
    let pairs: Vec<u64> = (0..240).collect();
    let results: Result<Vec<(bool, usize)>, String> = pairs
        .par_iter()
        .map(|&seed| {
            let mut rng = generate::rng(seed + 50_000);
            let n = rng.random_range(1..=8);
            let g = generate::gnp(n, rng.random_range(0.1..0.8), &mut rng).unwrap();
            let c = rng.random_range(0..=n);
            let inst = reduce_primitive(&g).unwrap();
            let t = tau(&g);
            let (opt, _) = exact_vertex_cover(&g, &limits()).unwrap();
            let mut fills = elimination_fills(&inst.host, 2, seed);
            fills.push(("split".into(), split_completion(&inst, &opt).unwrap()));
            let threshold = (c + 1) * n * n - 1;
            let mut qualifying = 0;
            for (name, fill) in &fills {
                let v = decision_check(&inst, c, fill, &limits()).map_err(|e| format!("seed {seed} {name}: {e}"))?;
                if v.qualifies {
                    qualifying += 1;
                }
                ensure(t <= c || !v.qualifies, || {
                    format!("seed {seed}: tau {t} > c {c} but {name} qualifies")
                })?;
                ensure(t > c || v.split_completion <= threshold, || {
                    format!("seed {seed}: split too large")
                })?;
            }
            ensure(t > c || qualifying > 0, || {
                format!("seed {seed}: no qualifying fill although tau <= c")
            })?;
            Ok((t <= c, fills.len()))
        })
        .collect();
    let results = results?;
    let yes = results.iter().filter(|r| r.0).count();
    let fills: usize = results.iter().map(|r| r.1).sum();
    Ok(format!(
        "{} (G, c) pairs ({yes} yes, {} no), {fills} fill-ins checked",
        results.len(),
        results.len() - yes
    ))
}

fn colored_bounds() -> Outcome {
    let mut instances = 0;
    let mut check = |g: &Graph, d: usize, b: usize| -> Result<(), String> {
        let coloring = brooks_coloring(g, d).map_err(|e| e.to_string())?;
        let q = coloring.q;
        let inst = reduce_colored(g, b, &coloring).unwrap();
        let n = g.vertex_count();
        let (cover, _) = exact_vertex_cover(g, &limits()).unwrap();
        let t = cover.len();
        let split = split_completion(&inst, &cover).unwrap().len();
        ensure(split <= b * n * t + t * t.saturating_sub(1) / 2, || {
            format!("split {split} above bn*tau + C(tau,2)")
        })?;
        let e = inst.host.edge_count();
        ensure(e < b * b * q * q * n * n, || {
            format!("|E(H)| = {e} not below b^2 d^2 n^2")
        })?;
        instances += 1;
        Ok(())
    };
    let mut rng = generate::rng(404);
    for n in 1..=14 {
        for b in 1..=4 {
            for _ in 0..3 {
                let g = subcubic_without_k4(n, &mut rng);
                check(&g, 3, b)?;
            }
        }
    }
    for n in [6, 8, 10, 12] {
        for b in 1..=3 {
            let g = generate::random_regular(n, 3, &mut rng).unwrap();
            if g.components().iter().all(|c| c.len() != 4) {
                check(&g, 3, b)?;
            }
            let g = generate::random_regular(n, 4, &mut rng).unwrap();
            if g.components().iter().all(|c| c.len() != 5) {
                check(&g, 4, b)?;
            }
        }
    }
    check(&generate::petersen(), 3, 2)?;
    Ok(format!("{instances} colored instances"))
}

fn transfer_audits() -> Outcome {
    let seeds: Vec<u64> = (0..200).collect();
    let epsilons: [Rational; 2] = [frac(1, 2), frac(1, 4)];
    let corpus: Vec<Graph> = seeds
        .iter()
        .map(|&s| {
            let mut rng = generate::rng(s + 90_000);
            let n = rng.random_range(2..=12);
            subcubic_without_k4(n, &mut rng)
        })
        .filter(|g| g.edge_count() > 0)
        .take(100)
        .collect();
    ensure(corpus.len() == 100, || "corpus too small".into())?;
    let lines: Result<Vec<usize>, String> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut lines = 0;
            for eps in epsilons {
                for mode in [TransferMode::FillIn, TransferMode::Completion] {
                    let config = TransferConfig::new(eps, 3, mode).unwrap();
                    let exact = ExactSplitProcedure::default();
                    let out = match mode {
                        TransferMode::FillIn => vc_via_fillin(g, &exact, &config),
                        TransferMode::Completion => vc_via_completion(g, &exact, &config),
                    }
                    .map_err(|e| format!("instance {i}: {e}"))?;
                    ensure(out.report.cover_size == out.report.tau, || {
                        format!("instance {i}: |C| != tau")
                    })?;
                    for r in &out.audit.records {
                        ensure(r.holds && r.status == RecordStatus::Checked, || {
                            format!("instance {i} eps {eps} {mode:?}: {r}")
                        })?;
                    }
                    lines += out.audit.len();
                }
                let config = TransferConfig::new(eps, 3, TransferMode::FillIn).unwrap();
                for s in GreedyStrategy::ALL {
                    let out =
                        vc_via_fillin(g, &GreedyProcedure(s), &config).map_err(|e| format!("instance {i}: {e}"))?;
                    let line = &out.audit.records[0];
                    ensure(line.name == "|C| <= |E+|/(bn)" && line.holds, || {
                        format!("instance {i} {s}: {line}")
                    })?;
                    ensure(out.audit.passes(), || format!("instance {i} {s}: audit failed"))?;
                }
            }
            Ok(lines)
        })
        .collect();
    let lines: usize = lines?.iter().sum();
    Ok(format!(
        "100 subcubic instances x eps in {{1/2, 1/4}} x both modes, {lines} audited lines true"
    ))
}

fn oracle_agreement() -> Outcome {
    let mut compared = 0;
    let mut rng = generate::rng(7);
    for i in 0..300 {
        let n = 4 + i % 5;
        let g = generate::gnp(n, rng.random_range(0.2..0.7), &mut rng).unwrap();
        let best = exact_fillin_ordering_oracle(&g).unwrap().fill.len();
        if best > 6 {
            continue;
        }
        let (found, _) = exact_fillin_branch(&g, 6, &limits()).map_err(|e| e.to_string())?;
        let size = found.fill().map(|f| f.len());
        ensure(size == Some(best), || {
            format!("graph {i}: branch {size:?} vs oracle {best}")
        })?;
        ensure(verify_fillin(&g, found.fill().unwrap()).is_valid(), || {
            format!("graph {i}: invalid branch fill")
        })?;
        compared += 1;
    }
    let mut exhaustive = 0;
    for n in 0..=6 {
        for g in generate::all_graphs(n) {
            ensure(is_chordal(&g) == brute_is_chordal(&g), || {
                format!("chordality mismatch on {:?}", g.edge_set())
            })?;
            exhaustive += 1;
        }
    }
    let random: Result<usize, String> = (0..10_000u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = generate::rng(seed + 123_456);
            let n = rng.random_range(6..=7);
            let g = generate::gnp(n, rng.random_range(0.2..0.8), &mut rng).unwrap();
            ensure(is_chordal(&g) == brute_is_chordal(&g), || {
                format!("chordality mismatch, seed {seed}")
            })?;
            Ok(1)
        })
        .sum();
    Ok(format!(
        "branch = oracle on {compared} graphs; chordality exact on all {exhaustive} labeled graphs n <= 6 and {} random n in {{6, 7}}",
        random?
    ))
}

fn matrix_correspondence() -> Outcome {
    let patterns: Result<usize, String> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = generate::rng(seed + 777);
            let n = rng.random_range(1..=10);
            let p = SparsePattern::random(n, rng.random_range(0.1..0.6), &mut rng);
            for _ in 0..100 {
                let order = generate::random_ordering(n, &mut rng);
                ensure(fill_equivalence_check(&p, &order).unwrap(), || {
                    format!("pattern {seed}: fill sets differ")
                })?;
            }
            Ok(100)
        })
        .sum();
    for n in 1..=10 {
        let tri = symbolic_factor(&SparsePattern::tridiagonal(n), &EliminationOrdering::identity(n)).unwrap();
        ensure(tri.fill.is_empty(), || format!("tridiagonal n={n} fills"))?;
        let arrow = SparsePattern::arrow(n);
        let center = symbolic_factor(&arrow, &EliminationOrdering::identity(n)).unwrap();
        let k = n.saturating_sub(1);
        ensure(center.fill.len() == k * k.saturating_sub(1) / 2, || {
            format!("arrow n={n}: center-first fill")
        })?;
        let leaves = EliminationOrdering::new((1..n).chain(0..1.min(n)).collect(), n).unwrap();
        ensure(symbolic_factor(&arrow, &leaves).unwrap().fill.is_empty(), || {
            format!("arrow n={n}: leaves-first fill")
        })?;
    }
    Ok(format!(
        "{} (pattern, ordering) pairs agree; tridiagonal and arrow orderings exact",
        patterns?
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("sandwich window, exact oracles, n <= 2", exact_window),
        ("sandwich window properties, n in 3..=8", property_window),
        ("full vertices always form a cover", soundness),
        ("decision equivalence on the primitive gadget", decision_equivalence),
        ("colored gadget: split bound and edge bound", colored_bounds),
        ("transfer audits", transfer_audits),
        ("oracle cross-agreement", oracle_agreement),
        ("matrix / graph fill correspondence", matrix_correspondence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[{}] PASS {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{}] FAIL {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
