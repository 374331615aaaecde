mod common;

use common::subcubic_without_k4;
use fillin_core::audit::{frac, RecordStatus};
use fillin_core::matrix::{
    fill_equivalence_check, graph_from_pattern, read_matrix_market, symbolic_factor, write_matrix_market, SparsePattern,
};
use fillin_core::solvers::GreedyStrategy;
use fillin_core::transfer::{
    vc_via_completion, vc_via_fillin, ExactSplitProcedure, GreedyProcedure, TransferConfig, TransferMode,
};
use fillin_core::{generate, EliminationOrdering};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn exact_procedures_recover_tau(seed in any::<u64>(), n in 1usize..11, quarter in any::<bool>()) {
        let g = subcubic_without_k4(n, &mut generate::rng(seed));
        let eps = if quarter { frac(1, 4) } else { frac(1, 2) };
        for mode in [TransferMode::FillIn, TransferMode::Completion] {
            let config = TransferConfig::new(eps, 3, mode).unwrap();
            let out = match mode {
                TransferMode::FillIn => vc_via_fillin(&g, &ExactSplitProcedure::default(), &config),
                TransferMode::Completion => vc_via_completion(&g, &ExactSplitProcedure::default(), &config),
            }.unwrap();
            prop_assert!(out.cover.is_cover_of(&g));
            prop_assert_eq!(out.report.cover_size, out.report.tau);
            prop_assert!(out.audit.records.iter().all(|r| r.holds || r.status == RecordStatus::Degenerate),
                "{}", out.audit.to_text());
        }
    }

    #[test]
    fn heuristic_procedures_satisfy_the_accounting_line(seed in any::<u64>(), n in 2usize..11) {
        let g = subcubic_without_k4(n, &mut generate::rng(seed));
        let config = TransferConfig::new(frac(1, 2), 3, TransferMode::FillIn).unwrap();
        for s in GreedyStrategy::ALL {
            let out = vc_via_fillin(&g, &GreedyProcedure(s), &config).unwrap();
            prop_assert!(out.cover.is_cover_of(&g));
            let line = &out.audit.records[0];
            prop_assert!(line.name.starts_with("|C| <= |E+|/(bn)") && line.pass);
            prop_assert!(out.audit.passes(), "{}", out.audit.to_text());
        }
    }

    #[test]
    fn symbolic_factor_matches_elimination_game(seed in any::<u64>(), n in 0usize..11, density in 0.0f64..0.7) {
        let mut rng = generate::rng(seed);
        let p = SparsePattern::random(n, density, &mut rng);
        let g = graph_from_pattern(&p);
        for _ in 0..5 {
            let order = generate::random_ordering(n, &mut rng);
            prop_assert!(fill_equivalence_check(&p, &order).unwrap());
            let f = symbolic_factor(&p, &order).unwrap();
            prop_assert_eq!(f.nonzeros, 2 * (g.edge_count() + f.fill.len()) + n);
        }
        prop_assert_eq!(read_matrix_market(&write_matrix_market(&p)).unwrap(), p);
    }
}

#[test]
fn c6_lifted_to_degree_three() {
    let config = TransferConfig::new(frac(1, 2), 3, TransferMode::FillIn).unwrap();
    assert_eq!(config.b(), 2);
    let out = vc_via_fillin(&generate::cycle(6), &ExactSplitProcedure::default(), &config).unwrap();
    assert_eq!(out.cover.len(), 3);
    assert!(out.audit.passes());
}

#[test]
fn overridden_b_marks_config_lines_conditional() {
    let config = TransferConfig::new(frac(1, 2), 3, TransferMode::FillIn)
        .unwrap()
        .with_b(1)
        .unwrap();
    let out = vc_via_fillin(&generate::petersen(), &ExactSplitProcedure::default(), &config).unwrap();
    let line = out.audit.records.iter().find(|r| r.name == "b >= 1/eps").unwrap();
    assert_eq!(line.status, RecordStatus::ConditionNotMet);
    assert!(!line.holds);
    assert!(out.audit.passes());
}

#[test]
fn arrow_orderings() {
    let arrow = SparsePattern::arrow(6);
    assert_eq!(
        symbolic_factor(&arrow, &EliminationOrdering::identity(6))
            .unwrap()
            .fill
            .len(),
        10
    );
    let leaves_first = EliminationOrdering::new(vec![5, 4, 3, 2, 1, 0], 6).unwrap();
    assert!(symbolic_factor(&arrow, &leaves_first).unwrap().fill.is_empty());
}
