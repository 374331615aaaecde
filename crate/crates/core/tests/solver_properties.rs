mod common;

use common::{arb_graph, brute_min_fill_by_permutations, brute_vertex_cover};
use fillin_core::solvers::{
    exact_fillin_branch, exact_fillin_ordering_oracle, exact_vertex_cover, greedy_minfill_heuristic, GreedyStrategy,
    SolverLimits,
};
use fillin_core::{generate, verify_fillin, EdgeSet, Graph};
use proptest::prelude::*;

fn tau(g: &Graph) -> usize {
    exact_vertex_cover(g, &SolverLimits::default()).unwrap().0.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vertex_cover_matches_subset_enumeration(g in arb_graph(12)) {
        let (cover, _) = exact_vertex_cover(&g, &SolverLimits::default()).unwrap();
        prop_assert!(cover.is_cover_of(&g));
        prop_assert_eq!(cover.len(), brute_vertex_cover(&g));
    }

    #[test]
    fn vertex_cover_monotone_under_deletion(g in arb_graph(11), pick in any::<prop::sample::Index>()) {
        let edges: Vec<_> = g.edges().collect();
        prop_assume!(!edges.is_empty());
        let drop = edges[pick.index(edges.len())];
        let smaller = Graph::new(g.vertex_count(), edges.into_iter().filter(|&e| e != drop)).unwrap();
        prop_assert!(tau(&smaller) <= tau(&g));
    }

    #[test]
    fn oracle_equals_minimum_over_permutations(g in arb_graph(7)) {
        let sol = exact_fillin_ordering_oracle(&g).unwrap();
        prop_assert!(verify_fillin(&g, &sol.fill).is_valid());
        prop_assert_eq!(sol.fill.len(), brute_min_fill_by_permutations(&g));
    }

    #[test]
    fn branch_matches_oracle_and_heuristics_dominate(g in arb_graph(8)) {
        let best = exact_fillin_ordering_oracle(&g).unwrap().fill.len();
        if best <= 6 {
            let (found, _) = exact_fillin_branch(&g, best, &SolverLimits::default()).unwrap();
            let fill = found.fill().expect("optimum within budget");
            prop_assert_eq!(fill.len(), best);
            prop_assert!(verify_fillin(&g, fill).is_valid());
        }
        for s in GreedyStrategy::ALL {
            prop_assert!(greedy_minfill_heuristic(&g, s).fill.len() >= best);
        }
    }
}

#[test]
fn parallel_branch_returns_the_same_size() {
    let mut rng = generate::rng(77);
    let seq = SolverLimits::default();
    let par = SolverLimits { workers: 3, ..seq };
    for _ in 0..30 {
        let g = generate::gnp(9, 0.3, &mut rng).unwrap();
        let best = exact_fillin_ordering_oracle(&g).unwrap().fill.len();
        if best > 5 {
            continue;
        }
        let a = exact_fillin_branch(&g, 5, &seq).unwrap().0;
        let b = exact_fillin_branch(&g, 5, &par).unwrap().0;
        assert_eq!(a.fill().map(EdgeSet::len), Some(best));
        assert_eq!(b.fill().map(EdgeSet::len), Some(best));
    }
}
