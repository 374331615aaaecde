use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::{self, Ones};
use crate::chordal::{EliminationGame, EliminationOrdering};
use crate::graph::{EdgeSet, Graph};
use crate::FillIn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyStrategy {
    /// Eliminate a vertex of minimum current degree.
    MinDegree,
    /// Eliminate a vertex whose neighborhood misses the fewest edges.
    MinFill,
}

impl GreedyStrategy {
    pub const ALL: [GreedyStrategy; 2] = [GreedyStrategy::MinDegree, GreedyStrategy::MinFill];

    pub fn name(self) -> &'static str {
        match self {
            GreedyStrategy::MinDegree => "min-degree",
            GreedyStrategy::MinFill => "min-fill",
        }
    }
}

impl fmt::Display for GreedyStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GreedyStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(GreedyStrategy::MinDegree),
            "min-fill" => Ok(GreedyStrategy::MinFill),
            other => Err(format!("unknown strategy `{other}` (expected min-degree or min-fill)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicSolution {
    pub fill: FillIn,
    pub ordering: EliminationOrdering,
}

/// Greedy elimination game. Ties go to the smallest vertex id.
///
/// Degrees and missing-pair counts are maintained incrementally: every
/// change is a vertex removal or a single edge insertion, and each has an
/// exact local effect on the counts.
pub fn greedy_minfill_heuristic(g: &Graph, strategy: GreedyStrategy) -> HeuristicSolution {
    let n = g.vertex_count();
    let mut game = EliminationGame::new(g);
    let mut degree: Vec<usize> = (0..n).map(|v| game.degree(v)).collect();
    let mut missing: Vec<usize> = match strategy {
        GreedyStrategy::MinFill => (0..n).map(|v| game.missing_pairs(v)).collect(),
        GreedyStrategy::MinDegree => Vec::new(),
    };
    let mut order = Vec::with_capacity(n);
    let mut fill = Vec::new();
    let mut nbrs = vec![0u64; game.rows.stride()];

    for _ in 0..n {
        let key = |v: usize| match strategy {
            GreedyStrategy::MinDegree => degree[v],
            GreedyStrategy::MinFill => missing[v],
        };
        let v = (0..n)
            .filter(|&v| game.is_alive(v))
            .min_by_key(|&v| (key(v), v))
            .expect("a live vertex remains");
        order.push(v);

        nbrs.copy_from_slice(game.rows.row(v));
        // drop v
        for x in Ones::new(&nbrs) {
            if strategy == GreedyStrategy::MinFill {
                // pairs (v, y) with y in N(x) \ N[v]
                let lost = bitset::count_and_not(game.rows.row(x), game.rows.row(x), &nbrs) - 1;
                missing[x] -= lost;
            }
            degree[x] -= 1;
            game.rows.clear(x, v);
        }
        game.rows.row_mut(v).fill(0);
        bitset::clear_bit(&mut game.alive, v);

        // clique the old neighborhood one edge at a time
        let members: Vec<usize> = Ones::new(&nbrs).collect();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if game.rows.get(a, b) {
                    continue;
                }
                if strategy == GreedyStrategy::MinFill {
                    let (ra, rb) = (game.rows.row(a), game.rows.row(b));
                    let gain_a = bitset::count_and_not(ra, ra, rb);
                    let gain_b = bitset::count_and_not(rb, rb, ra);
                    let common: Vec<usize> = ra
                        .iter()
                        .zip(rb)
                        .enumerate()
                        .flat_map(|(i, (x, y))| {
                            let mut w = x & y;
                            std::iter::from_fn(move || {
                                (w != 0).then(|| {
                                    let bit = w.trailing_zeros() as usize;
                                    w &= w - 1;
                                    i * 64 + bit
                                })
                            })
                        })
                        .collect();
                    for x in common {
                        missing[x] -= 1;
                    }
                    missing[a] += gain_a;
                    missing[b] += gain_b;
                }
                game.rows.set_sym(a, b);
                degree[a] += 1;
                degree[b] += 1;
                fill.push((a, b));
            }
        }
        debug_assert!(
            strategy == GreedyStrategy::MinDegree || members.iter().all(|&x| missing[x] == game.missing_pairs(x))
        );
    }

    HeuristicSolution {
        fill: fill.into_iter().collect::<EdgeSet>(),
        ordering: EliminationOrdering::new(order, n).expect("each vertex eliminated once"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{elimination_fill, verify_fillin};
    use crate::generate;
    use crate::solvers::exact_fillin_ordering_oracle;

    #[test]
    fn examples() {
        let tree = Graph::new(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        assert!(greedy_minfill_heuristic(&tree, GreedyStrategy::MinFill).fill.is_empty());
        for s in GreedyStrategy::ALL {
            assert_eq!(greedy_minfill_heuristic(&generate::cycle(4), s).fill.len(), 1);
        }
        assert_eq!(
            greedy_minfill_heuristic(&generate::cycle(5), GreedyStrategy::MinFill)
                .fill
                .len(),
            2
        );
    }

    #[test]
    fn chordal_inputs_get_zero_fill_under_min_fill() {
        let mut rng = generate::rng(8);
        for _ in 0..50 {
            let g = generate::gnp(9, 0.4, &mut rng).unwrap();
            let completed = g
                .add_edges(&greedy_minfill_heuristic(&g, GreedyStrategy::MinDegree).fill)
                .unwrap();
            assert!(greedy_minfill_heuristic(&completed, GreedyStrategy::MinFill)
                .fill
                .is_empty());
        }
    }

    #[test]
    fn matches_its_own_ordering_and_dominates_the_optimum() {
        let mut rng = generate::rng(9);
        for _ in 0..100 {
            let g = generate::gnp(9, 0.35, &mut rng).unwrap();
            let best = exact_fillin_ordering_oracle(&g).unwrap().fill.len();
            for s in GreedyStrategy::ALL {
                let sol = greedy_minfill_heuristic(&g, s);
                assert!(verify_fillin(&g, &sol.fill).is_valid());
                assert_eq!(elimination_fill(&g, &sol.ordering).unwrap(), sol.fill);
                assert!(sol.fill.len() >= best);
            }
        }
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in GreedyStrategy::ALL {
            assert_eq!(s.name().parse::<GreedyStrategy>().unwrap(), s);
        }
        assert!("min-width".parse::<GreedyStrategy>().is_err());
    }
}
