//! Sparse symmetric patterns, symbolic Cholesky, and Matrix Market I/O.
//!
//! Eliminating row/column `v` of a symmetric matrix makes every pair of
//! remaining rows that are nonzero in column `v` nonzero, which is the
//! elimination game on the pattern graph. [`symbolic_factor`] computes the
//! factor structure column by column through the elimination tree instead, so
//! the two can be cross-checked.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chordal::{elimination_fill, EliminationOrdering};
use crate::graph::{ordered, EdgeSet, Graph, GraphError};

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("expected `%%MatrixMarket matrix coordinate <field> symmetric`, got `{0}`")]
    BadHeader(String),
    #[error("matrix is {rows} x {cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry ({row}, {col}) outside a {n} x {n} matrix")]
    OutOfRange { row: usize, col: usize, n: usize },
    #[error("size line declares {declared} entries but {found} were read")]
    EntryCountMismatch { declared: usize, found: usize },
    #[error("diagonal position ({0}, {0}) cannot be stored in a pattern")]
    Diagonal(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Off-diagonal nonzero positions of a symmetric `n x n` matrix, stored as `(row, col)` with `row < col`.
/// The diagonal is taken to be nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePattern {
    n: usize,
    upper: BTreeSet<(usize, usize)>,
}

impl SparsePattern {
    /// Positions may be given in either triangle; they are folded into the upper one.
    pub fn new<I>(n: usize, positions: I) -> Result<Self, MatrixError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut upper = BTreeSet::new();
        for (row, col) in positions {
            if row >= n || col >= n {
                return Err(MatrixError::OutOfRange { row, col, n });
            }
            if row == col {
                return Err(MatrixError::Diagonal(row));
            }
            upper.insert(ordered(row, col));
        }
        Ok(SparsePattern { n, upper })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.upper.iter().copied()
    }

    pub fn off_diagonal_count(&self) -> usize {
        self.upper.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        i != j && self.upper.contains(&ordered(i, j))
    }

    pub fn tridiagonal(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("in range")
    }

    /// Dense first row and column.
    pub fn arrow(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (0, i))).expect("in range")
    }

    /// Each off-diagonal position independently with probability `density`.
    pub fn random(n: usize, density: f64, rng: &mut impl Rng) -> Self {
        let mut upper = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(density) {
                    upper.insert((i, j));
                }
            }
        }
        SparsePattern { n, upper }
    }

    pub fn from_graph(g: &Graph) -> Self {
        SparsePattern {
            n: g.vertex_count(),
            upper: g.edges().collect(),
        }
    }
}

/// One vertex per row, one edge per stored off-diagonal position.
pub fn graph_from_pattern(p: &SparsePattern) -> Graph {
    Graph::new(p.n, p.positions()).expect("pattern positions are valid edges")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicFactor {
    /// Positions that start as zero and become nonzero, in original row indices.
    pub fill: EdgeSet,
    /// Nonzeros of the filled symmetric matrix, diagonal included.
    pub nonzeros: usize,
}

/// Symbolic Cholesky of `p` with rows and columns eliminated in `ordering`.
///
/// Column `j` of the factor has the structure of column `j` of the permuted
/// matrix below the diagonal, merged with the structures of its children in
/// the elimination tree (less `j` itself). The parent of a column is its
/// first off-diagonal row. Numerical cancellation is ignored.
pub fn symbolic_factor(p: &SparsePattern, ordering: &EliminationOrdering) -> Result<SymbolicFactor, MatrixError> {
    let n = p.n;
    let ordering = EliminationOrdering::new(ordering.as_slice().to_vec(), n)?;
    let pos = ordering.positions();
    let order = ordering.as_slice();

    // lower-triangular structure of the permuted matrix, by column
    let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (a, b) in p.positions() {
        let (i, j) = (pos[a], pos[b]);
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        lower[lo].push(hi);
    }

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut structure: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for j in 0..n {
        let mut col: BTreeSet<usize> = lower[j].iter().copied().collect();
        for &c in &children[j] {
            col.extend(structure[c].iter().copied().filter(|&r| r != j));
        }
        if let Some(&parent) = col.first() {
            children[parent].push(j);
        }
        structure[j] = col;
    }

    let mut fill = EdgeSet::new();
    let mut factor_offdiag = 0;
    for (j, col) in structure.iter().enumerate() {
        factor_offdiag += col.len();
        for &i in col {
            let (a, b) = (order[i], order[j]);
            if !p.contains(a, b) {
                fill.insert(a, b);
            }
        }
    }
    debug_assert_eq!(factor_offdiag, p.off_diagonal_count() + fill.len());
    Ok(SymbolicFactor {
        nonzeros: n + 2 * factor_offdiag,
        fill,
    })
}

/// Whether symbolic factorization and the elimination game agree on the fill under `ordering`.
pub fn fill_equivalence_check(p: &SparsePattern, ordering: &EliminationOrdering) -> Result<bool, MatrixError> {
    let symbolic = symbolic_factor(p, ordering)?;
    let game = elimination_fill(&graph_from_pattern(p), ordering)?;
    Ok(symbolic.fill == game)
}

const FIELDS: [(&str, usize); 4] = [("real", 1), ("integer", 1), ("complex", 2), ("pattern", 0)];

/// Reads a symmetric coordinate Matrix Market file. Diagonal entries are dropped;
/// explicit zeros on the diagonal are logged, since the diagonal is assumed nonzero.
pub fn read_matrix_market(text: &str) -> Result<SparsePattern, MatrixError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| MatrixError::BadHeader(String::new()))?;
    let words: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    let values_per_entry = match words.as_slice() {
        [banner, object, format, field, symmetry]
            if banner == "%%matrixmarket"
                && object == "matrix"
                && format == "coordinate"
                && symmetry == "symmetric" =>
        {
            FIELDS
                .iter()
                .find(|(name, _)| name == field)
                .map(|&(_, k)| k)
                .ok_or_else(|| MatrixError::BadHeader(header.to_string()))?
        }
        _ => return Err(MatrixError::BadHeader(header.to_string())),
    };
    let syntax = |line: usize, message: String| MatrixError::Syntax { line, message };

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| syntax(1, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| syntax(size_line, format!("invalid size `{t}`"))))
        .collect::<Result<_, _>>()?;
    let [rows, cols, declared] = dims[..] else {
        return Err(syntax(
            size_line,
            "size line needs rows, columns and entry count".into(),
        ));
    };
    if rows != cols {
        return Err(MatrixError::NotSquare { rows, cols });
    }

    let mut positions = Vec::new();
    let mut found = 0;
    for (line, entry) in body {
        found += 1;
        let toks: Vec<&str> = entry.split_whitespace().collect();
        if toks.len() != 2 + values_per_entry {
            return Err(syntax(
                line,
                format!("expected {} fields, got {}", 2 + values_per_entry, toks.len()),
            ));
        }
        let index = |t: &str| -> Result<usize, MatrixError> {
            match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(syntax(line, format!("invalid index `{t}`"))),
            }
        };
        let (row, col) = (index(toks[0])?, index(toks[1])?);
        if row >= rows || col >= rows {
            return Err(MatrixError::OutOfRange { row, col, n: rows });
        }
        let values: Vec<f64> = toks[2..]
            .iter()
            .map(|t| t.parse().map_err(|_| syntax(line, format!("invalid value `{t}`"))))
            .collect::<Result<_, _>>()?;
        if row == col {
            if !values.is_empty() && values.iter().all(|&v| v == 0.0) {
                log::warn!(
                    "line {line}: explicit zero on the diagonal at row {}; treated as nonzero",
                    row + 1
                );
            }
            continue;
        }
        positions.push((row, col));
    }
    if found != declared {
        return Err(MatrixError::EntryCountMismatch { declared, found });
    }
    SparsePattern::new(rows, positions)
}

/// Writes the pattern, diagonal included, as the lower triangle with 1-based indices.
pub fn write_matrix_market(p: &SparsePattern) -> String {
    let mut out = String::from("%%MatrixMarket matrix coordinate pattern symmetric\n");
    let _ = writeln!(out, "{} {} {}", p.n, p.n, p.n + p.off_diagonal_count());
    let mut entries: Vec<(usize, usize)> = (0..p.n)
        .map(|i| (i, i))
        .chain(p.positions().map(|(i, j)| (j, i)))
        .collect();
    entries.sort_unstable_by_key(|&(r, c)| (c, r));
    for (r, c) in entries {
        let _ = writeln!(out, "{} {}", r + 1, c + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::is_perfect_elimination_ordering;
    use crate::generate;

    fn order(v: Vec<usize>) -> EliminationOrdering {
        let n = v.len();
        EliminationOrdering::new(v, n).unwrap()
    }

    #[test]
    fn pattern_graphs() {
        assert_eq!(graph_from_pattern(&SparsePattern::tridiagonal(5)), generate::path(5));
        assert_eq!(graph_from_pattern(&SparsePattern::arrow(5)), generate::star(4));
        assert_eq!(graph_from_pattern(&SparsePattern::new(4, []).unwrap()).edge_count(), 0);
        assert!(matches!(SparsePattern::new(3, [(1, 1)]), Err(MatrixError::Diagonal(1))));
        assert!(matches!(
            SparsePattern::new(3, [(0, 3)]),
            Err(MatrixError::OutOfRange { .. })
        ));
    }

    #[test]
    fn forced_orderings() {
        let tri = SparsePattern::tridiagonal(5);
        let f = symbolic_factor(&tri, &EliminationOrdering::identity(5)).unwrap();
        assert!(f.fill.is_empty());
        assert_eq!(f.nonzeros, 5 + 2 * 4);

        let arrow = SparsePattern::arrow(5);
        let center_first = symbolic_factor(&arrow, &EliminationOrdering::identity(5)).unwrap();
        assert_eq!(center_first.fill.len(), 6);
        assert_eq!(center_first.nonzeros, 25);
        let leaves_first = symbolic_factor(&arrow, &order(vec![1, 2, 3, 4, 0])).unwrap();
        assert!(leaves_first.fill.is_empty());
    }

    #[test]
    fn rejects_bad_orderings() {
        let p = SparsePattern::tridiagonal(3);
        let bad = EliminationOrdering::identity(4);
        assert!(matches!(symbolic_factor(&p, &bad), Err(MatrixError::Graph(_))));
    }

    #[test]
    fn agrees_with_elimination_game() {
        let mut rng = generate::rng(12);
        for _ in 0..100 {
            let p = SparsePattern::random(8, 0.3, &mut rng);
            let g = graph_from_pattern(&p);
            for _ in 0..10 {
                let o = generate::random_ordering(8, &mut rng);
                assert!(fill_equivalence_check(&p, &o).unwrap());
                let f = symbolic_factor(&p, &o).unwrap();
                assert_eq!(f.nonzeros, 2 * (g.edge_count() + f.fill.len()) + 8);
                assert_eq!(f.fill.is_empty(), is_perfect_elimination_ordering(&g, &o));
            }
        }
        assert!(
            fill_equivalence_check(&SparsePattern::new(0, []).unwrap(), &EliminationOrdering::identity(0)).unwrap()
        );
    }

    #[test]
    fn matrix_market_round_trip() {
        let p = SparsePattern::random(7, 0.4, &mut generate::rng(1));
        let text = write_matrix_market(&p);
        assert_eq!(read_matrix_market(&text).unwrap(), p);
    }

    #[test]
    fn matrix_market_fields_and_errors() {
        let real = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 2.0\n2 1 -1.5\n3 2 0.5\n";
        assert_eq!(read_matrix_market(real).unwrap(), SparsePattern::tridiagonal(3));
        let complex = "%%MatrixMarket matrix coordinate complex symmetric\n2 2 1\n2 1 1.0 0.0\n";
        assert_eq!(read_matrix_market(complex).unwrap().off_diagonal_count(), 1);
        let zero_diag = "%%MatrixMarket matrix coordinate integer symmetric\n2 2 2\n1 1 0\n2 1 3\n";
        assert_eq!(read_matrix_market(zero_diag).unwrap().off_diagonal_count(), 1);

        let general = "%%MatrixMarket matrix coordinate real general\n2 2 0\n";
        assert!(matches!(read_matrix_market(general), Err(MatrixError::BadHeader(_))));
        let rect = "%%MatrixMarket matrix coordinate pattern symmetric\n2 3 0\n";
        assert!(matches!(read_matrix_market(rect), Err(MatrixError::NotSquare { .. })));
        let short = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n";
        assert!(matches!(
            read_matrix_market(short),
            Err(MatrixError::EntryCountMismatch { .. })
        ));
        let missing_value = "%%MatrixMarket matrix coordinate real symmetric\n3 3 1\n2 1\n";
        assert!(matches!(
            read_matrix_market(missing_value),
            Err(MatrixError::Syntax { line: 3, .. })
        ));
        let oob = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n4 1\n";
        assert!(matches!(read_matrix_market(oob), Err(MatrixError::OutOfRange { .. })));
    }
}
