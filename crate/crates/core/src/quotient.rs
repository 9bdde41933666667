//! Equitable partitions and quotient matrices.
//!
//! For a partition of the index set into cells `X_1..X_m` with characteristic
//! matrix `S` and `Lambda = S^T S = diag(|X_i|)`, the left quotient is
//! `Lambda^{-1} S^T A S` and the symmetric quotient
//! `Lambda^{-1/2} S^T A S Lambda^{-1/2}`. Both share the spectral radius of `A`
//! when every block has constant row sums.
//!
//! For `H = G([a]*s + [b], v)` the `s` equal paths fold onto a single weighted
//! path, which gives the graph `G_s(v, a, b)` built by [`build_gs`].

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::matrix::{RationalMatrix, SurdMatrix};
use crate::number::{int, Alpha, Rational, Surd};
use crate::partition::PendantShape;
use crate::wgraph::{coalesce, GraphError, PendantGraph, RootedGraph, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuotientError {
    #[error("cells do not partition 0..{order}: {reason}")]
    MalformedCells { order: usize, reason: String },
    #[error("matrix of order {matrix} against cells over {cells} indices")]
    DimensionMismatch { matrix: usize, cells: usize },
    #[error("not equitable: {0:?}")]
    NotEquitable(Violation),
    #[error("pendant structure mismatch: {0}")]
    StructureMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A block `A[X_i : X_j]` whose row sums differ at `row`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub row_cell: usize,
    pub col_cell: usize,
    pub row: usize,
}

/// Disjoint nonempty cells covering `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitablePartition {
    cells: Vec<Vec<usize>>,
    order: usize,
}

impl EquitablePartition {
    pub fn new(cells: Vec<Vec<usize>>, order: usize) -> Result<Self, QuotientError> {
        let malformed = |reason: String| QuotientError::MalformedCells { order, reason };
        let mut seen = vec![false; order];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(malformed(format!("cell {i} is empty")));
            }
            for &x in cell {
                if x >= order {
                    return Err(malformed(format!("index {x} out of range")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(malformed(format!("index {x} appears twice")));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(malformed(format!("index {x} is not covered")));
        }
        Ok(EquitablePartition { cells, order })
    }

    pub fn singletons(order: usize) -> Self {
        EquitablePartition {
            cells: (0..order).map(|i| vec![i]).collect(),
            order,
        }
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// The `n x m` 0/1 matrix with `S[x][j] = 1` iff `x` lies in cell `j`.
    pub fn characteristic_matrix(&self) -> RationalMatrix {
        let mut s = RationalMatrix::zeros(self.order, self.cells.len());
        for (j, cell) in self.cells.iter().enumerate() {
            for &x in cell {
                s[(x, j)] = int(1);
            }
        }
        s
    }
}

/// `Ok(None)` when every block has constant row sums, otherwise the first
/// offending block.
pub fn check_equitable(
    a: &RationalMatrix,
    cells: &EquitablePartition,
) -> Result<Option<Violation>, QuotientError> {
    if !a.is_square() || a.rows() != cells.order() {
        return Err(QuotientError::DimensionMismatch {
            matrix: a.rows(),
            cells: cells.order(),
        });
    }
    for (i, rows) in cells.cells().iter().enumerate() {
        for (j, cols) in cells.cells().iter().enumerate() {
            let row_sum = |r: usize| {
                cols.iter()
                    .fold(Rational::zero(), |acc, &c| acc + &a[(r, c)])
            };
            let first = row_sum(rows[0]);
            if let Some(&row) = rows[1..].iter().find(|&&r| row_sum(r) != first) {
                return Ok(Some(Violation {
                    row_cell: i,
                    col_cell: j,
                    row,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientPair {
    /// `S`, `n x m`.
    pub characteristic: RationalMatrix,
    /// Diagonal of `Lambda`.
    pub sizes: Vec<usize>,
    /// `Lambda^{-1} S^T A S`.
    pub left: RationalMatrix,
    /// `Lambda^{-1/2} S^T A S Lambda^{-1/2}`.
    pub symmetric: SurdMatrix,
}

pub fn quotients(
    a: &RationalMatrix,
    cells: &EquitablePartition,
) -> Result<QuotientPair, QuotientError> {
    if let Some(v) = check_equitable(a, cells)? {
        return Err(QuotientError::NotEquitable(v));
    }
    let s = cells.characteristic_matrix();
    let block_sums = s.transpose().mul(a).mul(&s);
    let sizes = cells.sizes();
    let m = sizes.len();
    let left = RationalMatrix::from_fn(m, m, |i, j| {
        &block_sums[(i, j)] / int(sizes[i] as i64)
    });
    let symmetric = SurdMatrix::from_fn(m, m, |i, j| {
        let prod = (sizes[i] * sizes[j]) as u64;
        Surd::new(&block_sums[(i, j)] / int(prod as i64), prod)
    });
    Ok(QuotientPair {
        characteristic: s,
        sizes,
        left,
        symmetric,
    })
}

/// The partition `pi` of `V(H)` for `H = G([a]*s + [b], v)`.
///
/// Cell `C_d` (for `d = 1..a`) holds the vertices at distance `d` from the
/// root on the `s` paths of length `a`; every other vertex is a singleton.
/// Cells come out as `C_1, ..., C_a`, then the root, then the remaining
/// vertices by id.
pub fn pendant_path_partition(
    h: &PendantGraph,
    shape: PendantShape,
) -> Result<EquitablePartition, QuotientError> {
    let PendantShape { a, b, s } = shape;
    if a == 0 || s == 0 {
        return Err(QuotientError::StructureMismatch(
            "need a >= 1 and s >= 1".into(),
        ));
    }
    let mut expected = shape.lengths();
    let mut actual = h.lengths();
    expected.sort_unstable();
    actual.sort_unstable();
    if expected != actual {
        return Err(QuotientError::StructureMismatch(format!(
            "paths {:?} do not match [{a}]*{s} + [{b}]",
            h.lengths()
        )));
    }
    let graph = h.graph();
    for path in &h.paths {
        let mut prev = h.root();
        for &x in path {
            if graph.weight(prev, x).is_none() {
                return Err(QuotientError::StructureMismatch(format!(
                    "recorded path vertex {x} is not adjacent to {prev}"
                )));
            }
            prev = x;
        }
    }
    let grouped: Vec<&Vec<usize>> = h.paths.iter().filter(|p| p.len() == a).take(s).collect();
    let mut cells: Vec<Vec<usize>> = (0..a)
        .map(|d| grouped.iter().map(|p| p[d]).collect())
        .collect();
    cells.push(vec![h.root()]);
    let mut in_cell = vec![false; graph.order()];
    for &x in cells.iter().flatten() {
        in_cell[x] = true;
    }
    cells.extend((0..graph.order()).filter(|&x| !in_cell[x]).map(|x| vec![x]));
    EquitablePartition::new(cells, graph.order())
}

/// `Q'(G) = alpha D'(G) + (1 - alpha) A(G)`, where `D'` raises the root's
/// degree to `d_G(v) + s - 1`.
pub fn q_prime(g: &RootedGraph, alpha: &Alpha, s: usize) -> Result<RationalMatrix, QuotientError> {
    let mut m = g.graph.a_alpha_matrix(alpha)?;
    let v = g.root;
    m[(v, v)] += alpha.value() * int(s as i64 - 1);
    Ok(m)
}

/// `P_s(a, b)`: the path `0 - 1 - ... - (a + b)` with unit weights except
/// `w(a - 1, a) = sqrt(s)`.
pub fn weighted_path(a: usize, b: usize, s: usize) -> Result<WeightedGraph, QuotientError> {
    if a == 0 || s == 0 {
        return Err(QuotientError::StructureMismatch(
            "need a >= 1 and s >= 1".into(),
        ));
    }
    let mut p = WeightedGraph::path(a + b + 1)?;
    p.set_weight(a - 1, a, Surd::sqrt(s as u64))?;
    Ok(p)
}

/// `alpha D + (1 - alpha) A` of a weighted graph, combinatorial degrees.
fn alpha_mix(g: &WeightedGraph, alpha: &Alpha) -> SurdMatrix {
    let adj = g.adjacency_matrix();
    let deg = g.degree_matrix();
    let c = alpha.complement();
    SurdMatrix::from_fn(g.order(), g.order(), |i, j| {
        let off = adj[(i, j)].scale(&c);
        if i == j {
            off.checked_add(&Surd::rational(alpha.value() * &deg[(i, i)]))
                .expect("diagonal entries are rational")
        } else {
            off
        }
    })
}

/// `G_s(v, a, b)` with enough bookkeeping to line it up with the quotient of
/// `A_alpha(G([a]*s + [b], v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GsGraph {
    pub rooted: RootedGraph,
    pub base_order: usize,
    pub shape: PendantShape,
}

impl GsGraph {
    /// Weighted adjacency matrix, loops on the diagonal.
    pub fn matrix(&self) -> SurdMatrix {
        self.rooted.graph.adjacency_matrix()
    }

    /// Vertex ids in the canonical cell order of [`pendant_path_partition`].
    ///
    /// The `G` part keeps ids `0..m`; path vertex `j != a` sits at `m + j` for
    /// `j < a` and at `m + j - 1` beyond the coalesced vertex.
    pub fn canonical_order(&self) -> Vec<usize> {
        let m = self.base_order;
        let PendantShape { a, b, .. } = self.shape;
        let root = self.rooted.root;
        let mut order: Vec<usize> = (0..a).rev().map(|j| m + j).collect();
        order.push(root);
        order.extend((0..m).filter(|&x| x != root));
        order.extend((a..a + b).map(|j| m + j));
        order
    }

    pub fn canonical_matrix(&self) -> SurdMatrix {
        self.matrix().permuted(&self.canonical_order())
    }
}

/// Coalesces the graph of `Q'(G)` at `v` with the graph of
/// `alpha D(P_s(a, b)) + (1 - alpha) A(P_s(a, b))` at vertex `a`.
pub fn build_gs(
    g: &RootedGraph,
    alpha: &Alpha,
    shape: PendantShape,
) -> Result<GsGraph, QuotientError> {
    let PendantShape { a, b, s } = shape;
    let path = weighted_path(a, b, s)?;
    let g_tilde = WeightedGraph::from_matrix(&q_prime(g, alpha, s)?.to_surd());
    let p_tilde = WeightedGraph::from_matrix(&alpha_mix(&path, alpha));
    let merged = coalesce(
        &RootedGraph::new(g_tilde, g.root)?,
        &RootedGraph::new(p_tilde, a)?,
    )?;
    // D'(G) plus the path degree at `a` must give d_H(v).
    debug_assert_eq!(
        g.graph.degree(g.root) + s - 1 + path.degree(a),
        g.graph.degree(g.root) + s + usize::from(b > 0)
    );
    Ok(GsGraph {
        rooted: merged,
        base_order: g.order(),
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use crate::wgraph::{attach_paths, starlike};

    fn adjacency(g: &WeightedGraph) -> RationalMatrix {
        g.adjacency_matrix().to_rational().unwrap()
    }

    #[test]
    fn equitable_checks() {
        let k2 = adjacency(&WeightedGraph::path(2).unwrap());
        let singles = EquitablePartition::singletons(2);
        assert_eq!(check_equitable(&k2, &singles).unwrap(), None);
        let whole = EquitablePartition::new(vec![vec![0, 1]], 2).unwrap();
        assert_eq!(check_equitable(&k2, &whole).unwrap(), None);

        let p3 = adjacency(&WeightedGraph::path(3).unwrap());
        let ends = EquitablePartition::new(vec![vec![0, 2], vec![1]], 3).unwrap();
        assert_eq!(check_equitable(&p3, &ends).unwrap(), None);
        let skewed = EquitablePartition::new(vec![vec![0, 1], vec![2]], 3).unwrap();
        assert!(check_equitable(&p3, &skewed).unwrap().is_some());
        assert!(matches!(
            quotients(&p3, &skewed),
            Err(QuotientError::NotEquitable(_))
        ));
    }

    #[test]
    fn malformed_cells() {
        assert!(EquitablePartition::new(vec![vec![0], vec![0, 1]], 2).is_err());
        assert!(EquitablePartition::new(vec![vec![0]], 2).is_err());
        assert!(EquitablePartition::new(vec![vec![0, 2]], 2).is_err());
        assert!(EquitablePartition::new(vec![vec![], vec![0, 1]], 2).is_err());
        let p3 = adjacency(&WeightedGraph::path(3).unwrap());
        assert!(matches!(
            check_equitable(&p3, &EquitablePartition::singletons(2)),
            Err(QuotientError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn k2_single_cell_quotient() {
        let k2 = adjacency(&WeightedGraph::path(2).unwrap());
        let whole = EquitablePartition::new(vec![vec![0, 1]], 2).unwrap();
        let q = quotients(&k2, &whole).unwrap();
        assert_eq!(q.left, RationalMatrix::from_rows(vec![vec![int(1)]]));
        assert_eq!(q.symmetric, SurdMatrix::from_rows(vec![vec![Surd::one()]]));
        assert_eq!(q.sizes, vec![2]);
    }

    #[test]
    fn claw_partition() {
        let claw = starlike(&[1, 1, 1]).unwrap();
        let shape = PendantShape { a: 1, b: 0, s: 3 };
        let pi = pendant_path_partition(&claw, shape).unwrap();
        assert_eq!(pi.cells(), &[vec![1, 2, 3], vec![0]]);
        let q = quotients(&adjacency(claw.graph()), &pi).unwrap();
        assert_eq!(q.symmetric[(0, 1)], Surd::sqrt(3));
        assert_eq!(q.left[(0, 1)], int(1));
        assert_eq!(q.left[(1, 0)], int(3));
    }

    #[test]
    fn single_path_partition_is_singletons() {
        let c3 = RootedGraph::new(WeightedGraph::cycle(3).unwrap(), 0).unwrap();
        let h = attach_paths(&c3, &[3]).unwrap();
        let pi = pendant_path_partition(&h, PendantShape { a: 3, b: 0, s: 1 }).unwrap();
        assert!(pi.sizes().iter().all(|&n| n == 1));
        let m = h.graph().a_alpha_matrix(&Alpha::ratio(1, 4)).unwrap();
        let q = quotients(&m, &pi).unwrap();
        assert!(q.symmetric.to_rational().is_some());
    }

    #[test]
    fn structure_mismatch() {
        let h = starlike(&[1, 2, 2]).unwrap();
        assert!(matches!(
            pendant_path_partition(&h, PendantShape { a: 2, b: 2, s: 1 }),
            Err(QuotientError::StructureMismatch(_))
        ));
    }

    #[test]
    fn fig1_q_prime() {
        let c3 = RootedGraph::new(WeightedGraph::cycle(3).unwrap(), 0).unwrap();
        let a = Alpha::ratio(1, 3);
        let q = q_prime(&c3, &a, 3).unwrap();
        let c = rat(2, 3);
        let expected = RationalMatrix::from_rows(vec![
            vec![rat(4, 3), c.clone(), c.clone()],
            vec![c.clone(), rat(2, 3), c.clone()],
            vec![c.clone(), c.clone(), rat(2, 3)],
        ]);
        assert_eq!(q, expected);
    }

    #[test]
    fn gs_loop_at_root_and_trivial_case() {
        let c3 = RootedGraph::new(WeightedGraph::cycle(3).unwrap(), 0).unwrap();
        let a = Alpha::ratio(1, 3);
        let gs = build_gs(&c3, &a, PendantShape { a: 2, b: 1, s: 3 }).unwrap();
        assert_eq!(gs.rooted.graph.loop_weight(0), Some(&Surd::rational(int(2))));

        let gs = build_gs(
            &RootedGraph::trivial(),
            &Alpha::zero(),
            PendantShape { a: 4, b: 0, s: 2 },
        )
        .unwrap();
        let g = &gs.rooted.graph;
        assert_eq!(g.order(), 5);
        assert!(g.entries().all(|(u, v, _)| u != v));
        // Root 0 is path vertex 4; path vertex 3 got id 4.
        assert_eq!(g.weight(0, 4), Some(&Surd::sqrt(2)));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn gs_equals_canonical_quotient() {
        let k4e = RootedGraph::new(WeightedGraph::k4_minus_edge(), 0).unwrap();
        for shape in [
            PendantShape { a: 2, b: 1, s: 3 },
            PendantShape { a: 1, b: 3, s: 2 },
            PendantShape { a: 3, b: 0, s: 2 },
        ] {
            for alpha in Alpha::quarter_grid() {
                let h = attach_paths(&k4e, &shape.lengths()).unwrap();
                let m = h.graph().a_alpha_matrix(&alpha).unwrap();
                let pi = pendant_path_partition(&h, shape).unwrap();
                let q = quotients(&m, &pi).unwrap();
                let gs = build_gs(&k4e, &alpha, shape).unwrap();
                assert_eq!(gs.canonical_matrix(), q.symmetric, "{shape:?} at {alpha}");
            }
        }
    }
}
