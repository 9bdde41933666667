//! Weighted undirected graphs with loops.
//!
//! A loop of weight `w` sits on the diagonal of the adjacency matrix as `w`
//! (not `2w`) and does not count toward the combinatorial degree.

use std::collections::{BTreeMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::matrix::{RationalMatrix, SurdMatrix};
use crate::number::{int, Alpha, ParseRationalError, Rational, Surd};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph of order {order}")]
    InvalidVertex { vertex: usize, order: usize },
    #[error("no edge between {0} and {1}")]
    MissingEdge(usize, usize),
    #[error("a cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("a path needs at least 1 vertex")]
    EmptyPath,
    #[error("negative weight {weight} on ({u}, {v})")]
    NegativeWeight { u: usize, v: usize, weight: String },
    #[error("A_alpha needs a simple unit-weight graph: {0}")]
    NotSimple(String),
    #[error("loop weights {0} and {1} at the merged root cannot be added exactly")]
    IncompatibleLoops(String, String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is disconnected")]
    Disconnected,
}

/// Undirected graph on vertices `0..order` with symmetric weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    order: usize,
    // Keys are (min, max); a key (u, u) is a loop.
    weights: BTreeMap<(usize, usize), Surd>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl WeightedGraph {
    pub fn empty(order: usize) -> Self {
        WeightedGraph {
            order,
            weights: BTreeMap::new(),
        }
    }

    /// `K_1`.
    pub fn trivial() -> Self {
        WeightedGraph::empty(1)
    }

    /// `P_n` on `n` vertices.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyPath);
        }
        let mut g = WeightedGraph::empty(n);
        for i in 1..n {
            g.add_unit_edge(i - 1, i)?;
        }
        Ok(g)
    }

    /// `C_n` on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooShort(n));
        }
        let mut g = WeightedGraph::path(n)?;
        g.add_unit_edge(n - 1, 0)?;
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = WeightedGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.weights.insert((u, v), Surd::one());
            }
        }
        g
    }

    /// `K_4` minus the edge `{2, 3}`; vertices 0 and 1 have degree 3.
    pub fn k4_minus_edge() -> Self {
        let mut g = WeightedGraph::complete(4);
        g.weights.remove(&(2, 3));
        g
    }

    /// Builtin unit-weight graphs: `k1`, `p2`..`p9`, `c3`..`c9`, `k4e`.
    pub fn builtin(name: &str) -> Option<Self> {
        let name = name.to_ascii_lowercase();
        let size = |prefix: &str| {
            name.strip_prefix(prefix)
                .and_then(|rest| rest.parse::<usize>().ok())
        };
        match name.as_str() {
            "k1" => Some(WeightedGraph::trivial()),
            "k4e" => Some(WeightedGraph::k4_minus_edge()),
            _ => match (size("p"), size("c")) {
                (Some(n), _) if (2..=9).contains(&n) => WeightedGraph::path(n).ok(),
                (_, Some(n)) if (3..=9).contains(&n) => WeightedGraph::cycle(n).ok(),
                _ => None,
            },
        }
    }

    /// Weighted graph `G(A)` of a symmetric matrix.
    pub fn from_matrix(m: &SurdMatrix) -> Self {
        assert!(m.is_square());
        let mut g = WeightedGraph::empty(m.rows());
        for u in 0..m.rows() {
            for v in u..m.rows() {
                debug_assert_eq!(m[(u, v)], m[(v, u)]);
                if !m[(u, v)].is_zero() {
                    g.weights.insert((u, v), m[(u, v)].clone());
                }
            }
        }
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.order {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex {
                vertex: v,
                order: self.order,
            })
        }
    }

    /// Sets `w(u, v)`; a zero weight removes the edge.
    pub fn set_weight(&mut self, u: usize, v: usize, w: Surd) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if w.coef() < &Rational::zero() {
            return Err(GraphError::NegativeWeight {
                u,
                v,
                weight: w.to_string(),
            });
        }
        if w.is_zero() {
            self.weights.remove(&key(u, v));
        } else {
            self.weights.insert(key(u, v), w);
        }
        Ok(())
    }

    pub fn add_unit_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.set_weight(u, v, Surd::one())
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Surd> {
        self.weights.get(&key(u, v))
    }

    pub fn loop_weight(&self, u: usize) -> Option<&Surd> {
        self.weight(u, u)
    }

    /// All weighted pairs `(u, v, w)` with `u <= v`, loops included.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Surd)> {
        self.weights.iter().map(|(&(u, v), w)| (u, v, w))
    }

    /// Non-loop edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.weights.keys().filter(|(u, v)| u != v).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&v| v != u && self.weights.contains_key(&key(u, v)))
            .collect()
    }

    /// Number of incident non-loop edges, whatever their weights.
    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).len()
    }

    /// Unit weights and no loops.
    pub fn is_simple_unit(&self) -> bool {
        self.weights
            .iter()
            .all(|(&(u, v), w)| u != v && *w == Surd::one())
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let mut seen = vec![false; self.order];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Loopless connected graph with maximum degree 2 and no cycle.
    pub fn is_path_graph(&self) -> bool {
        self.is_connected()
            && self.weights.keys().all(|(u, v)| u != v)
            && self.edge_count() + 1 == self.order
            && (0..self.order).all(|u| self.degree(u) <= 2)
    }

    /// `w(u, v)` off the diagonal and loop weights on it.
    pub fn adjacency_matrix(&self) -> SurdMatrix {
        let mut m = SurdMatrix::filled(self.order, self.order, Surd::zero());
        for (&(u, v), w) in &self.weights {
            m[(u, v)] = w.clone();
            m[(v, u)] = w.clone();
        }
        m
    }

    /// Diagonal of combinatorial degrees.
    pub fn degree_matrix(&self) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.order, self.order);
        for u in 0..self.order {
            m[(u, u)] = int(self.degree(u) as i64);
        }
        m
    }

    /// `alpha D + (1 - alpha) A` of a simple unit-weight graph.
    pub fn a_alpha_matrix(&self, alpha: &Alpha) -> Result<RationalMatrix, GraphError> {
        if !self.is_simple_unit() {
            return Err(GraphError::NotSimple(
                "found a loop or a non-unit weight".into(),
            ));
        }
        let off = alpha.complement();
        let mut m = RationalMatrix::zeros(self.order, self.order);
        for (u, v) in self.edges() {
            m[(u, v)] = off.clone();
            m[(v, u)] = off.clone();
        }
        for u in 0..self.order {
            m[(u, u)] = alpha.value() * int(self.degree(u) as i64);
        }
        Ok(m)
    }

    /// `G - u`; later vertices shift down by one.
    pub fn delete_vertex(&self, u: usize) -> Result<WeightedGraph, GraphError> {
        self.check_vertex(u)?;
        let shift = |x: usize| if x > u { x - 1 } else { x };
        let weights = self
            .weights
            .iter()
            .filter(|(&(a, b), _)| a != u && b != u)
            .map(|(&(a, b), w)| ((shift(a), shift(b)), w.clone()))
            .collect();
        Ok(WeightedGraph {
            order: self.order - 1,
            weights,
        })
    }

    /// `G - e`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<WeightedGraph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut g = self.clone();
        g.weights
            .remove(&key(u, v))
            .ok_or(GraphError::MissingEdge(u, v))?;
        Ok(g)
    }

    /// `self` followed by `other` with ids shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &WeightedGraph) -> WeightedGraph {
        let shift = self.order;
        let mut weights = self.weights.clone();
        for (&(u, v), w) in &other.weights {
            weights.insert((u + shift, v + shift), w.clone());
        }
        WeightedGraph {
            order: self.order + other.order,
            weights,
        }
    }
}

/// A graph together with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedGraph {
    pub graph: WeightedGraph,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(graph: WeightedGraph, root: usize) -> Result<Self, GraphError> {
        graph.check_vertex(root)?;
        Ok(RootedGraph { graph, root })
    }

    pub fn trivial() -> Self {
        RootedGraph {
            graph: WeightedGraph::trivial(),
            root: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.graph.order() == 1 && self.graph.entries().next().is_none()
    }
}

/// `G1(v1) . G2(v2)`: identifies the two roots.
///
/// `g1` keeps its ids and its root id; the non-root vertices of `g2` follow in
/// their original order. Loop weights at the roots add up.
pub fn coalesce(g1: &RootedGraph, g2: &RootedGraph) -> Result<RootedGraph, GraphError> {
    let n1 = g1.order();
    let r2 = g2.root;
    let map = |x: usize| -> usize {
        match x.cmp(&r2) {
            std::cmp::Ordering::Equal => g1.root,
            std::cmp::Ordering::Less => n1 + x,
            std::cmp::Ordering::Greater => n1 + x - 1,
        }
    };
    let mut graph = g1.graph.clone();
    graph.order = n1 + g2.order() - 1;
    for (u, v, w) in g2.graph.entries() {
        let (a, b) = (map(u), map(v));
        let merged = match graph.weights.get(&key(a, b)) {
            Some(existing) => existing.checked_add(w).ok_or_else(|| {
                GraphError::IncompatibleLoops(existing.to_string(), w.to_string())
            })?,
            None => w.clone(),
        };
        graph.set_weight(a, b, merged)?;
    }
    Ok(RootedGraph {
        graph,
        root: g1.root,
    })
}

/// Joins `g` and `h` by a bridge `(u, v)` of weight `w`; `h` is shifted by
/// `g.order()`.
pub fn bridge(
    g: &WeightedGraph,
    u: usize,
    h: &WeightedGraph,
    v: usize,
    w: Surd,
) -> Result<WeightedGraph, GraphError> {
    g.check_vertex(u)?;
    h.check_vertex(v)?;
    let mut joined = g.disjoint_union(h);
    joined.set_weight(u, g.order() + v, w)?;
    Ok(joined)
}

/// `G(a, v)` with the layout of every attached path recorded.
#[derive(Debug, Clone, PartialEq)]
pub struct PendantGraph {
    pub rooted: RootedGraph,
    /// Order of the graph the paths hang from; its vertices keep ids
    /// `0..base_order`.
    pub base_order: usize,
    /// Vertex ids along each attached path, nearest to the root first.
    pub paths: Vec<Vec<usize>>,
}

impl PendantGraph {
    pub fn graph(&self) -> &WeightedGraph {
        &self.rooted.graph
    }

    pub fn root(&self) -> usize {
        self.rooted.root
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.paths.iter().map(Vec::len).collect()
    }
}

/// Hangs one fresh path per entry of `lengths` at the root of `g`.
///
/// Zero lengths attach nothing. Each path is coalesced in turn at one of its
/// ends, so its vertices get consecutive ids in order of distance from the
/// root.
pub fn attach_paths(g: &RootedGraph, lengths: &[usize]) -> Result<PendantGraph, GraphError> {
    let mut current = g.clone();
    let mut paths = Vec::new();
    for &len in lengths.iter().filter(|&&l| l > 0) {
        let start = current.order();
        let path = RootedGraph::new(WeightedGraph::path(len + 1)?, 0)?;
        current = coalesce(&current, &path)?;
        paths.push((start..start + len).collect());
    }
    Ok(PendantGraph {
        rooted: current,
        base_order: g.order(),
        paths,
    })
}

/// Starlike tree `S(lengths)` rooted at its center.
pub fn starlike(lengths: &[usize]) -> Result<PendantGraph, GraphError> {
    attach_paths(&RootedGraph::trivial(), lengths)
}

/// Exhaustive isomorphism test for small graphs (weights and loops must
/// match). Factorial cost; meant for orders up to about 8.
pub fn brute_force_isomorphic(g: &WeightedGraph, h: &WeightedGraph) -> bool {
    if g.order() != h.order() || g.weights.len() != h.weights.len() {
        return false;
    }
    let mut dg: Vec<usize> = (0..g.order()).map(|u| g.degree(u)).collect();
    let mut dh: Vec<usize> = (0..h.order()).map(|u| h.degree(u)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let mut image = vec![usize::MAX; g.order()];
    let mut used = vec![false; h.order()];
    extend_mapping(g, h, 0, &mut image, &mut used)
}

fn extend_mapping(
    g: &WeightedGraph,
    h: &WeightedGraph,
    next: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if next == g.order() {
        return true;
    }
    for cand in 0..h.order() {
        if used[cand] {
            continue;
        }
        let consistent = (0..=next).all(|u| {
            let mapped = if u == next { cand } else { image[u] };
            g.weight(u, next) == h.weight(mapped, cand)
        });
        if consistent {
            image[next] = cand;
            used[cand] = true;
            if extend_mapping(g, h, next + 1, image, used) {
                return true;
            }
            used[cand] = false;
        }
    }
    image[next] = usize::MAX;
    false
}

/// Reads an edge list: one `u v [w]` per line, 0-based ids, `w` decimal or
/// `p/q` (default 1), `u u w` for a loop; blank lines and `#` comments are
/// skipped. The order is one more than the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut entries: Vec<(usize, usize, Surd, usize)> = Vec::new();
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| GraphError::Parse { line, message };
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `u v [w]`, got `{content}`")));
        }
        let id = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("bad vertex id `{s}`")))
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            Some(t) => t
                .parse::<Surd>()
                .map_err(|e: ParseRationalError| err(e.to_string()))?,
            None => Surd::one(),
        };
        if !w.is_positive() {
            return Err(err(format!("weight must be positive, got `{w}`")));
        }
        if entries.iter().any(|(a, b, _, _)| key(*a, *b) == key(u, v)) {
            return Err(err(format!("duplicate edge ({u}, {v})")));
        }
        max_id = Some(max_id.unwrap_or(0).max(u).max(v));
        entries.push((u, v, w, line));
    }
    let order = max_id.map_or(0, |m| m + 1);
    let mut g = WeightedGraph::empty(order);
    for (u, v, w, _) in entries {
        g.set_weight(u, v, w)?;
    }
    Ok(g)
}
