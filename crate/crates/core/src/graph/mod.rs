//! Oriented weighted graphs, spanning subgraphs and the integral cycle/cut
//! bases attached to spanning trees.

mod planar;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::Rng;
use nalgebra::DMatrix;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::linalg::{Chain1, Form1};
use crate::par::{self, Execution};
use crate::rng::{self, Purpose};

pub use planar::{faces_from_drawing, planar_dual, Dart, DualGraph, PlanarEmbedding};

pub const DEFAULT_ENUM_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Edge { tail, head }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn reversed(&self) -> Self {
        Edge::new(self.head, self.tail)
    }
}

/// A connected graph with ordered, oriented edges and positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    weights: Vec<f64>,
}

impl WeightedGraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>, weights: Vec<f64>) -> Result<Self> {
        if num_vertices == 0 {
            return Err(Error::NoVertices);
        }
        if edges.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: edges.len(),
                found: weights.len(),
            });
        }
        for (i, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= num_vertices {
                    return Err(Error::VertexOutOfRange {
                        edge: i,
                        vertex: v,
                        num_vertices,
                    });
                }
            }
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight { edge: i, weight: w });
            }
        }
        let g = WeightedGraph {
            num_vertices,
            edges,
            weights,
        };
        if g.count_components(&FixedBitSet::with_capacity(0), true) != 1 {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub fn from_pairs(num_vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs.iter().map(|&(t, h)| Edge::new(t, h)).collect_vec();
        let w = vec![1.0; edges.len()];
        WeightedGraph::new(num_vertices, edges, w)
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        WeightedGraph::new(self.num_vertices, self.edges.clone(), weights)
    }

    pub fn inverted_weights(&self) -> Self {
        WeightedGraph {
            num_vertices: self.num_vertices,
            edges: self.edges.clone(),
            weights: self.weights.iter().map(|w| 1.0 / w).collect(),
        }
    }

    pub fn reversed(&self) -> Self {
        WeightedGraph {
            num_vertices: self.num_vertices,
            edges: self.edges.iter().map(Edge::reversed).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Same graph with edges listed in the order `perm` (new index `i` holds
    /// old edge `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        WeightedGraph::new(
            self.num_vertices,
            perm.iter().map(|&i| self.edges[i]).collect(),
            perm.iter().map(|&i| self.weights[i]).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices
    }

    /// `x^S`.
    pub fn monomial(&self, s: &SubgraphMask) -> f64 {
        s.bits.ones().map(|e| self.weights[e]).product()
    }

    /// Columns `∂e = head − tail`; self-loops give zero columns.
    pub fn boundary_matrix(&self) -> DMatrix<i64> {
        let mut b = DMatrix::zeros(self.num_vertices, self.edges.len());
        for (j, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                b[(e.head, j)] += 1;
                b[(e.tail, j)] -= 1;
            }
        }
        b
    }

    /// The forms `δ1_v` for every vertex `v`, spanning `im d`.
    pub fn coboundary_forms(&self) -> Vec<Form1> {
        (0..self.num_vertices)
            .map(|v| {
                let mut ind = vec![false; self.num_vertices];
                ind[v] = true;
                coboundary_of_indicator(self, &ind).to_form()
            })
            .collect()
    }

    /// Reduced incidence: columns `δ1_v` for `v ≠ 0`, as an `|E| × (|V|-1)` real matrix.
    pub fn reduced_incidence(&self) -> DMatrix<f64> {
        let b = self.boundary_matrix();
        DMatrix::from_fn(self.edges.len(), self.num_vertices - 1, |e, v| {
            b[(v + 1, e)] as f64
        })
    }

    fn count_components(&self, mask: &FixedBitSet, all: bool) -> usize {
        let mut uf = UnionFind::new(self.num_vertices);
        let mut comps = self.num_vertices;
        for (i, e) in self.edges.iter().enumerate() {
            if (all || mask.contains(i)) && uf.union(e.tail, e.head) {
                comps -= 1;
            }
        }
        comps
    }

    pub fn cycle(n: usize) -> Self {
        let pairs = (0..n).map(|i| (i, (i + 1) % n)).collect_vec();
        WeightedGraph::from_pairs(n, &pairs).expect("cycle graph")
    }

    pub fn triangle() -> Self {
        WeightedGraph::cycle(3)
    }

    pub fn path(n: usize) -> Self {
        let pairs = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect_vec();
        WeightedGraph::from_pairs(n, &pairs).expect("path graph")
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n).tuple_combinations().collect_vec();
        WeightedGraph::from_pairs(n, &pairs).expect("complete graph")
    }

    /// Connected graph on `n` vertices with `m ≥ n − 1` edges: a random tree
    /// plus random extra edges (parallel edges allowed, no loops), weights
    /// uniform in `[0.5, 2]`.
    pub fn random(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if m + 1 < n || (n == 1 && m > 0) {
            return Err(Error::InvalidInput(format!(
                "cannot build a loopless connected graph with {n} vertices and {m} edges"
            )));
        }
        let mut rng = rng::stream(seed, Purpose::Instances);
        let mut edges = (1..n)
            .map(|v| Edge::new(rng.random_range(0..v), v))
            .collect_vec();
        while edges.len() < m {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                edges.push(Edge::new(a, b));
            }
        }
        let weights = (0..m).map(|_| rng.random_range(0.5..=2.0)).collect();
        WeightedGraph::new(n, edges, weights)
    }

    /// Row-major vertex ids, horizontal edges before vertical ones, each edge
    /// oriented from the smaller id.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("grid needs rows, cols >= 1".into()));
        }
        let id = |r: usize, c: usize| r * cols + c;
        let mut pairs = Vec::new();
        for r in 0..rows {
            for c in 0..cols - 1 {
                pairs.push((id(r, c), id(r, c + 1)));
            }
        }
        for r in 0..rows - 1 {
            for c in 0..cols {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
        WeightedGraph::from_pairs(rows * cols, &pairs)
    }
}

/// A spanning subgraph given by a set of edge indices, with cached Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgraphMask {
    bits: FixedBitSet,
    b0: usize,
    b1: usize,
}

impl SubgraphMask {
    pub fn from_bits(g: &WeightedGraph, bits: FixedBitSet) -> Result<Self> {
        if bits.len() != g.num_edges() {
            return Err(Error::DimensionMismatch {
                expected: g.num_edges(),
                found: bits.len(),
            });
        }
        let b0 = g.count_components(&bits, false);
        let b1 = bits.count_ones(..) + b0 - g.num_vertices();
        Ok(SubgraphMask { bits, b0, b1 })
    }

    pub fn from_edges(g: &WeightedGraph, edges: &[usize]) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(g.num_edges());
        for &e in edges {
            if e >= g.num_edges() {
                return Err(Error::EdgeOutOfRange(e));
            }
            bits.insert(e);
        }
        SubgraphMask::from_bits(g, bits)
    }

    pub fn empty(g: &WeightedGraph) -> Self {
        SubgraphMask::from_edges(g, &[]).expect("empty mask")
    }

    pub fn full(g: &WeightedGraph) -> Self {
        SubgraphMask::from_edges(g, &(0..g.num_edges()).collect_vec()).expect("full mask")
    }

    pub fn complement(&self, g: &WeightedGraph) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        SubgraphMask::from_bits(g, bits).expect("complement mask")
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits.contains(e)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn b0(&self) -> usize {
        self.b0
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    pub fn is_connected(&self) -> bool {
        self.b0 == 1
    }

    pub fn is_forest(&self) -> bool {
        self.b1 == 0
    }

    pub fn is_spanning_tree(&self) -> bool {
        self.b0 == 1 && self.b1 == 0
    }
}

/// Integer coefficients over positive edges, a chain in `C₁(G,ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerChain(pub Vec<i64>);

/// Integer coefficients over positive edges, a cochain in `C¹(G,ℤ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerCochain(pub Vec<i64>);

impl IntegerChain {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn to_chain(&self) -> Chain1 {
        Chain1::from_real(&self.0.iter().map(|&c| c as f64).collect_vec())
    }

    pub fn boundary(&self, g: &WeightedGraph) -> Vec<i64> {
        let mut out = vec![0; g.num_vertices()];
        for (e, &c) in self.0.iter().enumerate() {
            let ed = g.edge(e);
            out[ed.head] += c;
            out[ed.tail] -= c;
        }
        out
    }
}

impl IntegerCochain {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn to_form(&self) -> Form1 {
        Form1::from_real(&self.0.iter().map(|&c| c as f64).collect_vec())
    }

    pub fn pair(&self, c: &IntegerChain) -> i64 {
        self.0.iter().zip(&c.0).map(|(a, b)| a * b).sum()
    }
}

/// Component label of every vertex in the subgraph `s`, labels numbered by
/// first appearance in vertex order. Returns `(labels, count)`.
pub fn components(g: &WeightedGraph, s: &SubgraphMask) -> (Vec<usize>, usize) {
    let mut uf = UnionFind::new(g.num_vertices());
    for e in s.bits.ones() {
        let ed = g.edge(e);
        uf.union(ed.tail, ed.head);
    }
    let mut label = vec![usize::MAX; g.num_vertices()];
    let mut by_root = vec![usize::MAX; g.num_vertices()];
    let mut next = 0;
    for v in 0..g.num_vertices() {
        let r = uf.find(v);
        if by_root[r] == usize::MAX {
            by_root[r] = next;
            next += 1;
        }
        label[v] = by_root[r];
    }
    (label, next)
}

/// `δ(1_U)`: coefficient on `e` is `1_U(head) − 1_U(tail)`.
pub fn coboundary_of_indicator(g: &WeightedGraph, inside: &[bool]) -> IntegerCochain {
    IntegerCochain(
        g.edges()
            .iter()
            .map(|e| inside[e.head] as i64 - inside[e.tail] as i64)
            .collect(),
    )
}

/// Maximal forest inside `s` built greedily by increasing edge index.
pub fn spanning_forest(g: &WeightedGraph, s: &SubgraphMask) -> SubgraphMask {
    let mut uf = UnionFind::new(g.num_vertices());
    let mut kept = Vec::new();
    for e in s.bits.ones() {
        let ed = g.edge(e);
        if uf.union(ed.tail, ed.head) {
            kept.push(e);
        }
    }
    SubgraphMask::from_edges(g, &kept).expect("forest mask")
}

/// Chain of the path from `from` to `to` inside forest `f`, or `None` if they
/// lie in different components.
fn forest_path(g: &WeightedGraph, f: &SubgraphMask, from: usize, to: usize) -> Option<Vec<i64>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.num_vertices()];
    for e in f.bits.ones() {
        let ed = g.edge(e);
        adj[ed.tail].push((ed.head, e));
        adj[ed.head].push((ed.tail, e));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; g.num_vertices()];
    let mut seen = vec![false; g.num_vertices()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut chain = vec![0; g.num_edges()];
    let mut v = to;
    while let Some((u, e)) = parent[v] {
        // Walking u -> v along e.
        chain[e] += if g.edge(e).tail == u { 1 } else { -1 };
        v = u;
    }
    Some(chain)
}

/// Cycle of `f ∪ {e}` through `e`, oriented by `e`, for a forest `f` in which
/// the endpoints of `e` are connected. Zero if `e ∈ f`.
fn cycle_through(g: &WeightedGraph, f: &SubgraphMask, e: usize) -> Option<IntegerChain> {
    if f.contains(e) {
        return Some(IntegerChain(vec![0; g.num_edges()]));
    }
    let ed = g.edge(e);
    let mut chain = forest_path(g, f, ed.head, ed.tail)?;
    chain[e] += 1;
    Some(IntegerChain(chain))
}

fn check_tree(g: &WeightedGraph, tree: &SubgraphMask, e: usize) -> Result<()> {
    if tree.bits.len() != g.num_edges() || !tree.is_spanning_tree() {
        return Err(Error::NotSpanningTree);
    }
    if e >= g.num_edges() {
        return Err(Error::EdgeOutOfRange(e));
    }
    Ok(())
}

/// `γ(T,e) = e + [head e, tail e]_T`.
pub fn fundamental_cycle(g: &WeightedGraph, tree: &SubgraphMask, e: usize) -> Result<IntegerChain> {
    check_tree(g, tree, e)?;
    Ok(cycle_through(g, tree, e).expect("spanning tree connects all vertices"))
}

/// `κ(T,e) = δ(1_U)` with `U` the vertices joined to `head e` in `T∖e`.
pub fn fundamental_cut(g: &WeightedGraph, tree: &SubgraphMask, e: usize) -> Result<IntegerCochain> {
    check_tree(g, tree, e)?;
    if !tree.contains(e) {
        return Ok(IntegerCochain(vec![0; g.num_edges()]));
    }
    let mut bits = tree.bits.clone();
    bits.set(e, false);
    let rest = SubgraphMask::from_bits(g, bits)?;
    let (label, _) = components(g, &rest);
    let side = label[g.edge(e).head];
    let inside = label.iter().map(|&l| l == side).collect_vec();
    Ok(coboundary_of_indicator(g, &inside))
}

/// Integral basis of the cycle space of `s`: fundamental cycles of the
/// greedy spanning forest of `s`, in increasing order of the closing edge.
pub fn cycle_basis(g: &WeightedGraph, s: &SubgraphMask) -> Vec<IntegerChain> {
    let f = spanning_forest(g, s);
    s.bits
        .ones()
        .filter(|&e| !f.contains(e))
        .map(|e| cycle_through(g, &f, e).expect("closing edge lies in one component"))
        .collect()
}

/// All spanning subgraphs with `size` edges satisfying `keep`.
pub fn enumerate_subgraphs<F>(
    g: &WeightedGraph,
    size: usize,
    cap: usize,
    exec: Execution,
    keep: F,
) -> Result<Vec<SubgraphMask>>
where
    F: Fn(&SubgraphMask) -> bool + Sync + Send,
{
    let m = g.num_edges();
    if m > cap {
        return Err(Error::CapExceeded { size: m, cap });
    }
    if size > m {
        return Ok(Vec::new());
    }
    let subsets = (0..m).combinations(size).collect_vec();
    let masks = par::map_slice(exec, &subsets, |s| {
        let mask = SubgraphMask::from_edges(g, s).expect("indices in range");
        keep(&mask).then_some(mask)
    });
    Ok(masks.into_iter().flatten().collect())
}

pub fn enumerate_spanning_trees(g: &WeightedGraph, cap: usize) -> Result<Vec<SubgraphMask>> {
    enumerate_subgraphs(g, g.num_vertices() - 1, cap, Execution::Parallel, |s| {
        s.is_spanning_tree()
    })
}

/// Result of contracting a forest.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub graph: WeightedGraph,
    /// Quotient vertex of each source vertex.
    pub vertex_map: Vec<usize>,
    /// Source edge of each quotient edge.
    pub source_edges: Vec<usize>,
}

impl Quotient {
    /// Quotient edge carrying source edge `e`, if it survived.
    pub fn edge_of(&self, e: usize) -> Option<usize> {
        self.source_edges.iter().position(|&s| s == e)
    }
}

/// `G_{/F}`: one vertex per component of `f`; edges joining distinct
/// components survive in their original order, all others are dropped.
pub fn quotient_by_forest(g: &WeightedGraph, f: &SubgraphMask) -> Result<Quotient> {
    if f.bits.len() != g.num_edges() {
        return Err(Error::DimensionMismatch {
            expected: g.num_edges(),
            found: f.bits.len(),
        });
    }
    if !f.is_forest() {
        return Err(Error::ForestHasCycle);
    }
    let (label, count) = components(g, f);
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut source_edges = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let (t, h) = (label[e.tail], label[e.head]);
        if t != h {
            edges.push(Edge::new(t, h));
            weights.push(g.weights()[i]);
            source_edges.push(i);
        }
    }
    Ok(Quotient {
        graph: WeightedGraph::new(count, edges, weights)?,
        vertex_map: label,
        source_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_of_triangle_and_loop() {
        let g = WeightedGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let b = g.boundary_matrix();
        assert_eq!(b.column(0).iter().copied().collect_vec(), vec![-1, 1, 0]);
        assert_eq!(b.column(1).iter().copied().collect_vec(), vec![0, -1, 1]);
        assert_eq!(b.column(2).iter().copied().collect_vec(), vec![1, 0, -1]);
        let l = WeightedGraph::from_pairs(2, &[(0, 1), (1, 1)]).unwrap();
        assert!(l.boundary_matrix().column(1).iter().all(|&c| c == 0));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            WeightedGraph::from_pairs(3, &[(0, 1)]),
            Err(Error::Disconnected)
        ));
        assert!(WeightedGraph::new(2, vec![Edge::new(0, 1)], vec![0.0]).is_err());
        assert!(WeightedGraph::from_pairs(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn triangle_cycle_and_cut() {
        let g = WeightedGraph::triangle();
        let t = SubgraphMask::from_edges(&g, &[0, 1]).unwrap();
        let c = fundamental_cycle(&g, &t, 2).unwrap();
        assert_eq!(c.0, vec![1, 1, 1]);
        assert!(fundamental_cycle(&g, &t, 0).unwrap().is_zero());
        assert!(fundamental_cut(&g, &t, 2).unwrap().is_zero());
        let k = fundamental_cut(&g, &t, 0).unwrap();
        assert_eq!(k.0[0], 1);
        assert_eq!(k.pair(&c), 0);
    }

    #[test]
    fn single_edge_cut() {
        let g = WeightedGraph::path(2);
        let t = SubgraphMask::full(&g);
        assert_eq!(fundamental_cut(&g, &t, 0).unwrap().0, vec![1]);
    }

    #[test]
    fn four_cycle_closing_edge() {
        let g = WeightedGraph::cycle(4);
        let t = SubgraphMask::from_edges(&g, &[0, 1, 2]).unwrap();
        let c = fundamental_cycle(&g, &t, 3).unwrap();
        assert!(c.0.iter().all(|&v| v.abs() == 1));
        assert!(c.boundary(&g).iter().all(|&v| v == 0));
    }

    #[test]
    fn non_tree_rejected() {
        let g = WeightedGraph::triangle();
        let s = SubgraphMask::full(&g);
        assert!(matches!(
            fundamental_cycle(&g, &s, 0),
            Err(Error::NotSpanningTree)
        ));
    }

    #[test]
    fn tree_counts() {
        assert_eq!(enumerate_spanning_trees(&WeightedGraph::triangle(), 20).unwrap().len(), 3);
        assert_eq!(enumerate_spanning_trees(&WeightedGraph::path(5), 20).unwrap().len(), 1);
        let k21 = WeightedGraph::complete(7);
        assert!(matches!(
            enumerate_spanning_trees(&k21, 20),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn quotients() {
        let g = WeightedGraph::triangle();
        let q = quotient_by_forest(&g, &SubgraphMask::from_edges(&g, &[0]).unwrap()).unwrap();
        assert_eq!(q.graph.num_vertices(), 2);
        assert_eq!(q.source_edges, vec![1, 2]);
        let t = quotient_by_forest(&g, &SubgraphMask::from_edges(&g, &[0, 1]).unwrap()).unwrap();
        assert_eq!((t.graph.num_vertices(), t.graph.num_edges()), (1, 0));
        let e = quotient_by_forest(&g, &SubgraphMask::empty(&g)).unwrap();
        assert_eq!(e.graph, g);
        assert!(matches!(
            quotient_by_forest(&g, &SubgraphMask::full(&g)),
            Err(Error::ForestHasCycle)
        ));
    }

    #[test]
    fn grid_shape() {
        let g = WeightedGraph::grid(15, 15).unwrap();
        assert_eq!((g.num_vertices(), g.num_edges()), (225, 420));
        let g = WeightedGraph::grid(2, 2).unwrap();
        assert_eq!(g.edges()[..2], [Edge::new(0, 1), Edge::new(2, 3)]);
        assert_eq!(g.edges()[2..], [Edge::new(0, 2), Edge::new(1, 3)]);
    }

    #[test]
    fn betti_numbers_of_masks() {
        let g = WeightedGraph::grid(2, 3).unwrap();
        let s = SubgraphMask::from_edges(&g, &[0, 2]).unwrap();
        assert_eq!((s.b0(), s.b1()), (4, 0));
        let full = SubgraphMask::full(&g);
        assert_eq!((full.b0(), full.b1()), (1, 2));
        assert_eq!(s.complement(&g).len(), g.num_edges() - 2);
    }

    #[test]
    fn complex_unit_helpers() {
        let c = IntegerChain(vec![1, -1]).to_chain();
        assert_eq!(c.0[1], crate::linalg::C64::new(-1.0, 0.0));
    }
}
