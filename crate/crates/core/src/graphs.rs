//! Simple graphs on vertices `1..=n` and local complementation.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::text::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {label} out of range 1..={n}")]
    VertexOutOfRange { label: usize, n: usize },
    #[error("adjacency matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("adjacency matrix is not symmetric")]
    NotSymmetric,
    #[error("self-loop at vertex {label}")]
    SelfLoop { label: usize },
}

/// A vertex. Labels are 1-based on every public interface; the index is 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(usize);

impl Vertex {
    /// Vertex with 1-based `label`.
    ///
    /// # Panics
    /// Panics if `label` is zero.
    pub fn new(label: usize) -> Self {
        assert!(label >= 1, "vertex labels are 1-based");
        Vertex(label - 1)
    }

    pub fn from_index(index: usize) -> Self {
        Vertex(index)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn label(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A simple undirected graph, stored as a symmetric zero-diagonal adjacency matrix.
///
/// Graphs are values: every transformation returns a new graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitMatrix,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: BitMatrix::zeros(n, n),
        }
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            adj: BitMatrix::all_ones_offdiag(n),
        }
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        Graph {
            adj: BitMatrix::from_fn(n, n, |r, c| r.abs_diff(c) == 1),
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph {
            adj: BitMatrix::from_fn(n, n, |r, c| r.abs_diff(c) == 1 || r.abs_diff(c) == n - 1),
        }
    }

    pub fn star(n: usize, center: Vertex) -> Self {
        let c = center.index();
        assert!(c < n, "star center out of range");
        Graph {
            adj: BitMatrix::from_fn(n, n, |r, s| r != s && (r == c || s == c)),
        }
    }

    pub fn from_adjacency(adj: BitMatrix) -> Result<Self, GraphError> {
        if !adj.is_square() {
            return Err(GraphError::NotSquare {
                rows: adj.rows(),
                cols: adj.cols(),
            });
        }
        if let Some(i) = adj.diagonal().first_one() {
            return Err(GraphError::SelfLoop { label: i + 1 });
        }
        if !adj.is_symmetric() {
            return Err(GraphError::NotSymmetric);
        }
        Ok(Graph { adj })
    }

    pub(crate) fn from_adjacency_unchecked(adj: BitMatrix) -> Self {
        debug_assert!(adj.is_symmetric() && adj.diagonal().is_zero());
        Graph { adj }
    }

    /// Graph on `n` vertices with the given edges, given as 1-based label pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = BitMatrix::zeros(n, n);
        for (u, v) in edges {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(GraphError::VertexOutOfRange { label, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { label: u });
            }
            adj.set(u - 1, v - 1, true);
            adj.set(v - 1, u - 1, true);
        }
        Ok(Graph { adj })
    }

    /// Uniformly random labeled graph: every edge present with probability 1/2.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::random_with_density(n, 0.5, rng)
    }

    pub fn random_with_density<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut adj = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in r + 1..n {
                if rng.random_bool(p) {
                    adj.set(r, c, true);
                    adj.set(c, r, true);
                }
            }
        }
        Graph { adj }
    }

    /// Every labeled graph on `n` vertices, in increasing order of the edge bitmask
    /// (edge `{j,k}`, `j < k`, taken row-major over the upper triangle).
    ///
    /// # Panics
    /// Panics if `n > 11` (more than 2^55 graphs).
    pub fn all(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .collect();
        assert!(pairs.len() < 56, "too many graphs to enumerate");
        (0u64..1 << pairs.len()).map(move |mask| {
            let mut adj = BitMatrix::zeros(n, n);
            for (bit, &(j, k)) in pairs.iter().enumerate() {
                if (mask >> bit) & 1 == 1 {
                    adj.set(j, k, true);
                    adj.set(k, j, true);
                }
            }
            Graph { adj }
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn into_adjacency(self) -> BitMatrix {
        self.adj
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.n()).map(Vertex)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v.index() < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                label: v.label(),
                n: self.n(),
            })
        }
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(u.index(), v.index())
    }

    /// Row `v` of the adjacency matrix as a bit mask.
    pub fn neighbor_mask(&self, v: Vertex) -> &BitVec {
        self.adj.row(v.index())
    }

    pub fn neighborhood(&self, v: Vertex) -> Result<BTreeSet<Vertex>, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adj.row(v.index()).iter_ones().map(Vertex).collect())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.row(v.index()).count_ones()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        (0..self.n())
            .flat_map(|r| {
                self.adj
                    .row(r)
                    .iter_ones()
                    .filter(move |&c| c > r)
                    .map(move |c| (Vertex(r), Vertex(c)))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.row_iter().map(BitVec::count_ones).sum::<usize>() / 2
    }

    /// The complement graph, adjacency `θ + 𝕀`.
    pub fn complement(&self) -> Graph {
        Graph {
            adj: self
                .adj
                .add(&BitMatrix::all_ones_offdiag(self.n()))
                .expect("square matrices of equal size"),
        }
    }

    /// Induced subgraph on `vertices`, relabeled `1..=|vertices|` in increasing order.
    pub fn induced_subgraph(&self, vertices: &BTreeSet<Vertex>) -> Result<Graph, GraphError> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let keep: Vec<usize> = vertices.iter().map(|v| v.index()).collect();
        Ok(Graph {
            adj: BitMatrix::from_fn(keep.len(), keep.len(), |r, c| {
                self.adj.get(keep[r], keep[c])
            }),
        })
    }

    /// Local complementation at `v`: the subgraph induced on the neighborhood of `v`
    /// is replaced by its complement.
    pub fn local_complement(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let mut out = self.clone();
        out.local_complement_in_place(v.index());
        Ok(out)
    }

    /// Edge-toggling implementation: every neighbor row is XORed with the
    /// neighborhood mask, then its own (diagonal) bit is cleared again.
    pub(crate) fn local_complement_in_place(&mut self, i: usize) {
        let mask = self.adj.row(i).clone();
        for j in mask.iter_ones() {
            let row = self.adj.row_mut(j);
            row.xor_assign(&mask);
            row.toggle(j);
        }
    }

    /// Bits `θ_jk` for `j < k` in row-major order, packed most-significant-first so
    /// that comparing the word vectors compares the bit sequences lexicographically.
    pub fn order_key(&self) -> Vec<u64> {
        let n = self.n();
        let total = n * n.saturating_sub(1) / 2;
        let mut words = vec![0u64; total.div_ceil(64)];
        let mut t = 0;
        for r in 0..n {
            for c in r + 1..n {
                if self.adj.get(r, c) {
                    words[t / 64] |= 1u64 << (63 - t % 64);
                }
                t += 1;
            }
        }
        words
    }

    /// Relabels vertices: vertex `v` of `self` becomes vertex `perm[v]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut adj = BitMatrix::zeros(n, n);
        for (u, v) in self.edges() {
            adj.set(perm[u.index()], perm[v.index()], true);
            adj.set(perm[v.index()], perm[u.index()], true);
        }
        Graph { adj }
    }

    /// Writes the edge-list format: the vertex count, then one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse_edge_list(input: &str) -> Result<Graph, ParseError> {
        let lines = text::meaningful_lines(input);
        let graph = Self::parse_block(&lines, input)?;
        Ok(graph)
    }

    fn parse_block(lines: &[text::Line<'_>], input: &str) -> Result<Graph, ParseError> {
        let header = text::first_line(lines, input, "vertex count")?;
        let n = header.integers(1, "vertex count")?[0];
        let mut adj = BitMatrix::zeros(n, n);
        for line in &lines[1..] {
            let tokens = line.tokens();
            let ends = line.integers(2, "edge")?;
            let (i, j) = (ends[0], ends[1]);
            for (k, &label) in ends.iter().enumerate() {
                if label == 0 || label > n {
                    return Err(
                        line.error(tokens[k].0, format!("vertex {label} out of range 1..={n}"))
                    );
                }
            }
            if i >= j {
                return Err(line.error(tokens[0].0, format!("edge '{i} {j}' must satisfy i < j")));
            }
            if adj.get(i - 1, j - 1) {
                return Err(line.error(tokens[0].0, format!("duplicate edge '{i} {j}'")));
            }
            adj.set(i - 1, j - 1, true);
            adj.set(j - 1, i - 1, true);
        }
        Ok(Graph { adj })
    }

    /// Graphviz DOT, undirected, vertices labeled `1..=n`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph {name} {{\n");
        for v in self.vertices() {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// `g_i(θ) = θ + θ Λ_i θ + Λ`, evaluated literally with matrix products; `Λ` is the
/// diagonal correction that zeroes the diagonal.
pub fn local_complement_matrix_form(theta: &BitMatrix, v: Vertex) -> Result<BitMatrix, GraphError> {
    if !theta.is_square() {
        return Err(GraphError::NotSquare {
            rows: theta.rows(),
            cols: theta.cols(),
        });
    }
    let n = theta.rows();
    if v.index() >= n {
        return Err(GraphError::VertexOutOfRange {
            label: v.label(),
            n,
        });
    }
    let lambda_i = BitMatrix::diagonal_matrix(&BitVec::unit(n, v.index()));
    let product = theta
        .mat_mul(&lambda_i)
        .and_then(|m| m.mat_mul(theta))
        .and_then(|m| theta.add(&m))
        .expect("square operands");
    Ok(product.set_diagonal_zero())
}

/// Serializes several graphs into one file: edge-list blocks separated by blank lines.
pub fn write_graph_bundle(graphs: &[Graph]) -> String {
    graphs
        .iter()
        .map(Graph::to_edge_list)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Reads a bundle written by [`write_graph_bundle`]. A line holding a single
/// integer starts a new graph.
pub fn parse_graph_bundle(input: &str) -> Result<Vec<Graph>, ParseError> {
    let lines = text::meaningful_lines(input);
    let mut starts: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.tokens().len() == 1)
        .map(|(i, _)| i)
        .collect();
    if let Some(first) = lines.first() {
        if starts.first() != Some(&0) {
            return Err(first.error(1, "expected a vertex count to start a graph"));
        }
    }
    starts.push(lines.len());
    starts
        .windows(2)
        .map(|w| Graph::parse_block(&lines[w[0]..w[1]], input))
        .collect()
}

/// Multi-graph DOT output: one `graph` block per member.
pub fn write_dot_bundle(graphs: &[Graph], prefix: &str) -> String {
    graphs
        .iter()
        .enumerate()
        .map(|(i, g)| g.to_dot(&format!("{prefix}{}", i + 1)))
        .collect::<Vec<_>>()
        .join("\n")
}

impl Ord for Graph {
    /// Vertex count first, then the upper-triangle bit sequence lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.n()
            .cmp(&other.n())
            .then_with(|| self.order_key().cmp(&other.order_key()))
    }
}

impl PartialOrd for Graph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        write!(f, "Graph(n={}, [{}])", self.n(), edges.join(", "))
    }
}

impl FromStr for Graph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_edge_list(s)
    }
}
