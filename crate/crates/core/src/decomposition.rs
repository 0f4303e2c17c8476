//! Translating local Clifford actions on graphs into local complementations.
//!
//! For `θ` in the domain of `Q = [[A, B], [C, D]]`, the invertible matrix
//! `R = Cθ + D` is driven to the identity by the transforms
//! `f_i(X) = X (Λ_i X + X_ii Λ_i + I)`, applied singly or as `f_j f_k f_j`.
//! Replaying the same schedule of `g_i` / `g_j g_k g_j` on `θ` yields `Q(θ)`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::clifford::{diag_combination, CliffordError, LocalCliffordOp};
use crate::gf2::{BitMatrix, BitVec};
use crate::graphs::{Graph, GraphError, Vertex};
use crate::text::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("vertex {label} out of range 1..={n}")]
    VertexOutOfRange { label: usize, n: usize },
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("C*theta + D is singular")]
    NotInvertible,
    #[error("graph is not in the domain of the operation (C*theta + D invertible: {invertible_cd}, zero diagonal: {zero_diagonal})")]
    NotInDomain {
        invertible_cd: bool,
        zero_diagonal: bool,
    },
    #[error("reduction did not reach the identity within {bound} steps")]
    NonTermination { bound: usize },
    #[error("internal error: replayed sequence does not reproduce Q(theta)")]
    PostCheckFailed,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<CliffordError> for DecompositionError {
    fn from(e: CliffordError) -> Self {
        match e {
            CliffordError::SizeMismatch { left, right } => {
                DecompositionError::SizeMismatch { left, right }
            }
            CliffordError::Graph(g) => DecompositionError::Graph(g),
            CliffordError::NotInvertible => DecompositionError::NotInvertible,
            CliffordError::NotInvertibleQubit { .. } => {
                unreachable!("operations are validated on construction")
            }
        }
    }
}

/// One step of a local complementation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LcStep {
    /// `g_i`.
    Single(Vertex),
    /// `g_j`, then `g_k`, then `g_j`.
    Triple(Vertex, Vertex),
}

impl LcStep {
    /// The vertices in application order.
    pub fn expand(self) -> impl Iterator<Item = Vertex> {
        let (list, len) = match self {
            LcStep::Single(i) => ([i, i, i], 1),
            LcStep::Triple(j, k) => ([j, k, j], 3),
        };
        list.into_iter().take(len)
    }

    fn vertices(self) -> Vec<Vertex> {
        match self {
            LcStep::Single(i) => vec![i],
            LcStep::Triple(j, k) => vec![j, k],
        }
    }
}

/// A shape violation in a produced schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceAnomaly {
    /// A single step at `position` follows a triple.
    SingleAfterTriple { position: usize },
    /// `vertex` occurs in more than one step.
    RepeatedVertex { vertex: Vertex },
}

/// An ordered list of local complementation steps.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LcSequence {
    steps: Vec<LcStep>,
}

impl LcSequence {
    pub fn new(steps: Vec<LcStep>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[LcStep] {
        &self.steps
    }

    pub fn push(&mut self, step: LcStep) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All single complementations in application order.
    pub fn expanded(&self) -> Vec<Vertex> {
        self.steps.iter().flat_map(|s| s.expand()).collect()
    }

    /// Singles must precede triples and no vertex may appear in two steps.
    pub fn anomalies(&self) -> Vec<SequenceAnomaly> {
        let mut out = Vec::new();
        let mut seen_triple = false;
        let mut seen = std::collections::BTreeSet::new();
        for (position, step) in self.steps.iter().enumerate() {
            match step {
                LcStep::Single(_) if seen_triple => {
                    out.push(SequenceAnomaly::SingleAfterTriple { position })
                }
                LcStep::Triple(..) => seen_triple = true,
                _ => {}
            }
            for v in step.vertices() {
                if !seen.insert(v) {
                    out.push(SequenceAnomaly::RepeatedVertex { vertex: v });
                }
            }
        }
        out
    }

    /// Text format: one step per line, `g i` or `gg j k`.
    pub fn to_text(&self) -> String {
        self.steps
            .iter()
            .map(|s| match s {
                LcStep::Single(i) => format!("g {i}\n"),
                LcStep::Triple(j, k) => format!("gg {j} {k}\n"),
            })
            .collect()
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let mut steps = Vec::new();
        for line in text::meaningful_lines(input) {
            let tokens = line.tokens();
            let (kind_col, kind) = tokens[0];
            let expected = match kind {
                "g" => 2,
                "gg" => 3,
                other => {
                    return Err(line.error(
                        kind_col,
                        format!("unknown step '{other}', expected 'g' or 'gg'"),
                    ))
                }
            };
            if tokens.len() != expected {
                let col = tokens.get(expected).map_or(kind_col, |t| t.0);
                return Err(line.error(
                    col,
                    format!("'{kind}' takes {} vertex label(s)", expected - 1),
                ));
            }
            let mut labels = Vec::with_capacity(2);
            for &(col, tok) in &tokens[1..] {
                match tok.parse::<usize>() {
                    Ok(l) if l >= 1 => labels.push(Vertex::new(l)),
                    _ => return Err(line.error(col, format!("invalid vertex label '{tok}'"))),
                }
            }
            steps.push(match labels[..] {
                [i] => LcStep::Single(i),
                [j, k] => LcStep::Triple(j, k),
                _ => unreachable!(),
            });
        }
        Ok(Self { steps })
    }
}

impl fmt::Display for LcSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for LcSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| match s {
                LcStep::Single(i) => format!("g{i}"),
                LcStep::Triple(j, k) => format!("g{j}{k}"),
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl FromStr for LcSequence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// An invertible matrix `Cθ + D` with `C`, `D` diagonal and `θ` a simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleCdForm {
    theta: Graph,
    c: BitVec,
    d: BitVec,
    r: BitMatrix,
}

impl InvertibleCdForm {
    pub fn new(theta: Graph, c: BitVec, d: BitVec) -> Result<Self, DecompositionError> {
        let n = theta.n();
        for v in [&c, &d] {
            if v.len() != n {
                return Err(DecompositionError::SizeMismatch {
                    left: n,
                    right: v.len(),
                });
            }
        }
        let r = diag_combination(&c, theta.adjacency(), &d);
        if !r.is_invertible() {
            return Err(DecompositionError::NotInvertible);
        }
        Ok(Self { theta, c, d, r })
    }

    pub fn theta(&self) -> &Graph {
        &self.theta
    }

    pub fn c(&self) -> &BitVec {
        &self.c
    }

    pub fn d(&self) -> &BitVec {
        &self.d
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.r
    }
}

/// `f_v(X) = X (Λ_v X + X_vv Λ_v + I)`, evaluated literally.
pub fn f_transform(x: &BitMatrix, v: Vertex) -> Result<BitMatrix, DecompositionError> {
    if !x.is_square() {
        return Err(DecompositionError::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    let n = x.rows();
    let i = v.index();
    if i >= n {
        return Err(DecompositionError::VertexOutOfRange {
            label: v.label(),
            n,
        });
    }
    let lambda = BitMatrix::diagonal_matrix(&BitVec::unit(n, i));
    let mut factor = lambda.mat_mul(x).expect("square");
    if x.get(i, i) {
        factor = factor.add(&lambda).expect("square");
    }
    let factor = factor.add(&BitMatrix::identity(n)).expect("square");
    Ok(x.mat_mul(&factor).expect("square"))
}

/// In-place `f_i`: the factor is `I + e_i uᵀ` with `u` = row `i` of `X` with bit `i`
/// cleared, so every row with a 1 in column `i` gets `u` added.
fn f_in_place(x: &mut BitMatrix, i: usize) {
    let mut u = x.row(i).clone();
    u.set(i, false);
    for r in 0..x.rows() {
        if x.get(r, i) {
            x.row_mut(r).xor_assign(&u);
        }
    }
}

/// Applies the f-transform schedule of `seq` to `x`.
pub fn apply_f_sequence(x: &BitMatrix, seq: &LcSequence) -> Result<BitMatrix, DecompositionError> {
    if !x.is_square() {
        return Err(DecompositionError::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    let mut out = x.clone();
    for v in seq.expanded() {
        if v.index() >= out.rows() {
            return Err(DecompositionError::VertexOutOfRange {
                label: v.label(),
                n: out.rows(),
            });
        }
        f_in_place(&mut out, v.index());
    }
    Ok(out)
}

fn row_is_unit(x: &BitMatrix, i: usize) -> bool {
    x.get(i, i) && x.row(i).count_ones() == 1
}

/// Finds a schedule of f-transforms taking `form` to the identity.
///
/// While some row `i` has `X_ii = 1` but is not yet `e_iᵀ`, `f_i` finishes it
/// (lowest such `i` first). Otherwise the lowest `j` with `X_jj = 0` and the lowest
/// `k` with `X_kj = 1` are finished together by `f_j f_k f_j`. Finished rows are
/// never disturbed again.
pub fn reduce_to_identity(form: &InvertibleCdForm) -> Result<LcSequence, DecompositionError> {
    let mut x = form.r.clone();
    let n = x.rows();
    let bound = 3 * n;
    let mut seq = LcSequence::default();
    while !x.is_identity() {
        if seq.len() >= bound {
            return Err(DecompositionError::NonTermination { bound });
        }
        if let Some(i) = (0..n).find(|&i| x.get(i, i) && !row_is_unit(&x, i)) {
            f_in_place(&mut x, i);
            seq.push(LcStep::Single(Vertex::from_index(i)));
            continue;
        }
        let j = (0..n).find(|&j| !x.get(j, j)).expect(
            "a non-identity matrix with no unfinished unit-diagonal row has a zero diagonal entry",
        );
        let k = (0..n)
            .find(|&k| x.get(k, j))
            .ok_or(DecompositionError::NotInvertible)?;
        f_in_place(&mut x, j);
        f_in_place(&mut x, k);
        f_in_place(&mut x, j);
        seq.push(LcStep::Triple(Vertex::from_index(j), Vertex::from_index(k)));
    }
    for anomaly in seq.anomalies() {
        log::warn!("reduction schedule anomaly {anomaly:?} in {seq:?}");
    }
    Ok(seq)
}

/// Folds local complementation over the expanded steps of `seq`.
pub fn apply_sequence(g: &Graph, seq: &LcSequence) -> Result<Graph, GraphError> {
    let mut out = g.clone();
    for v in seq.expanded() {
        out.check_vertex(v)?;
        out.local_complement_in_place(v.index());
    }
    Ok(out)
}

/// Local complementations realizing `Q(θ)` on `g`.
///
/// Only `C`, `D` and `θ` determine the schedule; the result is checked against
/// `q.graph_action(g)` before it is returned.
pub fn decompose(q: &LocalCliffordOp, g: &Graph) -> Result<LcSequence, DecompositionError> {
    let report = q.graph_action(g)?;
    let Some(image) = report.image else {
        return Err(DecompositionError::NotInDomain {
            invertible_cd: report.invertible_cd,
            zero_diagonal: report.zero_diagonal,
        });
    };
    let form = InvertibleCdForm::new(g.clone(), q.c().clone(), q.d().clone())?;
    let seq = reduce_to_identity(&form)?;
    if apply_sequence(g, &seq)? != image {
        return Err(DecompositionError::PostCheckFailed);
    }
    Ok(seq)
}
