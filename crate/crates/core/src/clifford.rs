//! Local Clifford operations in the binary picture.
//!
//! A local Clifford operation is `Q = [[A, B], [C, D]]` with diagonal `n × n`
//! blocks; only the four diagonals are stored. Qubit `i` carries the 2×2 block
//! `[[a_i, b_i], [c_i, d_i]]`, which must be invertible over GF(2). Acting on a
//! Pauli `(z | x)` it maps `z_i ← a_i z_i + b_i x_i` and `x_i ← c_i z_i + d_i x_i`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, SymplecticForm};
use crate::graphs::{Graph, GraphError, Vertex};
use crate::stabilizer::StabilizerGenMatrix;
use crate::text::{self, ParseError};

/// A 2×2 binary matrix `[[a, b], [c, d]]`.
pub type QubitBlock = [[bool; 2]; 2];

pub const IDENTITY_BLOCK: QubitBlock = [[true, false], [false, true]];
/// Swaps the Z and X parts.
pub const HADAMARD_BLOCK: QubitBlock = [[false, true], [true, false]];
/// `z ← z + x`: flips a graph-state diagonal entry.
pub const PHASE_BLOCK: QubitBlock = [[true, true], [false, true]];

/// The six invertible 2×2 binary matrices.
pub const QUBIT_BLOCKS: [QubitBlock; 6] = [
    [[true, false], [false, true]],
    [[true, false], [true, true]],
    [[true, true], [false, true]],
    [[false, true], [true, false]],
    [[false, true], [true, true]],
    [[true, true], [true, false]],
];

#[inline]
pub fn block_is_invertible(m: &QubitBlock) -> bool {
    (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0])
}

/// `left · right` over GF(2).
#[inline]
pub fn block_mul(left: &QubitBlock, right: &QubitBlock) -> QubitBlock {
    let mut out = [[false; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = (left[r][0] & right[0][c]) ^ (left[r][1] & right[1][c]);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("qubit {qubit}: block is not invertible (a*d + b*c must be 1)")]
    NotInvertibleQubit { qubit: usize },
    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error("C*theta + D is singular")]
    NotInvertible,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An element of the binary local Clifford group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalCliffordOp {
    a: BitVec,
    b: BitVec,
    c: BitVec,
    d: BitVec,
}

/// Outcome of evaluating `Q(θ) = (Aθ + B)(Cθ + D)⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDomainReport {
    /// `Cθ + D` is nonsingular.
    pub invertible_cd: bool,
    /// `Q(θ)` has zero diagonal (false whenever `invertible_cd` is false).
    pub zero_diagonal: bool,
    /// Present iff both conditions hold.
    pub image: Option<Graph>,
}

impl GraphDomainReport {
    pub fn in_domain(&self) -> bool {
        self.image.is_some()
    }
}

impl LocalCliffordOp {
    pub fn new(a: BitVec, b: BitVec, c: BitVec, d: BitVec) -> Result<Self, CliffordError> {
        let n = a.len();
        for v in [&b, &c, &d] {
            if v.len() != n {
                return Err(CliffordError::SizeMismatch {
                    left: n,
                    right: v.len(),
                });
            }
        }
        let op = Self { a, b, c, d };
        if let Some(q) = (0..n).find(|&q| !block_is_invertible(&op.block(q))) {
            return Err(CliffordError::NotInvertibleQubit { qubit: q + 1 });
        }
        Ok(op)
    }

    pub fn from_blocks(blocks: &[QubitBlock]) -> Result<Self, CliffordError> {
        let pick = |r: usize, c: usize| BitVec::from_bools(blocks.iter().map(|m| m[r][c]));
        Self::new(pick(0, 0), pick(0, 1), pick(1, 0), pick(1, 1))
    }

    fn from_blocks_unchecked(blocks: impl Iterator<Item = QubitBlock>) -> Self {
        let (mut a, mut b, mut c, mut d) = (
            BitVec::zeros(0),
            BitVec::zeros(0),
            BitVec::zeros(0),
            BitVec::zeros(0),
        );
        for m in blocks {
            debug_assert!(block_is_invertible(&m));
            a.push(m[0][0]);
            b.push(m[0][1]);
            c.push(m[1][0]);
            d.push(m[1][1]);
        }
        Self { a, b, c, d }
    }

    pub fn uniform(n: usize, block: QubitBlock) -> Self {
        assert!(block_is_invertible(&block));
        Self::from_blocks_unchecked(std::iter::repeat_n(block, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::uniform(n, IDENTITY_BLOCK)
    }

    pub fn hadamard_all(n: usize) -> Self {
        Self::uniform(n, HADAMARD_BLOCK)
    }

    /// Each qubit block drawn uniformly from the six invertible 2×2 matrices.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::from_blocks_unchecked((0..n).map(|_| QUBIT_BLOCKS[rng.random_range(0..6)]))
    }

    /// The operation realizing local complementation at `v` on `g`:
    /// `A = I`, `B = diag(row v of θ)`, `C = Λ_v`, `D = I`.
    pub fn local_complementation(g: &Graph, v: Vertex) -> Result<Self, CliffordError> {
        g.check_vertex(v)?;
        let n = g.n();
        Ok(Self {
            a: BitVec::ones(n),
            b: g.neighbor_mask(v).clone(),
            c: BitVec::unit(n, v.index()),
            d: BitVec::ones(n),
        })
    }

    /// The unique operation with lower diagonals `(c, d)` whose domain contains `g`.
    ///
    /// Each qubit has exactly two `(a_i, b_i)` completions; they differ by row `i`
    /// of `Cθ + D`, which shifts diagonal entry `i` of `Q(θ)` by exactly 1. So the
    /// first candidate in the order `(0,1) < (1,0) < (1,1)` is kept if it yields a
    /// zero diagonal entry and swapped for the other one otherwise.
    pub fn complete_lower_blocks(g: &Graph, c: &BitVec, d: &BitVec) -> Result<Self, CliffordError> {
        let n = g.n();
        for v in [c, d] {
            if v.len() != n {
                return Err(CliffordError::SizeMismatch {
                    left: n,
                    right: v.len(),
                });
            }
        }
        let lower = diag_combination(c, g.adjacency(), d);
        let inverse_t = lower
            .invert()
            .map_err(|_| CliffordError::NotInvertible)?
            .transpose();
        let theta = g.adjacency();
        let mut a = BitVec::zeros(n);
        let mut b = BitVec::zeros(n);
        for i in 0..n {
            let (ci, di) = (c.get(i), d.get(i));
            let (mut ai, mut bi) = [(false, true), (true, false), (true, true)]
                .into_iter()
                .find(|&(x, y)| (x & di) ^ (y & ci))
                .expect("(c_i, d_i) is never (0, 0) when C*theta + D is invertible");
            // Row i of Aθ + B is a_i θ_i + b_i e_i; its product with column i of M.
            let col = inverse_t.row(i);
            let entry = (ai & theta.row(i).dot(col)) ^ (bi & col.get(i));
            if entry {
                ai ^= ci;
                bi ^= di;
            }
            a.set(i, ai);
            b.set(i, bi);
        }
        Ok(Self {
            a,
            b,
            c: c.clone(),
            d: d.clone(),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &BitVec {
        &self.a
    }

    pub fn b(&self) -> &BitVec {
        &self.b
    }

    pub fn c(&self) -> &BitVec {
        &self.c
    }

    pub fn d(&self) -> &BitVec {
        &self.d
    }

    /// The 2×2 block acting on qubit `q` (0-based).
    pub fn block(&self, q: usize) -> QubitBlock {
        [
            [self.a.get(q), self.b.get(q)],
            [self.c.get(q), self.d.get(q)],
        ]
    }

    pub fn blocks(&self) -> Vec<QubitBlock> {
        (0..self.n()).map(|q| self.block(q)).collect()
    }

    /// Replaces the block on qubit `q`.
    pub fn with_block(&self, q: usize, block: QubitBlock) -> Result<Self, CliffordError> {
        if !block_is_invertible(&block) {
            return Err(CliffordError::NotInvertibleQubit { qubit: q + 1 });
        }
        let mut out = self.clone();
        out.a.set(q, block[0][0]);
        out.b.set(q, block[0][1]);
        out.c.set(q, block[1][0]);
        out.d.set(q, block[1][1]);
        Ok(out)
    }

    /// `outer ∘ inner`: `inner` is applied first.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, CliffordError> {
        if outer.n() != inner.n() {
            return Err(CliffordError::SizeMismatch {
                left: outer.n(),
                right: inner.n(),
            });
        }
        Ok(Self::from_blocks_unchecked(
            (0..outer.n()).map(|q| block_mul(&outer.block(q), &inner.block(q))),
        ))
    }

    pub fn inverse(&self) -> Self {
        // The inverse of [[a,b],[c,d]] with determinant 1 over GF(2) is [[d,b],[c,a]].
        Self {
            a: self.d.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `Q · S`, computed row-wise on the Z and X blocks.
    pub fn apply_to_stabilizer(
        &self,
        s: &StabilizerGenMatrix,
    ) -> Result<StabilizerGenMatrix, CliffordError> {
        let n = self.n();
        if s.n() != n {
            return Err(CliffordError::SizeMismatch {
                left: n,
                right: s.n(),
            });
        }
        let m = s.matrix();
        let combine = |i: usize, z_coeff: bool, x_coeff: bool| {
            let mut row = BitVec::zeros(n);
            if z_coeff {
                row.xor_assign(m.row(i));
            }
            if x_coeff {
                row.xor_assign(m.row(n + i));
            }
            row
        };
        let rows = (0..n)
            .map(|i| combine(i, self.a.get(i), self.b.get(i)))
            .chain((0..n).map(|i| combine(i, self.c.get(i), self.d.get(i))))
            .collect();
        Ok(StabilizerGenMatrix::from_matrix_unchecked(
            BitMatrix::from_rows(n, rows).expect("rows of length n"),
        ))
    }

    /// `Aθ + B`.
    pub fn upper_image(&self, theta: &BitMatrix) -> BitMatrix {
        diag_combination(&self.a, theta, &self.b)
    }

    /// `Cθ + D`.
    pub fn lower_image(&self, theta: &BitMatrix) -> BitMatrix {
        diag_combination(&self.c, theta, &self.d)
    }

    /// Evaluates `Q(θ) = (Aθ + B)(Cθ + D)⁻¹` together with both domain conditions.
    ///
    /// Symmetry of `Q(θ)` is not imposed; it follows from `Q` being symplectic and
    /// is asserted.
    pub fn graph_action(&self, g: &Graph) -> Result<GraphDomainReport, CliffordError> {
        if g.n() != self.n() {
            return Err(CliffordError::SizeMismatch {
                left: self.n(),
                right: g.n(),
            });
        }
        let theta = g.adjacency();
        let Ok(inverse) = self.lower_image(theta).invert() else {
            return Ok(GraphDomainReport {
                invertible_cd: false,
                zero_diagonal: false,
                image: None,
            });
        };
        let image = self.upper_image(theta).mat_mul(&inverse).expect("square");
        let zero_diagonal = image.diagonal().is_zero();
        let image = if zero_diagonal {
            assert!(
                image.is_symmetric(),
                "image of a symplectic map must be symmetric"
            );
            Some(Graph::from_adjacency_unchecked(image))
        } else {
            None
        };
        Ok(GraphDomainReport {
            invertible_cd: true,
            zero_diagonal,
            image,
        })
    }

    /// The full `2n × 2n` matrix `[[A, B], [C, D]]`.
    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.n();
        BitMatrix::from_fn(2 * n, 2 * n, |r, c| {
            let (i, j) = (r % n, c % n);
            if i != j {
                return false;
            }
            match (r < n, c < n) {
                (true, true) => self.a.get(i),
                (true, false) => self.b.get(i),
                (false, true) => self.c.get(i),
                (false, false) => self.d.get(i),
            }
        })
    }

    /// Checks `Qᵀ P Q = P` on the assembled matrix.
    pub fn is_symplectic(&self) -> bool {
        let q = self.to_matrix();
        let form = SymplecticForm::new(self.n());
        form.gram(&q, &q).expect("square") == form.matrix()
    }

    /// Text format: `n`, then one `a b c d` line per qubit.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for q in 0..self.n() {
            let m = self.block(q);
            out.push_str(&format!(
                "{} {} {} {}\n",
                m[0][0] as u8, m[0][1] as u8, m[1][0] as u8, m[1][1] as u8
            ));
        }
        out
    }

    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let lines = text::meaningful_lines(input);
        let header = text::first_line(&lines, input, "qubit count")?;
        let n = header.integers(1, "qubit count")?[0];
        let mut blocks = Vec::with_capacity(n);
        for q in 0..n {
            let line = lines.get(1 + q).ok_or_else(|| {
                text::unexpected_end(input, &format!("qubit line {} of {n}", q + 1))
            })?;
            let bits = line.integers(4, "qubit block 'a b c d'")?;
            let tokens = line.tokens();
            if let Some(k) = bits.iter().position(|&b| b > 1) {
                return Err(line.error(tokens[k].0, "block entries must be 0 or 1"));
            }
            let block = [[bits[0] == 1, bits[1] == 1], [bits[2] == 1, bits[3] == 1]];
            if !block_is_invertible(&block) {
                return Err(line.error(1, format!("qubit {}: block is not invertible", q + 1)));
            }
            blocks.push(block);
        }
        if let Some(extra) = lines.get(1 + n) {
            return Err(extra.error(1, "unexpected content after last qubit"));
        }
        Ok(Self::from_blocks_unchecked(blocks.into_iter()))
    }
}

/// `diag(scale) · θ + diag(shift)`: row `i` is `scale_i θ_i + shift_i e_i`.
pub(crate) fn diag_combination(scale: &BitVec, theta: &BitMatrix, shift: &BitVec) -> BitMatrix {
    let n = theta.rows();
    let rows = (0..n)
        .map(|i| {
            let mut row = if scale.get(i) {
                theta.row(i).clone()
            } else {
                BitVec::zeros(n)
            };
            if shift.get(i) {
                row.toggle(i);
            }
            row
        })
        .collect();
    BitMatrix::from_rows(n, rows).expect("rows of length n")
}

impl fmt::Display for LocalCliffordOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for LocalCliffordOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalClifford(a={}, b={}, c={}, d={})",
            self.a, self.b, self.c, self.d
        )
    }
}

impl FromStr for LocalCliffordOp {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
