//! Phaseless Pauli operators and stabilizer generator matrices.
//!
//! A Pauli operator on `n` qubits is the binary vector `(z | x)`; per qubit
//! `I ↦ (0,0)`, `X ↦ (0,1)`, `Z ↦ (1,0)`, `Y ↦ (1,1)`. Overall phases are not
//! represented anywhere in the binary core.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, SymplecticForm};
use crate::graphs::Graph;
use crate::text::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StabilizerError {
    #[error("expected {expected} generators, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("generator {index} acts on {found} qubits, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generators {first} and {second} do not commute")]
    NotCommuting { first: usize, second: usize },
    #[error("generators are not independent")]
    NotIndependent,
    #[error("generator matrix must be 2n x n, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("basis change matrix is not an invertible {n}x{n} matrix")]
    SingularBasisChange { n: usize },
}

/// A Pauli operator without its phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    z: BitVec,
    x: BitVec,
}

impl PauliString {
    pub fn new(z: BitVec, x: BitVec) -> Self {
        assert_eq!(z.len(), x.len(), "z and x parts must have equal length");
        Self { z, x }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(BitVec::zeros(n), BitVec::zeros(n))
    }

    /// From the binary vector `(z | x)` of length `2n`.
    pub fn from_binary(v: &BitVec) -> Self {
        assert!(
            v.len().is_multiple_of(2),
            "binary Pauli vector must have even length"
        );
        let n = v.len() / 2;
        Self::new(v.slice(0, n), v.slice(n, n))
    }

    /// Parses a string over `{I, X, Y, Z}`; a leading `+` or `-` sign is accepted and ignored.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        Self::parse_at(s, 1, 1)
    }

    fn parse_at(s: &str, line: usize, column: usize) -> Result<Self, ParseError> {
        let body = s.strip_prefix(['+', '-']).unwrap_or(s);
        let offset = s.len() - body.len();
        let mut z = BitVec::zeros(0);
        let mut x = BitVec::zeros(0);
        for (i, ch) in body.chars().enumerate() {
            let (zb, xb) = match ch {
                'I' => (false, false),
                'X' => (false, true),
                'Z' => (true, false),
                'Y' => (true, true),
                other => {
                    return Err(ParseError::new(
                        line,
                        column + offset + i,
                        format!("invalid Pauli letter '{other}'"),
                    ))
                }
            };
            z.push(zb);
            x.push(xb);
        }
        Ok(Self { z, x })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    /// The concatenated binary vector `(z | x)`.
    pub fn to_binary(&self) -> BitVec {
        self.z.concat(&self.x)
    }

    pub fn letter(&self, qubit: usize) -> char {
        match (self.z.get(qubit), self.x.get(qubit)) {
            (false, false) => 'I',
            (false, true) => 'X',
            (true, false) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Symplectic product zero ⇔ the operators commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !(self.z.dot(&other.x) ^ self.x.dot(&other.z))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}

impl FromStr for PauliString {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// A full-rank `2n × n` generator matrix `S = [Z; X]` with `Sᵀ P S = 0`.
///
/// Column `j` is generator `M_j`; the top `n` rows hold its Z part and the bottom
/// `n` rows its X part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabilizerGenMatrix {
    n: usize,
    s: BitMatrix,
}

impl StabilizerGenMatrix {
    /// Validates shape, symplectic self-orthogonality and rank.
    pub fn from_matrix(s: BitMatrix) -> Result<Self, StabilizerError> {
        let n = s.cols();
        if s.rows() != 2 * n {
            return Err(StabilizerError::BadShape {
                rows: s.rows(),
                cols: s.cols(),
            });
        }
        let gram = SymplecticForm::new(n).gram(&s, &s).expect("shapes checked");
        if let Some(r) = (0..n).find(|&r| !gram.row(r).is_zero()) {
            let c = gram.row(r).first_one().expect("nonzero row");
            return Err(StabilizerError::NotCommuting {
                first: r + 1,
                second: c + 1,
            });
        }
        if s.rank() != n {
            return Err(StabilizerError::NotIndependent);
        }
        Ok(Self { n, s })
    }

    pub(crate) fn from_matrix_unchecked(s: BitMatrix) -> Self {
        let n = s.cols();
        debug_assert_eq!(s.rows(), 2 * n);
        Self { n, s }
    }

    /// Generators given in order become the columns of `S`.
    pub fn from_pauli_strings(paulis: &[PauliString]) -> Result<Self, StabilizerError> {
        let n = paulis.first().map_or(0, PauliString::n);
        for (i, p) in paulis.iter().enumerate() {
            if p.n() != n {
                return Err(StabilizerError::LengthMismatch {
                    index: i + 1,
                    expected: n,
                    found: p.n(),
                });
            }
        }
        if paulis.len() != n {
            return Err(StabilizerError::WrongCount {
                expected: n,
                found: paulis.len(),
            });
        }
        for a in 0..n {
            for b in a + 1..n {
                if !paulis[a].commutes_with(&paulis[b]) {
                    return Err(StabilizerError::NotCommuting {
                        first: a + 1,
                        second: b + 1,
                    });
                }
            }
        }
        let columns: Vec<BitVec> = paulis.iter().map(PauliString::to_binary).collect();
        let s = columns_to_matrix(2 * n, &columns);
        if s.rank() != n {
            return Err(StabilizerError::NotIndependent);
        }
        Ok(Self { n, s })
    }

    /// The graph-state generator matrix `[θ; I]`.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let s = g
            .adjacency()
            .vstack(&BitMatrix::identity(n))
            .expect("square adjacency");
        Self { n, s }
    }

    /// `[0; I]` after `count` random symplectic transvections, deterministic in `seed`.
    ///
    /// Each transvection `x ↦ x + (vᵀ P x) v` preserves `P`, so the result is always a
    /// valid stabilizer.
    pub fn random_with_transvections(n: usize, seed: u64, count: usize) -> Self {
        assert!(n >= 1, "need at least one qubit");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let form = SymplecticForm::new(n);
        let mut columns: Vec<BitVec> = (0..n).map(|j| BitVec::unit(2 * n, n + j)).collect();
        for _ in 0..count {
            let v = loop {
                let v = BitVec::from_bools((0..2 * n).map(|_| rng.random::<bool>()));
                if !v.is_zero() {
                    break v;
                }
            };
            for col in &mut columns {
                if form.inner(&v, col) {
                    col.xor_assign(&v);
                }
            }
        }
        Self::from_matrix_unchecked(columns_to_matrix(2 * n, &columns))
    }

    /// Random stabilizer using `8n` transvections.
    pub fn random(n: usize, seed: u64) -> Self {
        Self::random_with_transvections(n, seed, 8 * n)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.s
    }

    pub fn into_matrix(self) -> BitMatrix {
        self.s
    }

    pub fn z_block(&self) -> BitMatrix {
        self.s.row_block(0, self.n)
    }

    pub fn x_block(&self) -> BitMatrix {
        self.s.row_block(self.n, self.n)
    }

    /// Generator `j` (0-based column) as a Pauli string.
    pub fn generator(&self, j: usize) -> PauliString {
        PauliString::from_binary(&self.s.column(j))
    }

    pub fn to_pauli_strings(&self) -> Vec<PauliString> {
        (0..self.n).map(|j| self.generator(j)).collect()
    }

    /// `S · R`: a change of generators spanning the same subspace.
    pub fn basis_change(&self, r: &BitMatrix) -> Result<Self, StabilizerError> {
        if r.rows() != self.n || !r.is_invertible() {
            return Err(StabilizerError::SingularBasisChange { n: self.n });
        }
        Ok(Self {
            n: self.n,
            s: self.s.mat_mul(r).expect("dimensions checked"),
        })
    }

    /// True iff the column spans coincide, i.e. `rank([S | S']) = n`.
    pub fn same_subspace(&self, other: &StabilizerGenMatrix) -> bool {
        self.n == other.n && self.s.hstack(&other.s).expect("equal row counts").rank() == self.n
    }

    /// The stabilizer file format: one Pauli string per line.
    pub fn to_pauli_text(&self) -> String {
        self.to_pauli_strings()
            .iter()
            .map(|p| format!("{p}\n"))
            .collect()
    }

    /// Reads either the Pauli-string format or a raw `2n × n` matrix block.
    pub fn parse(input: &str) -> Result<Self, ParseError> {
        let lines = text::meaningful_lines(input);
        let first = text::first_line(&lines, input, "stabilizer generators")?;
        let is_matrix = first
            .tokens()
            .iter()
            .all(|(_, t)| t.chars().all(|c| c.is_ascii_digit()));
        if is_matrix {
            let m = BitMatrix::parse(input)?;
            return Self::from_matrix(m).map_err(|e| first.error(1, e.to_string()));
        }
        let mut paulis = Vec::with_capacity(lines.len());
        for line in &lines {
            let tokens = line.tokens();
            if tokens.len() != 1 {
                let col = tokens.get(1).map_or(1, |t| t.0);
                return Err(line.error(col, "expected one Pauli string per line"));
            }
            let (col, tok) = tokens[0];
            paulis.push(PauliString::parse_at(tok, line.number, col)?);
        }
        Self::from_pauli_strings(&paulis).map_err(|e| {
            let line = match e {
                StabilizerError::LengthMismatch { index, .. } => lines[index - 1].number,
                StabilizerError::NotCommuting { second, .. } => lines[second - 1].number,
                _ => first.number,
            };
            ParseError::new(line, 1, e.to_string())
        })
    }
}

/// Builds a `rows × columns.len()` matrix from column vectors.
pub(crate) fn columns_to_matrix(rows: usize, columns: &[BitVec]) -> BitMatrix {
    BitMatrix::from_fn(rows, columns.len(), |r, c| columns[c].get(r))
}

impl fmt::Display for StabilizerGenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pauli_text())
    }
}

impl fmt::Debug for StabilizerGenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .to_pauli_strings()
            .iter()
            .map(|p| p.to_string())
            .collect();
        write!(f, "Stabilizer[{}]", gens.join(", "))
    }
}

impl FromStr for StabilizerGenMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
