//! Dense statevector checks for small registers.
//!
//! Everything here works with complex amplitudes and 2×2 unitaries directly and
//! does not call into the GF(2) arithmetic it is meant to check. Basis states
//! are indexed little-endian: qubit 1 is the least significant bit.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::clifford::{LocalCliffordOp, QubitBlock};
use crate::graphs::Graph;
use crate::stabilizer::{PauliString, StabilizerGenMatrix};

/// Largest register the oracle will build.
pub const ORACLE_MAX_QUBITS: usize = 12;

/// Absolute tolerance for every floating-point comparison.
pub const TOLERANCE: f64 = 1e-9;

pub type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub const PAULI_I: Matrix2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Matrix2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Matrix2 = [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Matrix2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];

const H: Matrix2 = [
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ],
];
const S: Matrix2 = [[ONE, ZERO], [ZERO, I]];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} qubits exceeds the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error("internal error: no tabulated Clifford acts as the block on qubit {qubit}")]
    NoMatch { qubit: usize },
    #[error("generators have no common +1 eigenvector")]
    NoCommonEigenvector,
}

fn check_size(n: usize) -> Result<(), OracleError> {
    if n > ORACLE_MAX_QUBITS {
        return Err(OracleError::TooLarge {
            n,
            limit: ORACLE_MAX_QUBITS,
        });
    }
    Ok(())
}

fn check_match(left: usize, right: usize) -> Result<(), OracleError> {
    if left != right {
        return Err(OracleError::SizeMismatch { left, right });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Result<Self, OracleError> {
        check_size(n)?;
        let mut amplitudes = vec![ZERO; 1 << n];
        amplitudes[0] = ONE;
        Ok(Self { n, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, OracleError> {
        let n = amplitudes.len().trailing_zeros() as usize;
        assert!(
            amplitudes.len().is_power_of_two(),
            "amplitude count must be a power of two"
        );
        check_size(n)?;
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn approx_eq(&self, other: &StateVector) -> bool {
        self.n == other.n
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() < TOLERANCE)
    }

    fn normalized(mut self) -> Self {
        let norm = self.norm();
        for a in &mut self.amplitudes {
            *a /= norm;
        }
        self
    }

    /// Applies `m` to the 0-based `qubit`.
    pub fn apply_single_qubit(&mut self, qubit: usize, m: &Matrix2) {
        assert!(qubit < self.n, "qubit {qubit} out of range");
        let bit = 1usize << qubit;
        for k in 0..self.amplitudes.len() {
            if k & bit == 0 {
                let (a0, a1) = (self.amplitudes[k], self.amplitudes[k | bit]);
                self.amplitudes[k] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[k | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }
}

/// `|G⟩`: controlled-Z on every edge of the uniform superposition.
pub fn build_graph_state(g: &Graph) -> Result<StateVector, OracleError> {
    let n = g.n();
    check_size(n)?;
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .map(|(u, v)| (u.index(), v.index()))
        .collect();
    let scale = (0.5f64).powf(n as f64 / 2.0);
    let amplitudes = (0..1usize << n)
        .map(|k| {
            let ones = edges
                .iter()
                .filter(|&&(u, v)| (k >> u) & 1 == 1 && (k >> v) & 1 == 1)
                .count();
            Complex64::new(if ones % 2 == 0 { scale } else { -scale }, 0.0)
        })
        .collect();
    Ok(StateVector { n, amplitudes })
}

fn pauli_matrix(letter: char) -> &'static Matrix2 {
    match letter {
        'X' => &PAULI_X,
        'Y' => &PAULI_Y,
        'Z' => &PAULI_Z,
        _ => &PAULI_I,
    }
}

pub fn apply_pauli(state: &StateVector, p: &PauliString) -> Result<StateVector, OracleError> {
    check_match(state.n, p.n())?;
    let mut out = state.clone();
    for q in 0..p.n() {
        let letter = p.letter(q);
        if letter != 'I' {
            out.apply_single_qubit(q, pauli_matrix(letter));
        }
    }
    Ok(out)
}

/// `⟨ψ|M|ψ⟩` for the Pauli `M`.
pub fn pauli_expectation(state: &StateVector, p: &PauliString) -> Result<Complex64, OracleError> {
    Ok(state.inner(&apply_pauli(state, p)?))
}

/// The operators `K_j = X_j ∏_{k ∈ N(j)} Z_k`, built from the adjacency relation.
pub fn graph_generators(g: &Graph) -> Vec<Vec<char>> {
    g.vertices()
        .map(|j| {
            g.vertices()
                .map(|k| {
                    if k == j {
                        'X'
                    } else if g.has_edge(j, k) {
                        'Z'
                    } else {
                        'I'
                    }
                })
                .collect()
        })
        .collect()
}

/// Whether `K_j |ψ⟩ = |ψ⟩` holds for every vertex `j`.
pub fn satisfies_graph_equations(state: &StateVector, g: &Graph) -> Result<bool, OracleError> {
    check_match(state.n, g.n())?;
    Ok(graph_generators(g).iter().all(|letters| {
        let mut image = state.clone();
        for (q, &letter) in letters.iter().enumerate() {
            image.apply_single_qubit(q, pauli_matrix(letter));
        }
        image.approx_eq(state)
    }))
}

/// Whether `state` is a ±1 eigenvector of every generator of `s`.
pub fn stabilized_up_to_signs(
    state: &StateVector,
    s: &StabilizerGenMatrix,
) -> Result<bool, OracleError> {
    check_match(state.n, s.n())?;
    for p in s.to_pauli_strings() {
        if (pauli_expectation(state, &p)?.norm() - 1.0).abs() > TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The joint +1 eigenvector of the generators of `s`, by applying the
/// projectors `(I + M_j)/2` to computational basis states.
pub fn stabilizer_state(s: &StabilizerGenMatrix) -> Result<StateVector, OracleError> {
    let n = s.n();
    check_size(n)?;
    let generators = s.to_pauli_strings();
    for k in 0..1usize << n {
        let mut psi = StateVector {
            n,
            amplitudes: vec![ZERO; 1 << n],
        };
        psi.amplitudes[k] = ONE;
        for p in &generators {
            let image = apply_pauli(&psi, p)?;
            for (a, b) in psi.amplitudes.iter_mut().zip(&image.amplitudes) {
                *a = (*a + b) * 0.5;
            }
        }
        if psi.norm() > 1e-6 {
            return Ok(psi.normalized());
        }
    }
    Err(OracleError::NoCommonEigenvector)
}

/// A single-qubit Clifford unitary with the binary block it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitClifford {
    /// Word in `H` and `S`, applied left to right.
    pub word: String,
    pub u: Matrix2,
    /// `[[a, b], [c, d]]`: `U Z U†` is `Z^a X^c` and `U X U†` is `Z^b X^d`, up to phase.
    pub symplectic: QubitBlock,
}

fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

fn dagger(a: &Matrix2) -> Matrix2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Equality up to a global phase.
pub fn equal_up_to_phase(a: &Matrix2, b: &Matrix2) -> bool {
    let flat_a = [a[0][0], a[0][1], a[1][0], a[1][1]];
    let flat_b = [b[0][0], b[0][1], b[1][0], b[1][1]];
    let Some(pivot) = flat_a.iter().position(|z| z.norm() > TOLERANCE) else {
        return flat_b.iter().all(|z| z.norm() < TOLERANCE);
    };
    if flat_b[pivot].norm() < TOLERANCE {
        return false;
    }
    let phase = flat_b[pivot] / flat_a[pivot];
    (phase.norm() - 1.0).abs() < TOLERANCE
        && flat_a
            .iter()
            .zip(&flat_b)
            .all(|(x, y)| (x * phase - y).norm() < TOLERANCE)
}

/// `(z, x)` bits of the Pauli that `m` equals up to phase.
fn identify_pauli(m: &Matrix2) -> Option<(bool, bool)> {
    [
        ((false, false), PAULI_I),
        ((false, true), PAULI_X),
        ((true, true), PAULI_Y),
        ((true, false), PAULI_Z),
    ]
    .into_iter()
    .find(|(_, p)| equal_up_to_phase(m, p))
    .map(|(bits, _)| bits)
}

fn conjugation_block(u: &Matrix2) -> QubitBlock {
    let image = |p: &Matrix2| {
        identify_pauli(&mul(&mul(u, p), &dagger(u))).expect("Clifford maps Paulis to Paulis")
    };
    let (a, c) = image(&PAULI_Z);
    let (b, d) = image(&PAULI_X);
    [[a, b], [c, d]]
}

/// The 24 single-qubit Cliffords modulo phase, from words of length at most 6
/// in `H` and `S`, shortest word first.
pub fn clifford_table() -> &'static [SingleQubitClifford] {
    static TABLE: OnceLock<Vec<SingleQubitClifford>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<SingleQubitClifford> = Vec::new();
        let mut frontier = vec![(String::new(), PAULI_I)];
        for _ in 0..=6 {
            let mut next = Vec::new();
            for (word, u) in frontier {
                if table.iter().any(|t| equal_up_to_phase(&t.u, &u)) {
                    continue;
                }
                table.push(SingleQubitClifford {
                    word: word.clone(),
                    u,
                    symplectic: conjugation_block(&u),
                });
                for (letter, gate) in [('H', &H), ('S', &S)] {
                    next.push((format!("{word}{letter}"), mul(gate, &u)));
                }
            }
            frontier = next;
        }
        table
    })
}

/// One tabulated unitary per qubit whose conjugation action is `q`'s block.
pub fn lift_local_clifford(q: &LocalCliffordOp) -> Result<Vec<SingleQubitClifford>, OracleError> {
    (0..q.n())
        .map(|i| {
            let block = q.block(i);
            clifford_table()
                .iter()
                .find(|c| c.symplectic == block)
                .cloned()
                .ok_or(OracleError::NoMatch { qubit: i })
        })
        .collect()
}

/// `U_1 ⊗ … ⊗ U_n |ψ⟩`.
pub fn apply_local_unitaries(
    state: &StateVector,
    unitaries: &[SingleQubitClifford],
) -> Result<StateVector, OracleError> {
    check_match(state.n, unitaries.len())?;
    let mut out = state.clone();
    for (q, c) in unitaries.iter().enumerate() {
        out.apply_single_qubit(q, &c.u);
    }
    Ok(out)
}

/// Lifts `q` and applies it to `state`.
pub fn apply_local_clifford(
    state: &StateVector,
    q: &LocalCliffordOp,
) -> Result<StateVector, OracleError> {
    apply_local_unitaries(state, &lift_local_clifford(q)?)
}
