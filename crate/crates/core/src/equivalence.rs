//! Local-Clifford equivalence of stabilizer states.
//!
//! `S` and `S'` are equivalent iff some local Clifford `Q` satisfies
//! `Sᵀ Qᵀ P S' = 0`. That is `n²` linear equations in the `4n` diagonal entries
//! of `Q`; the solver takes the null space of this system and searches it for a
//! vector that also satisfies `A_i D_i + B_i C_i = 1` on every qubit.

use thiserror::Error;

use crate::clifford::LocalCliffordOp;
use crate::gf2::{BitMatrix, BitVec, WORD_BITS};
use crate::graphs::Graph;
use crate::par::Execution;
use crate::stabilizer::StabilizerGenMatrix;

/// Candidate vectors examined before giving up with [`Verdict::Indeterminate`].
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 24;

/// Candidates per work unit of the search.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("size mismatch: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error(
        "internal error: candidate {candidate} satisfies the constraints but fails verification"
    )]
    WitnessRejected { candidate: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(LocalCliffordOp),
    Inequivalent,
    /// The cap was reached before the solution space was exhausted.
    Indeterminate {
        searched: u64,
        space_dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceResult {
    pub verdict: Verdict,
    /// Dimension of the null space of the linear system.
    pub space_dim: usize,
    /// Nonzero candidates examined (for a witness, its position in the enumeration).
    pub searched: u64,
}

impl EquivalenceResult {
    pub fn witness(&self) -> Option<&LocalCliffordOp> {
        match &self.verdict {
            Verdict::Equivalent(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self.verdict, Verdict::Equivalent(_))
    }
}

/// The `n² × 4n` system. Row `a·n + b` is the condition that `Q` maps generator
/// `a` of `s` to something commuting with generator `b` of `t`; columns are
/// `A_1..A_n, B_1..B_n, C_1..C_n, D_1..D_n`.
pub fn build_linear_system(
    s: &StabilizerGenMatrix,
    t: &StabilizerGenMatrix,
) -> Result<BitMatrix, EquivalenceError> {
    let n = s.n();
    if t.n() != n {
        return Err(EquivalenceError::SizeMismatch {
            left: n,
            right: t.n(),
        });
    }
    let (sm, tm) = (s.matrix(), t.matrix());
    let mut system = BitMatrix::zeros(n * n, 4 * n);
    for a in 0..n {
        for b in 0..n {
            let row = system.row_mut(a * n + b);
            for i in 0..n {
                let (z, x) = (sm.get(i, a), sm.get(n + i, a));
                let (z2, x2) = (tm.get(i, b), tm.get(n + i, b));
                row.set(i, z & x2);
                row.set(n + i, x & x2);
                row.set(2 * n + i, z & z2);
                row.set(3 * n + i, x & z2);
            }
        }
    }
    Ok(system)
}

/// Null-space vectors split into their A, B, C, D blocks, packed side by side.
struct Packed {
    n: usize,
    words: usize,
    basis: Vec<Vec<u64>>,
}

impl Packed {
    fn new(n: usize, basis: &[BitVec]) -> Self {
        let words = n.div_ceil(WORD_BITS).max(1);
        let basis = basis
            .iter()
            .map(|v| {
                let mut packed = vec![0u64; 4 * words];
                for block in 0..4 {
                    let part = v.slice(block * n, n);
                    packed[block * words..block * words + part.words().len()]
                        .copy_from_slice(part.words());
                }
                packed
            })
            .collect();
        Self { n, words, basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coefficient of basis vector `j` is bit `dim - 1 - j` of `k`.
    fn vector(&self, k: u64) -> Vec<u64> {
        let d = self.dim();
        let mut out = vec![0u64; 4 * self.words];
        for (j, b) in self.basis.iter().enumerate() {
            if (k >> (d - 1 - j)) & 1 == 1 {
                xor_into(&mut out, b);
            }
        }
        out
    }

    fn satisfies_constraints(&self, v: &[u64]) -> bool {
        let w = self.words;
        (0..w).all(|i| {
            let bits = if i + 1 == w && !self.n.is_multiple_of(WORD_BITS) {
                self.n % WORD_BITS
            } else {
                WORD_BITS
            };
            let mask = if bits == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
            let (a, b, c, d) = (v[i], v[w + i], v[2 * w + i], v[3 * w + i]);
            ((a & d) ^ (b & c)) & mask == mask
        })
    }

    /// First `k` in `start..end` whose vector satisfies the constraints.
    fn search(&self, start: u64, end: u64) -> Option<u64> {
        let d = self.dim();
        let mut cur = self.vector(start);
        let mut k = start;
        loop {
            if self.satisfies_constraints(&cur) {
                return Some(k);
            }
            if k + 1 >= end {
                return None;
            }
            let mut flips = k ^ (k + 1);
            while flips != 0 {
                let p = flips.trailing_zeros() as usize;
                xor_into(&mut cur, &self.basis[d - 1 - p]);
                flips &= flips - 1;
            }
            k += 1;
        }
    }

    fn to_op(&self, v: &[u64]) -> Option<LocalCliffordOp> {
        let w = self.words;
        let block = |i: usize| BitVec::from_words(self.n, v[i * w..(i + 1) * w].to_vec());
        LocalCliffordOp::new(block(0), block(1), block(2), block(3)).ok()
    }
}

fn xor_into(target: &mut [u64], source: &[u64]) {
    for (t, s) in target.iter_mut().zip(source) {
        *t ^= s;
    }
}

fn chunk_range(index: u64, limit: u64) -> (u64, u64) {
    let start = 1 + index * CHUNK;
    (start, (start + CHUNK).min(limit + 1))
}

fn find_sequential(packed: &Packed, limit: u64) -> Option<u64> {
    (0..limit.div_ceil(CHUNK)).find_map(|c| {
        let (start, end) = chunk_range(c, limit);
        packed.search(start, end)
    })
}

#[cfg(feature = "parallel")]
fn find_parallel(packed: &Packed, limit: u64) -> Option<u64> {
    use rayon::prelude::*;
    (0..limit.div_ceil(CHUNK))
        .into_par_iter()
        .find_map_first(|c| {
            let (start, end) = chunk_range(c, limit);
            packed.search(start, end)
        })
}

#[cfg(not(feature = "parallel"))]
fn find_parallel(packed: &Packed, limit: u64) -> Option<u64> {
    find_sequential(packed, limit)
}

pub fn test_equivalence(
    s: &StabilizerGenMatrix,
    t: &StabilizerGenMatrix,
    search_cap: u64,
) -> Result<EquivalenceResult, EquivalenceError> {
    test_equivalence_with(s, t, search_cap, Execution::default())
}

/// Searches the null space in lexicographic order of basis coefficients and
/// reports the first valid `Q`, whatever `exec` is.
pub fn test_equivalence_with(
    s: &StabilizerGenMatrix,
    t: &StabilizerGenMatrix,
    search_cap: u64,
    exec: Execution,
) -> Result<EquivalenceResult, EquivalenceError> {
    let system = build_linear_system(s, t)?;
    let packed = Packed::new(s.n(), &system.solve_homogeneous());
    let d = packed.dim();
    // The zero vector always solves the system and never the constraints.
    let total = if d >= 64 { u64::MAX } else { (1u64 << d) - 1 };
    let exhaustive = total <= search_cap;
    let limit = total.min(search_cap);

    let found = if exec.is_parallel() {
        find_parallel(&packed, limit)
    } else {
        find_sequential(&packed, limit)
    };

    let (verdict, searched) = match found {
        Some(k) => {
            let q = packed
                .to_op(&packed.vector(k))
                .ok_or(EquivalenceError::WitnessRejected { candidate: k })?;
            let image = q.apply_to_stabilizer(s).expect("sizes checked");
            if !image.same_subspace(t) {
                return Err(EquivalenceError::WitnessRejected { candidate: k });
            }
            (Verdict::Equivalent(q), k)
        }
        None if exhaustive => (Verdict::Inequivalent, total),
        None => (
            Verdict::Indeterminate {
                searched: limit,
                space_dim: d,
            },
            limit,
        ),
    };
    Ok(EquivalenceResult {
        verdict,
        space_dim: d,
        searched,
    })
}

pub fn test_equivalence_graphs(
    g: &Graph,
    h: &Graph,
    search_cap: u64,
) -> Result<EquivalenceResult, EquivalenceError> {
    test_equivalence_graphs_with(g, h, search_cap, Execution::default())
}

pub fn test_equivalence_graphs_with(
    g: &Graph,
    h: &Graph,
    search_cap: u64,
    exec: Execution,
) -> Result<EquivalenceResult, EquivalenceError> {
    test_equivalence_with(
        &StabilizerGenMatrix::from_graph(g),
        &StabilizerGenMatrix::from_graph(h),
        search_cap,
        exec,
    )
}
