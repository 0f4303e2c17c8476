//! Reduction of an arbitrary stabilizer state to graph-state form.
//!
//! Given `S = [Z; X]`, [`to_graph_state`] finds a local Clifford `Q` and an
//! invertible `R` with `Q S R = [θ; I]`:
//!
//! 1. column-reduce `X` so its first `k = rank X` columns are independent and the
//!    rest vanish, carrying the same column operations on `Z`;
//! 2. choose `k` qubits whose rows of the reduced `X` are independent (lowest
//!    index first);
//! 3. swap Z and X on every other qubit, which makes the new X block invertible;
//! 4. right-multiply by its inverse, giving `[θ₀; I]` with `θ₀` symmetric;
//! 5. clear each nonzero diagonal entry of `θ₀` with the phase block
//!    `[[1, 1], [0, 1]]` on that qubit.
//!
//! No qubit is ever permuted, so `Q` stays local on the original qubits.

use thiserror::Error;

use crate::clifford::{
    block_mul, LocalCliffordOp, QubitBlock, HADAMARD_BLOCK, IDENTITY_BLOCK, PHASE_BLOCK,
};
use crate::gf2::BitMatrix;
use crate::graphs::Graph;
use crate::stabilizer::StabilizerGenMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("internal error: X block is singular after the Hadamard step")]
    SingularXBlock,
    #[error("internal error: Z X^-1 is not symmetric")]
    NotSymmetric,
}

/// `graph`, `q` and `r` with `Q · S · R = [θ; I]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWitness {
    pub graph: Graph,
    pub q: LocalCliffordOp,
    pub r: BitMatrix,
}

/// Brings `s` to graph-state standard form. Deterministic in `s`.
pub fn to_graph_state(s: &StabilizerGenMatrix) -> Result<ReductionWitness, ReductionError> {
    let n = s.n();

    // Rows of Xᵀ are the X parts of the generators; row operations on them are
    // column operations on S. Pivot columns of the echelon form are the pivot qubits.
    let (_, transform, pivots) = s.x_block().transpose().rref_with_transform();
    let mut r = transform.transpose();
    let reduced = s.basis_change(&r).expect("echelon transform is invertible");

    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let hadamards: Vec<QubitBlock> = is_pivot
        .iter()
        .map(|&p| if p { IDENTITY_BLOCK } else { HADAMARD_BLOCK })
        .collect();
    let q_h = LocalCliffordOp::from_blocks(&hadamards).expect("invertible blocks");

    let swapped = q_h.apply_to_stabilizer(&reduced).expect("equal sizes");
    let x_inv = swapped
        .x_block()
        .invert()
        .map_err(|_| ReductionError::SingularXBlock)?;
    r = r.mat_mul(&x_inv).expect("n x n");
    let theta0 = swapped.z_block().mat_mul(&x_inv).expect("n x n");
    if !theta0.is_symmetric() {
        return Err(ReductionError::NotSymmetric);
    }

    let diag = theta0.diagonal();
    let blocks: Vec<QubitBlock> = hadamards
        .iter()
        .enumerate()
        .map(|(i, h)| {
            if diag.get(i) {
                block_mul(&PHASE_BLOCK, h)
            } else {
                *h
            }
        })
        .collect();
    let q = LocalCliffordOp::from_blocks(&blocks).expect("invertible blocks");
    let graph = Graph::from_adjacency(theta0.set_diagonal_zero())
        .map_err(|_| ReductionError::NotSymmetric)?;
    Ok(ReductionWitness { graph, q, r })
}

/// Recomputes `Q · S · R` and compares it bit-exactly with `[θ; I]`.
pub fn verify_witness(s: &StabilizerGenMatrix, w: &ReductionWitness) -> bool {
    let n = s.n();
    if w.q.n() != n
        || w.graph.n() != n
        || w.r.rows() != n
        || w.r.cols() != n
        || !w.r.is_invertible()
    {
        return false;
    }
    let mapped = w.q.apply_to_stabilizer(s).expect("sizes checked");
    let Ok(product) = mapped.matrix().mat_mul(&w.r) else {
        return false;
    };
    product == *StabilizerGenMatrix::from_graph(&w.graph).matrix()
}
