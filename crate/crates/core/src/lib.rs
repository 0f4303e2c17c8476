//! Graph states, stabilizer generator matrices over GF(2) and their local
//! Clifford equivalence.
//!
//! A stabilizer state on `n` qubits is a `2n × n` generator matrix `[Z; X]`
//! whose columns span a maximal isotropic subspace of the symplectic form. Every
//! such state is locally equivalent to a graph state `[θ; I]` ([`reduction`]),
//! local Clifford maps between graph states decompose into local
//! complementations ([`decomposition`]), and equivalence of two states is a
//! linear system plus per-qubit constraints ([`equivalence`]). [`oracle`]
//! checks all of this against dense statevectors for small `n`.

pub mod clifford;
pub mod decomposition;
pub mod equivalence;
pub mod gf2;
pub mod graphs;
pub mod oracle;
pub mod orbit;
pub mod par;
pub mod reduction;
pub mod stabilizer;
mod text;

pub use clifford::LocalCliffordOp;
pub use decomposition::{LcSequence, LcStep};
pub use gf2::{BitMatrix, BitVec};
pub use graphs::{Graph, Vertex};
pub use par::Execution;
pub use stabilizer::{PauliString, StabilizerGenMatrix};
pub use text::ParseError;
