//! Choice between the sequential and the rayon-backed search loops.

/// How orbit expansion and equivalence search distribute their work.
///
/// Both variants return identical results. Without the `parallel` feature,
/// `Parallel` runs sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether work is actually spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}
