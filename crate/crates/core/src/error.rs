use crate::linalg::Space;

/// Errors reported by the kernel and the higher-level modules.
///
/// Contract violations (dimension or space-tag mismatches) and numerical
/// precondition failures carry enough context to identify the offending
/// input; solver infeasibility carries a certificate instead (see
/// [`crate::solver::Infeasibility`]).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("space tag mismatch: {left:?} vs {right:?} in {context}")]
    SpaceMismatch {
        left: Space,
        right: Space,
        context: &'static str,
    },

    #[error("operator is not Hermitian: asymmetry norm {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error("vectors are not orthonormal: max Gram defect {max_defect:.3e} at pair ({i},{j})")]
    NotOrthonormal { max_defect: f64, i: usize, j: usize },

    #[error("rank-deficient input: vector {index} is dependent on its predecessors")]
    RankDeficient { index: usize },

    #[error("near-zero norm ({norm:.3e}); cannot normalize")]
    NearZeroNorm { norm: f64 },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("detectors do not commute: pair ({i},{j}) with commutator norm {norm:.3e}")]
    NonCommutingDetectors { i: usize, j: usize, norm: f64 },

    #[error("detection constraint infeasible: {0}")]
    Infeasible(crate::solver::Infeasibility),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
}
