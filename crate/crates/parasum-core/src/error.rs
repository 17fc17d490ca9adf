use crate::parallel::SummabilityReport;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(
        "shape mismatch: {context} (got {got_rows}x{got_cols}, expected {want_rows}x{want_cols})"
    )]
    ShapeMismatch {
        context: &'static str,
        got_rows: usize,
        got_cols: usize,
        want_rows: usize,
        want_cols: usize,
    },

    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not positive: {reason}")]
    NotPositive { reason: String },

    #[error("operator is not a projection: {reason}")]
    NotProjector { reason: String },

    #[error(
        "operands are not parallel summable (left residual {left:.3e}, right residual {right:.3e})"
    )]
    NotSummable {
        report: Box<SummabilityReport>,
        /// Spread of `A (A+B)^- B` over sampled {1}-inverses, reported as a
        /// diagnostic; expected to exceed tolerance for non-summable pairs.
        diagnostic_spread: f64,
        left: f64,
        right: f64,
    },

    #[error("zero operand where a non-zero operator is required")]
    ZeroOperand,

    #[error("scalar parallel sum requires strictly positive inputs, got {a} and {b}")]
    NonPositiveScalar { a: f64, b: f64 },

    #[error(
        "partial isometry does not act as identity on the combined range (residual {residual:.3e})"
    )]
    InitialSpaceViolation { residual: f64 },

    #[error("Jacobi eigendecomposition did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("module rank mismatch: {0}")]
    RankMismatch(String),

    #[error("algebra mismatch: operands live over different block structures")]
    AlgebraMismatch,

    #[error("matrix does not respect the block structure of the algebra (off-structure mass {residual:.3e})")]
    OffStructure { residual: f64 },

    #[error("entry rule is not a monomial; square roots are only defined for single-term rules")]
    NonMonomialRule,

    #[error("not representable in the parity-diagonal grammar: {0}")]
    NonRepresentable(String),

    #[error("parity limits coincide; the operator lies in the compact-plus-scalar algebra")]
    EqualLimits,

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
