use serde::{Deserialize, Serialize};

/// Numerical decision thresholds shared by every operation.
///
/// `rank_rtol` is a *relative* singular-value cutoff: `sigma_i` is retained
/// iff `sigma_i > rank_rtol * sigma_1`. `eq_atol` scales matrix-equality
/// tests, and `psd_atol` is the allowance for slightly negative eigenvalues
/// when deciding positivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub rank_rtol: f64,
    pub eq_atol: f64,
    pub psd_atol: f64,
}

pub const DEFAULT_EQ_ATOL: f64 = 1e-8;
pub const DEFAULT_PSD_ATOL: f64 = 1e-10;

impl TolerancePolicy {
    /// Default policy for a matrix with the given dimensions:
    /// `rank_rtol = max(rows, cols) * 2^-52`, `eq_atol = 1e-8`,
    /// `psd_atol = 1e-10`.
    pub fn for_dims(rows: usize, cols: usize) -> Self {
        TolerancePolicy {
            rank_rtol: rows.max(cols).max(1) as f64 * f64::EPSILON,
            eq_atol: DEFAULT_EQ_ATOL,
            psd_atol: DEFAULT_PSD_ATOL,
        }
    }

    pub fn with_rank_rtol(self, rank_rtol: f64) -> Self {
        TolerancePolicy { rank_rtol, ..self }
    }

    pub fn with_eq_atol(self, eq_atol: f64) -> Self {
        TolerancePolicy { eq_atol, ..self }
    }

    pub fn with_psd_atol(self, psd_atol: f64) -> Self {
        TolerancePolicy { psd_atol, ..self }
    }

    /// All thresholds must be strictly positive.
    pub fn validate(&self) -> Result<(), crate::Error> {
        if self.rank_rtol > 0.0 && self.eq_atol > 0.0 && self.psd_atol > 0.0 {
            Ok(())
        } else {
            Err(crate::Error::Parse(
                "tolerances must be strictly positive".into(),
            ))
        }
    }
}

impl Default for TolerancePolicy {
    /// Default sized for the largest supported operators (64x64).
    fn default() -> Self {
        TolerancePolicy::for_dims(64, 64)
    }
}
