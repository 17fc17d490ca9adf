//! Positivity tests, positive square roots, and absolute values.

use crate::eig::hermitian_eigen;
use crate::matrix::ComplexMatrix;
use crate::svd::svd;
use crate::tol::TolerancePolicy;
use crate::{Complex64, Error};

/// `T >= 0` within tolerance: Hermitian up to `eq_atol` and the spectrum of
/// the Hermitian part bounded below by `-psd_atol` (scaled by the norm).
pub fn is_positive(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<bool, Error> {
    t.require_square()?;
    if t.hermitian_residual() > tol.eq_atol * (1.0 + t.frobenius_norm()) {
        return Ok(false);
    }
    let eig = hermitian_eigen(t)?;
    let scale = eig.values.first().map(|v| v.abs()).unwrap_or(0.0).max(1.0);
    Ok(eig.values.iter().all(|&lam| lam >= -tol.psd_atol * scale))
}

/// Positive square root of a positive operator.
///
/// Eigenvalues below the rank cutoff are flushed to zero before taking the
/// root, so the result has exactly the numerical range of the input; small
/// negative noise eigenvalues within `psd_atol` are clamped.
pub fn psd_sqrt(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ComplexMatrix, Error> {
    t.require_square()?;
    if !is_positive(t, tol)? {
        return Err(Error::NotPositive {
            reason: format!(
                "hermitian residual {:.3e}, or an eigenvalue below -{:.1e}",
                t.hermitian_residual(),
                tol.psd_atol
            ),
        });
    }
    let eig = hermitian_eigen(t)?;
    let lam_max = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let cutoff = lam_max * tol.rank_rtol;
    let roots: Vec<f64> = eig
        .values
        .iter()
        .map(|&lam| if lam > cutoff { lam.sqrt() } else { 0.0 })
        .collect();
    let d = ComplexMatrix::diag(&roots);
    Ok(&(&eig.vectors * &d) * &eig.vectors.adjoint())
}

/// `|T| = (T* T)^(1/2)`, computed from the SVD as `V diag(sigma) V*` with
/// the same rank cutoff as every other spectral operation.
pub fn abs_value(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ComplexMatrix, Error> {
    let dec = svd(t)?;
    let r = dec.rank(tol);
    let n = t.cols();
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..r {
        d[(i, i)] = Complex64::new(dec.sigma[i], 0.0);
    }
    Ok(&(&dec.v * &d) * &dec.v.adjoint())
}
