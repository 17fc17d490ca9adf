//! Subspaces as orthogonal projections, with range, meet, and join calculus.

use crate::matrix::{orthonormalize_columns, ComplexMatrix};
use crate::svd::svd;
use crate::tol::TolerancePolicy;
use crate::Error;
use serde::Serialize;

/// A subspace of an ambient space, stored as its orthogonal projection.
#[derive(Debug, Clone, Serialize)]
pub struct Subspace {
    pub dim: usize,
    pub projector: ComplexMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            dim: 0,
            projector: ComplexMatrix::zeros(ambient, ambient),
        }
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace {
            dim: ambient,
            projector: ComplexMatrix::identity(ambient),
        }
    }

    pub fn ambient(&self) -> usize {
        self.projector.rows()
    }

    /// Orthogonal complement.
    pub fn complement(&self) -> Self {
        let n = self.ambient();
        Subspace {
            dim: n - self.dim,
            projector: &ComplexMatrix::identity(n) - &self.projector,
        }
    }

    /// Orthonormal basis recovered from the projector's top eigenvectors.
    /// A projector's spectrum is {0, 1}, so a fixed 1/2 threshold is robust.
    pub fn basis(&self) -> Option<ComplexMatrix> {
        if self.dim == 0 {
            return None;
        }
        let dec = svd(&self.projector).ok()?;
        let r = dec.sigma.iter().filter(|&&s| s > 0.5).count();
        Some(dec.u.columns(0, r))
    }

    /// Consistency of the stored fields: Hermitian, idempotent, and the
    /// trace close to the advertised dimension.
    pub fn validate(&self, tol: &TolerancePolicy) -> Result<(), Error> {
        let p = &self.projector;
        p.require_square()?;
        let herm = p.hermitian_residual();
        let idem = (p * p).diff_norm(p);
        if herm > tol.eq_atol * (1.0 + p.frobenius_norm()) {
            return Err(Error::NotProjector {
                reason: format!("hermitian residual {herm:.3e}"),
            });
        }
        if idem > tol.eq_atol * (1.0 + p.frobenius_norm()) {
            return Err(Error::NotProjector {
                reason: format!("idempotency residual {idem:.3e}"),
            });
        }
        let tr = p.trace().re;
        if (tr - self.dim as f64).abs() > 0.1 {
            return Err(Error::NotProjector {
                reason: format!("trace {tr:.6} does not match dim {}", self.dim),
            });
        }
        Ok(())
    }
}

/// Check that a square matrix is an orthogonal projection within tolerance.
pub fn require_projector(p: &ComplexMatrix, tol: &TolerancePolicy) -> Result<(), Error> {
    p.require_square()?;
    let scale = 1.0 + p.frobenius_norm();
    let herm = p.hermitian_residual();
    if herm > tol.eq_atol * scale {
        return Err(Error::NotProjector {
            reason: format!("hermitian residual {herm:.3e}"),
        });
    }
    let idem = (p * p).diff_norm(p);
    if idem > tol.eq_atol * scale {
        return Err(Error::NotProjector {
            reason: format!("idempotency residual {idem:.3e}"),
        });
    }
    Ok(())
}

/// Orthogonal projection onto the column space of `T`, via the SVD with the
/// relative rank cutoff from `tol`.
pub fn range_projector(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Subspace, Error> {
    let dec = svd(t)?;
    let r = dec.rank(tol);
    if r == 0 {
        return Ok(Subspace::zero(t.rows()));
    }
    let ur = dec.u.columns(0, r);
    Ok(Subspace {
        dim: r,
        projector: &ur * &ur.adjoint(),
    })
}

/// `R(A) ⊆ R(B)`, decided as `|(I - P_B) P_A| <= eq_atol`.
pub fn range_contains(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch {
            context: "range_contains requires equal row counts",
            got_rows: b.rows(),
            got_cols: b.cols(),
            want_rows: a.rows(),
            want_cols: a.cols(),
        });
    }
    let pa = range_projector(a, tol)?;
    let pb = range_projector(b, tol)?;
    let n = a.rows();
    let residual =
        (&(&ComplexMatrix::identity(n) - &pb.projector) * &pa.projector).frobenius_norm();
    Ok(residual <= tol.eq_atol)
}

/// Intersection of two subspaces from principal angles: the singular values
/// of `Q_M* Q_N` equal to 1 (within `sqrt(rank_rtol)`, which sits well above
/// the accuracy of computed cosines while keeping generic angles out) mark
/// common directions.
pub fn subspace_meet(m: &Subspace, n: &Subspace, tol: &TolerancePolicy) -> Result<Subspace, Error> {
    if m.ambient() != n.ambient() {
        return Err(Error::ShapeMismatch {
            context: "subspace_meet requires a common ambient space",
            got_rows: n.ambient(),
            got_cols: n.ambient(),
            want_rows: m.ambient(),
            want_cols: m.ambient(),
        });
    }
    let ambient = m.ambient();
    let (qm, qn) = match (m.basis(), n.basis()) {
        (Some(qm), Some(qn)) => (qm, qn),
        _ => return Ok(Subspace::zero(ambient)),
    };
    let cross = svd(&(&qm.adjoint() * &qn))?;
    let cos_cut = 1.0 - tol.rank_rtol.sqrt();
    let r = cross.sigma.iter().filter(|&&s| s >= cos_cut).count();
    if r == 0 {
        return Ok(Subspace::zero(ambient));
    }
    // Principal directions with unit cosine, expressed in the ambient space
    // and re-orthonormalized for safety.
    let x = cross.u.columns(0, r);
    let raw = &qm * &x;
    let basis = orthonormalize_columns(&raw, 1e-6).ok_or(Error::NotProjector {
        reason: "degenerate principal directions".into(),
    })?;
    Ok(Subspace {
        dim: basis.cols(),
        projector: &basis * &basis.adjoint(),
    })
}

/// Closed span of the union: the range of the concatenated bases.
pub fn subspace_join(m: &Subspace, n: &Subspace, tol: &TolerancePolicy) -> Result<Subspace, Error> {
    if m.ambient() != n.ambient() {
        return Err(Error::ShapeMismatch {
            context: "subspace_join requires a common ambient space",
            got_rows: n.ambient(),
            got_cols: n.ambient(),
            want_rows: m.ambient(),
            want_cols: m.ambient(),
        });
    }
    match (m.basis(), n.basis()) {
        (None, None) => Ok(Subspace::zero(m.ambient())),
        (Some(_), None) => Ok(m.clone()),
        (None, Some(_)) => Ok(n.clone()),
        (Some(qm), Some(qn)) => range_projector(&ComplexMatrix::hstack(&[&qm, &qn]), tol),
    }
}
