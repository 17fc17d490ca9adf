//! Moore-Penrose inverses, {1}-inverse families, and `AXB = C` solvability.

use crate::matrix::ComplexMatrix;
use crate::svd::svd;
use crate::tol::TolerancePolicy;
use crate::Error;
use serde::Serialize;

/// Residuals of the four Penrose equations for a candidate inverse `X`:
/// `TXT = T`, `XTX = X`, `(TX)* = TX`, `(XT)* = XT`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PenroseResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }

    /// Acceptance test: all residuals within `atol * (1 + |T| + |X|)`.
    pub fn within(&self, atol: f64, t: &ComplexMatrix, x: &ComplexMatrix) -> bool {
        self.max() <= atol * (1.0 + t.frobenius_norm() + x.frobenius_norm())
    }
}

/// Moore-Penrose inverse via the SVD under the relative rank cutoff.
/// Every finite matrix has closed range, so this never fails for finite
/// inputs; the zero matrix maps to the zero matrix of transposed shape.
pub fn mp_inverse(t: &ComplexMatrix, tol: &TolerancePolicy) -> Result<ComplexMatrix, Error> {
    let dec = svd(t)?;
    let r = dec.rank(tol);
    if r == 0 {
        return Ok(ComplexMatrix::zeros(t.cols(), t.rows()));
    }
    let ur = dec.u.columns(0, r);
    let vr = dec.v.columns(0, r);
    let mut vs = vr.clone();
    for j in 0..r {
        let inv = 1.0 / dec.sigma[j];
        for i in 0..vs.rows() {
            vs[(i, j)] *= inv;
        }
    }
    Ok(&vs * &ur.adjoint())
}

/// Measure the four Penrose residuals; pure measurement, no thresholding.
pub fn verify_penrose(t: &ComplexMatrix, x: &ComplexMatrix) -> Result<PenroseResiduals, Error> {
    if t.cols() != x.rows() || t.rows() != x.cols() {
        return Err(Error::ShapeMismatch {
            context: "candidate inverse must have the transposed shape",
            got_rows: x.rows(),
            got_cols: x.cols(),
            want_rows: t.cols(),
            want_cols: t.rows(),
        });
    }
    let tx = t * x;
    let xt = x * t;
    let r1 = (&tx * t).diff_norm(t);
    let r2 = (&xt * x).diff_norm(x);
    let r3 = tx.hermitian_residual();
    let r4 = xt.hermitian_residual();
    Ok(PenroseResiduals { r1, r2, r3, r4 })
}

/// One member of the {1}-inverse family of `T`:
/// `X = T^+ + V - T^+ T V T T^+`, which satisfies `T X T = T` for every
/// choice of `V`. With `V = 0` this is the Moore-Penrose inverse itself, and
/// for invertible `T` the correction cancels `V` entirely.
pub fn one_inverse_sample(
    t: &ComplexMatrix,
    v: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ComplexMatrix, Error> {
    if v.rows() != t.cols() || v.cols() != t.rows() {
        return Err(Error::ShapeMismatch {
            context: "free parameter must have the transposed shape",
            got_rows: v.rows(),
            got_cols: v.cols(),
            want_rows: t.cols(),
            want_cols: t.rows(),
        });
    }
    let pinv = mp_inverse(t, tol)?;
    let left = &pinv * t; // T^+ T
    let right = t * &pinv; // T T^+
    let correction = &(&left * v) * &right;
    Ok(&(&pinv + v) - &correction)
}

/// Outcome of the solvability test for `A X B = C`.
#[derive(Debug, Clone, Serialize)]
pub struct AxbSolution {
    pub solvable: bool,
    /// `A^+ C B^+` when solvable; still reported otherwise as the
    /// least-squares candidate.
    pub particular: ComplexMatrix,
    /// Shape of the full solution family when solvable.
    pub homogeneous_recipe: String,
    /// `|A A^+ C B^+ B - C|`, the quantity the solvability decision is
    /// made on.
    pub consistency_residual: f64,
}

/// Solvability of `A X B = C`: a solution exists iff `A A^- C B^- B = C`
/// for (any, equivalently every) {1}-inverses of `A` and `B`; the test uses
/// the Moore-Penrose members. When solvable, the general solution is
/// `X = A^+ C B^+ + V - A^+ A V B B^+` over free `V`.
pub fn solve_axb_c(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<AxbSolution, Error> {
    if c.rows() != a.rows() || c.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            context: "right-hand side must be rows(A) x cols(B)",
            got_rows: c.rows(),
            got_cols: c.cols(),
            want_rows: a.rows(),
            want_cols: b.cols(),
        });
    }
    let a_pinv = mp_inverse(a, tol)?;
    let b_pinv = mp_inverse(b, tol)?;
    let particular = &(&a_pinv * c) * &b_pinv;
    let projected = &(a * &particular) * b;
    let consistency_residual = projected.diff_norm(c);
    let solvable = consistency_residual <= tol.eq_atol * (1.0 + c.frobenius_norm());
    Ok(AxbSolution {
        solvable,
        particular,
        homogeneous_recipe:
            "X = A^+ C B^+ + V - A^+ A V B B^+ for an arbitrary V of shape cols(A) x rows(B)"
                .to_string(),
        consistency_residual,
    })
}
