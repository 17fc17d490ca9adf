//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)` with a unitary
//! plane rotation carrying the phase of the entry, so the iteration works
//! directly on complex Hermitian matrices. Cross-block entries that start
//! as exact zeros are never touched, which keeps block-structured inputs
//! block-structured — the module layer relies on this.

use crate::matrix::ComplexMatrix;
use crate::{Complex64, Error};

/// Result of `hermitian_eigen`: `A = V diag(values) V*` with eigenvalues
/// sorted in descending order and eigenvectors in the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of the Hermitian part of `a`.
///
/// The input is symmetrized as `(A + A*)/2` first; callers that need a
/// strict Hermitian-ness check should do it beforehand.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen, Error> {
    a.require_square()?;
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(HermitianEigen {
            values: vec![m[(0, 0)].re],
            vectors: v,
        });
    }

    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        });
    }
    let stop = 1e-15 * scale;
    let entry_floor = 1e-15 * scale / n as f64;

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            return Ok(finish(m, v));
        }

        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= entry_floor {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Also skip entries that are negligible relative to their
                // diagonal, to preserve high relative accuracy.
                if mag <= 1e-16 * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;

                let phase = apq / mag; // e^{i theta}
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // M <- M J : columns p and q.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * c - miq * s * phase.conj();
                    m[(i, q)] = mip * s * phase + miq * c;
                }
                // M <- J* M : rows p and q.
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * c - mqj * s * phase;
                    m[(q, j)] = mpj * s * phase.conj() + mqj * c;
                }
                // The transformed diagonal and the annihilated pair are
                // known in closed form; writing them explicitly avoids
                // accumulating rotation roundoff where it matters most.
                let h = t * mag;
                m[(p, p)] = Complex64::new(app - h, 0.0);
                m[(q, q)] = Complex64::new(aqq + h, 0.0);
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);

                // V <- V J.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * s * phase.conj();
                    v[(i, q)] = vip * s * phase + viq * c;
                }
            }
        }
        if !rotated {
            return Ok(finish(m, v));
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn finish(m: ComplexMatrix, v: ComplexMatrix) -> HermitianEigen {
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}
