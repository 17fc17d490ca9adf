//! Singular value decomposition for desk-scale complex matrices.
//!
//! The factorization is driven by the Hermitian Jacobi eigendecomposition
//! of the Gram matrix `T* T`, after which the image columns `T v_i` are
//! re-orthogonalized by one-sided Jacobi (Hestenes) sweeps. The polish step
//! recovers the small singular values to near machine precision, which the
//! Gram spectrum alone cannot resolve; left singular vectors are the
//! normalized images. Intended for matrices up to roughly 64x64.

use crate::matrix::{vec_dot, vec_norm, ComplexMatrix};
use crate::tol::TolerancePolicy;
use crate::{Complex64, Error};

/// Thin SVD `T = U diag(sigma) V*` with `k = min(rows, cols)` columns and
/// singular values sorted in descending order. Columns of `u` past the
/// numerical rank are normalized junk images and must not be used without
/// applying a rank cutoff.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Number of singular values retained under the relative cutoff.
    pub fn rank(&self, tol: &TolerancePolicy) -> usize {
        let cutoff = self.sigma.first().copied().unwrap_or(0.0) * tol.rank_rtol;
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }
}

const MAX_POLISH_SWEEPS: usize = 40;

pub fn svd(t: &ComplexMatrix) -> Result<Svd, Error> {
    if t.rows() < t.cols() {
        let s = svd(&t.adjoint())?;
        return Ok(Svd {
            u: s.v,
            sigma: s.sigma,
            v: s.u,
        });
    }

    let n = t.cols();
    let gram = &t.adjoint() * t;
    let eig = crate::eig::hermitian_eigen(&gram)?;
    let mut v = eig.vectors;
    let mut w = t * &v;

    polish_columns(&mut w, &mut v)?;

    // Sort columns of (W, V) jointly by image norm, descending.
    let mut norms: Vec<f64> = (0..n).map(|j| vec_norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let wp = ComplexMatrix::from_fn(w.rows(), n, |i, j| w[(i, order[j])]);
    let vp = ComplexMatrix::from_fn(v.rows(), n, |i, j| v[(i, order[j])]);
    norms = order.iter().map(|&j| norms[j]).collect();

    let mut u = ComplexMatrix::zeros(t.rows(), n);
    for (j, &nj) in norms.iter().enumerate() {
        if nj > 0.0 {
            let col: Vec<Complex64> = wp.column(j).iter().map(|z| z / nj).collect();
            u.set_column(j, &col);
        }
    }
    Ok(Svd {
        u,
        sigma: norms,
        v: vp,
    })
}

/// One-sided Jacobi sweeps orthogonalizing the columns of `w`, mirroring
/// every rotation into `v`. Pairs with exactly zero inner product are never
/// rotated, so disjointly supported columns stay disjoint.
fn polish_columns(w: &mut ComplexMatrix, v: &mut ComplexMatrix) -> Result<(), Error> {
    let n = w.cols();
    for _sweep in 0..MAX_POLISH_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let wp = w.column(p);
                let wq = w.column(q);
                let hpq = vec_dot(&wp, &wq);
                let mag = hpq.norm();
                if mag == 0.0 {
                    continue;
                }
                let hpp = wp.iter().map(|z| z.norm_sqr()).sum::<f64>();
                let hqq = wq.iter().map(|z| z.norm_sqr()).sum::<f64>();
                if mag * mag <= 1e-60 * hpp * hqq {
                    continue;
                }
                if mag <= 1e-16 * (hpp * hqq).sqrt() {
                    continue;
                }
                rotated = true;

                let phase = hpq / mag;
                let tau = (hqq - hpp) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for i in 0..w.rows() {
                    let a = w[(i, p)];
                    let b = w[(i, q)];
                    w[(i, p)] = a * c - b * s * phase.conj();
                    w[(i, q)] = a * s * phase + b * c;
                }
                for i in 0..v.rows() {
                    let a = v[(i, p)];
                    let b = v[(i, q)];
                    v[(i, p)] = a * c - b * s * phase.conj();
                    v[(i, q)] = a * s * phase + b * c;
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    // Declaring convergence after the sweep cap is safe here: leftover
    // coupling is at worst of the order of the skip thresholds.
    Ok(())
}

/// Largest singular value; for Hermitian inputs this is the spectral radius.
pub fn operator_norm(t: &ComplexMatrix) -> f64 {
    svd(t)
        .map(|s| s.sigma.first().copied().unwrap_or(0.0))
        .unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::Rng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(s: &Svd) -> ComplexMatrix {
        let k = s.sigma.len();
        let mut us = s.u.clone();
        for j in 0..k {
            for i in 0..us.rows() {
                us[(i, j)] *= s.sigma[j];
            }
        }
        &us * &s.v.adjoint()
    }

    // ||[1-i]|| = sqrt(2).
    #[test]
    fn norm_of_one_by_one() {
        let t = ComplexMatrix::scalar(c(1.0, -1.0));
        assert!((operator_norm(&t) - 2f64.sqrt()).abs() < 1e-15);
    }

    // diag(3, -1) has operator norm 3.
    #[test]
    fn norm_of_diagonal() {
        let t = ComplexMatrix::diag(&[3.0, -1.0]);
        assert!((operator_norm(&t) - 3.0).abs() < 1e-14);
    }

    // Independent oracle: power iteration on T*T.
    fn power_iteration_norm(t: &ComplexMatrix, iters: usize) -> f64 {
        let g = &t.adjoint() * t;
        let mut x: Vec<Complex64> = (0..g.rows())
            .map(|i| c(1.0 + (i as f64) * 0.1, 0.3 - (i as f64) * 0.07))
            .collect();
        let mut lam = 0.0;
        for _ in 0..iters {
            let y = g.apply(&x);
            lam = vec_norm(&y);
            if lam == 0.0 {
                return 0.0;
            }
            x = y.iter().map(|z| z / lam).collect();
        }
        lam.sqrt()
    }

    #[test]
    fn norm_matches_power_iteration_oracle() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let t = gen::matrix_gaussian(&mut rng, 8, 8);
        let by_svd = operator_norm(&t);
        let by_power = power_iteration_norm(&t, 400);
        assert!(
            (by_svd - by_power).abs() <= 1e-8 * (1.0 + by_power),
            "svd {by_svd} vs power {by_power}"
        );
    }

    #[test]
    fn zero_matrix() {
        let t = ComplexMatrix::zeros(3, 2);
        let s = svd(&t).unwrap();
        assert!(s.sigma.iter().all(|&x| x == 0.0));
        assert_eq!(s.rank(&TolerancePolicy::for_dims(3, 2)), 0);
    }

    #[test]
    fn random_rectangular_roundtrip() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for (m, n) in [(5usize, 3usize), (3, 5), (8, 8), (16, 11)] {
            let t = gen::matrix_gaussian(&mut rng, m, n);
            let s = svd(&t).unwrap();
            assert!(reconstruct(&s).close_to(&t, 1e-12), "roundtrip {m}x{n}");
            // V unitary, retained U columns orthonormal.
            let k = n.min(m);
            let gv = &s.v.adjoint() * &s.v;
            assert!(gv.close_to(&ComplexMatrix::identity(k.max(s.v.cols())), 1e-11));
            let r = s.rank(&TolerancePolicy::for_dims(m, n));
            if r > 0 {
                let ur = s.u.columns(0, r);
                let gu = &ur.adjoint() * &ur;
                assert!(gu.close_to(&ComplexMatrix::identity(r), 1e-11));
            }
        }
    }

    #[test]
    fn exact_rank_decided_correctly() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(19);
        for _ in 0..50 {
            let m = rng.gen_range(2..=16);
            let n = rng.gen_range(2..=16);
            let r = rng.gen_range(0..=m.min(n));
            let t = gen::matrix_rank(&mut rng, m, n, r);
            let s = svd(&t).unwrap();
            let tol = TolerancePolicy::for_dims(m, n);
            assert_eq!(s.rank(&tol), r, "rank misidentified for {m}x{n} rank {r}");
        }
    }
}
