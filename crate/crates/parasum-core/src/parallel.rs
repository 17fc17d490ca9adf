//! Parallel summability and the parallel sum `A:B = A (A+B)^+ B`, with its
//! projection corollaries, norm bounds, the self-adjoint block embedding,
//! shared-isometry pairs, and Douglas-style factors for positive pairs.

use crate::geninv::{mp_inverse, one_inverse_sample};
use crate::matrix::ComplexMatrix;
use crate::positive::{abs_value, is_positive, psd_sqrt};
use crate::subspace::{
    range_contains, range_projector, require_projector, subspace_join, subspace_meet, Subspace,
};
use crate::svd::operator_norm;
use crate::tol::TolerancePolicy;
use crate::Error;
use serde::Serialize;

/// Number of {1}-inverses sampled when measuring invariance of
/// `A (A+B)^- B` over the family, and the fixed stream the free parameters
/// are drawn from (results must be reproducible run to run).
const ONE_INVERSE_SAMPLES: usize = 20;
const ONE_INVERSE_SEED: u64 = 0x1a5e_7001;

/// Scalar parallel sum `a:b = ab/(a+b)` for strictly positive reals.
pub fn scalar_parallel(a: f64, b: f64) -> Result<f64, Error> {
    if !a.is_finite() || !b.is_finite() || a <= 0.0 || b <= 0.0 {
        return Err(Error::NonPositiveScalar { a, b });
    }
    Ok(a * b / (a + b))
}

/// Verdicts and residuals of the two summability conditions
/// `A = A (A+B)^+ (A+B)` and `B = (A+B) (A+B)^+ B`, together with the
/// equivalent range inclusions (`R(A*) ⊆ R(A* + B*)` and `R(B) ⊆ R(A+B)`).
#[derive(Debug, Clone, Serialize)]
pub struct SummabilityReport {
    pub residual_left: f64,
    pub residual_right: f64,
    pub range_row_a: bool,
    pub range_col_b: bool,
    pub summable: bool,
    /// Threshold the residual verdict was taken at.
    pub threshold: f64,
}

/// Decide parallel summability of a square pair.
///
/// Positive pairs are always summable in finite dimension (the sum is
/// automatically M-P invertible there).
pub fn is_parallel_summable(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<SummabilityReport, Error> {
    a.require_square()?;
    a.require_same_shape(b, "parallel sum operands")?;
    let sum = a + b;
    let sum_pinv = mp_inverse(&sum, tol)?;
    let left = &(a * &sum_pinv) * &sum; // A (A+B)^+ (A+B)
    let right = &(&sum * &sum_pinv) * b; // (A+B)(A+B)^+ B
    let residual_left = left.diff_norm(a);
    let residual_right = right.diff_norm(b);
    let threshold = tol.eq_atol * (1.0 + a.frobenius_norm() + b.frobenius_norm());
    let range_row_a = range_contains(&a.adjoint(), &sum.adjoint(), tol)?;
    let range_col_b = range_contains(b, &sum, tol)?;
    Ok(SummabilityReport {
        residual_left,
        residual_right,
        range_row_a,
        range_col_b,
        summable: residual_left <= threshold && residual_right <= threshold,
        threshold,
    })
}

/// The parallel sum and its consistency measurements.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelSumResult {
    pub value: ComplexMatrix,
    /// `|value - (A - A (A+B)^+ A)|`.
    pub alt_residual_a: f64,
    /// `|value - (B - B (A+B)^+ B)|`.
    pub alt_residual_b: f64,
    /// Max deviation of `A (A+B)^- B` over sampled {1}-inverses of `A+B`.
    pub invariance_spread: f64,
}

fn invariance_spread(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    sum: &ComplexMatrix,
    value: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<f64, Error> {
    let n = sum.rows();
    let mut rng = crate::gen::trial_rng(ONE_INVERSE_SEED, 0);
    let mut spread: f64 = 0.0;
    for _ in 0..ONE_INVERSE_SAMPLES {
        let v = crate::gen::matrix_gaussian(&mut rng, n, n);
        let g_inv = one_inverse_sample(sum, &v, tol)?;
        let candidate = &(a * &g_inv) * b;
        spread = spread.max(candidate.diff_norm(value));
    }
    Ok(spread)
}

/// `A:B = A (A+B)^+ B` for a parallel summable pair.
///
/// Fails with [`Error::NotSummable`] otherwise; the error carries the
/// summability report and the diagnostic invariance spread, which is then
/// expected to exceed tolerance.
pub fn parallel_sum(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<ParallelSumResult, Error> {
    let report = is_parallel_summable(a, b, tol)?;
    let sum = a + b;
    let sum_pinv = mp_inverse(&sum, tol)?;
    let value = &(a * &sum_pinv) * b;
    if !report.summable {
        let spread = invariance_spread(a, b, &sum, &value, tol)?;
        return Err(Error::NotSummable {
            left: report.residual_left,
            right: report.residual_right,
            report: Box::new(report),
            diagnostic_spread: spread,
        });
    }
    let alt_a = a - &(&(a * &sum_pinv) * a);
    let alt_b = b - &(&(b * &sum_pinv) * b);
    let spread = invariance_spread(a, b, &sum, &value, tol)?;
    Ok(ParallelSumResult {
        alt_residual_a: alt_a.diff_norm(&value),
        alt_residual_b: alt_b.diff_norm(&value),
        invariance_spread: spread,
        value,
    })
}

/// Parallel sum of two projections: `P:Q = (1/2) P_M` with
/// `M = R(P) ∩ R(Q)`. Returns the sum and the meet subspace, after
/// asserting the identity within `eq_atol`.
pub fn projection_parallel(
    p: &ComplexMatrix,
    q: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<(ComplexMatrix, Subspace), Error> {
    require_projector(p, tol)?;
    require_projector(q, tol)?;
    p.require_same_shape(q, "projection pair")?;
    let value = parallel_sum(p, q, tol)?.value;
    let meet = subspace_meet(&range_projector(p, tol)?, &range_projector(q, tol)?, tol)?;
    let half_pm = meet.projector.scale_re(0.5);
    let residual = value.diff_norm(&half_pm);
    if residual > tol.eq_atol * (1.0 + p.frobenius_norm() + q.frobenius_norm()) {
        return Err(Error::NotProjector {
            reason: format!(
                "P:Q deviates from half the meet projection by {residual:.3e}; \
                 the meet may be numerically ambiguous"
            ),
        });
    }
    Ok((value, meet))
}

/// Result of decomposing the span and intersection of two projections.
#[derive(Debug, Clone, Serialize)]
pub struct SumDecomposition {
    pub join: Subspace,
    pub meet: Subspace,
    /// `(M ∩ N)^⊥ = M^⊥ + N^⊥` verified within `eq_atol`.
    pub perp_identity: bool,
    pub perp_residual: f64,
}

/// Span and intersection of two projections without forming bases first:
/// the join projection is `(P_M + P_N)(P_M + P_N)^+`, the meet is twice the
/// parallel sum. The complement identity is cross-checked against the
/// independent basis-level subspace calculus.
pub fn submodule_sum_decomposition(
    pm: &ComplexMatrix,
    pn: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<SumDecomposition, Error> {
    require_projector(pm, tol)?;
    require_projector(pn, tol)?;
    pm.require_same_shape(pn, "projection pair")?;
    let n = pm.rows();
    let sum = pm + pn;
    let join_matrix = &sum * &mp_inverse(&sum, tol)?;
    let join = Subspace {
        dim: join_matrix.trace().re.round() as usize,
        projector: join_matrix,
    };

    let meet_matrix = parallel_sum(pm, pn, tol)?.value.scale_re(2.0);
    let meet = Subspace {
        dim: meet_matrix.trace().re.round() as usize,
        projector: meet_matrix,
    };

    // Independent route: basis-level meet of the ranges, complemented.
    let sm = range_projector(pm, tol)?;
    let sn = range_projector(pn, tol)?;
    let rhs = subspace_join(&sm.complement(), &sn.complement(), tol)?;
    let lhs = &ComplexMatrix::identity(n) - &meet.projector;
    let perp_residual = lhs.diff_norm(&rhs.projector);
    let perp_identity = perp_residual <= tol.eq_atol * (1.0 + n as f64);
    Ok(SumDecomposition {
        join,
        meet,
        perp_identity,
        perp_residual,
    })
}

/// Self-adjoint block embedding `rho(T) = [[0, T], [T*, 0]]`, which has the
/// same operator norm as `T`.
pub fn rho_embed(t: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = t.shape();
    let mut out = ComplexMatrix::zeros(m + n, m + n);
    out.set_block(0, m, t);
    out.set_block(m, 0, &t.adjoint());
    out
}

/// Norm-bound report for a parallel summable pair: is
/// `|A:B| <= |A| : |B|` (scalar parallel sum of the operator norms)?
#[derive(Debug, Clone, Serialize)]
pub struct NormBoundReport {
    pub norm_a: f64,
    pub norm_b: f64,
    pub scalar_bound: f64,
    pub norm_parallel: f64,
    pub bound_holds: bool,
    /// `| |A+B| - (|A| + |B|) |`; the bound provably holds whenever this
    /// triangle equality holds (in particular for positive pairs).
    pub triangle_residual: f64,
}

pub fn check_norm_bound(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<NormBoundReport, Error> {
    let norm_a = operator_norm(a);
    let norm_b = operator_norm(b);
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(Error::ZeroOperand);
    }
    let value = parallel_sum(a, b, tol)?.value;
    let norm_parallel = operator_norm(&value);
    let scalar_bound = scalar_parallel(norm_a, norm_b)?;
    let abs_sum = abs_value(&(a + b), tol)?;
    let abs_a = abs_value(a, tol)?;
    let abs_b = abs_value(b, tol)?;
    let triangle_residual = abs_sum.diff_norm(&(&abs_a + &abs_b));
    Ok(NormBoundReport {
        norm_a,
        norm_b,
        scalar_bound,
        norm_parallel,
        bound_holds: norm_parallel <= scalar_bound + tol.eq_atol,
        triangle_residual,
    })
}

/// A pair `A = U |A|`, `B = U |B|` sharing one partial isometry, together
/// with the verification residuals this construction guarantees.
#[derive(Debug, Clone, Serialize)]
pub struct SharedIsometryPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// `| |A+B| - (|A|+|B|) |`; zero in exact arithmetic.
    pub triangle_residual: f64,
    /// `| (|A|+|B|)^+ - (A+B)^+ U |`.
    pub pinv_residual_left: f64,
    /// `| (A+B)^+ - (|A|+|B|)^+ U* |`.
    pub pinv_residual_right: f64,
}

/// Assemble a shared-isometry pair from positive `|A|`, `|B|` and a partial
/// isometry `U` whose initial space contains `R(|A|) + R(|B|)` (checked).
pub fn shared_isometry_pair(
    abs_a: &ComplexMatrix,
    abs_b: &ComplexMatrix,
    u: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<SharedIsometryPair, Error> {
    abs_a.require_square()?;
    abs_a.require_same_shape(abs_b, "positive pair")?;
    abs_a.require_same_shape(u, "partial isometry")?;
    if !is_positive(abs_a, tol)? || !is_positive(abs_b, tol)? {
        return Err(Error::NotPositive {
            reason: "shared-isometry factors must be positive".into(),
        });
    }
    let uu = &u.adjoint() * u;
    let join = subspace_join(
        &range_projector(abs_a, tol)?,
        &range_projector(abs_b, tol)?,
        tol,
    )?;
    let fixed = &uu * &join.projector;
    let residual = fixed.diff_norm(&join.projector);
    if residual > tol.eq_atol * (1.0 + join.projector.frobenius_norm()) {
        return Err(Error::InitialSpaceViolation { residual });
    }

    let a = u * abs_a;
    let b = u * abs_b;
    let sum_abs = abs_a + abs_b;
    let abs_of_sum = abs_value(&(&a + &b), tol)?;
    let triangle_residual = abs_of_sum.diff_norm(&sum_abs);

    let pinv_abs = mp_inverse(&sum_abs, tol)?;
    let pinv_sum = mp_inverse(&(&a + &b), tol)?;
    let pinv_residual_left = pinv_abs.diff_norm(&(&pinv_sum * u));
    let pinv_residual_right = pinv_sum.diff_norm(&(&pinv_abs * &u.adjoint()));

    Ok(SharedIsometryPair {
        a,
        b,
        triangle_residual,
        pinv_residual_left,
        pinv_residual_right,
    })
}

/// Factors of the pseudoinverse-free form of the parallel sum for positive
/// pairs: `C = ((A+B)^+)^(1/2) A^(1/2)`, `D = ((A+B)^+)^(1/2) B^(1/2)`, and
/// `fw_sum = A^(1/2) C* D B^(1/2)`, which agrees with `A (A+B)^+ B`.
#[derive(Debug, Clone, Serialize)]
pub struct DouglasFactors {
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
    pub fw_sum: ComplexMatrix,
    /// `|A^(1/2) - (A+B)^(1/2) C|`.
    pub factor_residual: f64,
    /// Is `R(C)` inside `N((A+B)^(1/2))^⊥ = R((A+B)^(1/2))`?
    pub range_condition: bool,
    /// `|fw_sum - A (A+B)^+ B|`.
    pub parallel_residual: f64,
}

pub fn douglas_factor(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<DouglasFactors, Error> {
    a.require_square()?;
    a.require_same_shape(b, "positive pair")?;
    if !is_positive(a, tol)? || !is_positive(b, tol)? {
        return Err(Error::NotPositive {
            reason: "Douglas factors are defined for positive pairs".into(),
        });
    }
    let sum = a + b;
    let sum_pinv = mp_inverse(&sum, tol)?;
    let pinv_root = psd_sqrt(&sum_pinv, tol)?;
    let a_root = psd_sqrt(a, tol)?;
    let b_root = psd_sqrt(b, tol)?;
    let c = &pinv_root * &a_root;
    let d = &pinv_root * &b_root;
    let fw_sum = &(&(&a_root * &c.adjoint()) * &d) * &b_root;

    let sum_root = psd_sqrt(&sum, tol)?;
    let factor_residual = (&sum_root * &c).diff_norm(&a_root);
    // N(S^(1/2))^⊥ = R(S^(1/2)) for the Hermitian root.
    let range_condition = range_contains(&c, &sum_root, tol)?;
    let direct = &(a * &sum_pinv) * b;
    let parallel_residual = fw_sum.diff_norm(&direct);
    Ok(DouglasFactors {
        c,
        d,
        fw_sum,
        factor_residual,
        range_condition,
        parallel_residual,
    })
}

/// Range identity for positive pairs:
/// `R(A^(1/2)) + R(B^(1/2)) = R((A+B)^(1/2))`, decided by comparing the
/// join projection with the range projection of the root of the sum.
pub fn range_sum_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: &TolerancePolicy,
) -> Result<bool, Error> {
    a.require_square()?;
    a.require_same_shape(b, "positive pair")?;
    if !is_positive(a, tol)? || !is_positive(b, tol)? {
        return Err(Error::NotPositive {
            reason: "range identity is stated for positive pairs".into(),
        });
    }
    let ra = range_projector(&psd_sqrt(a, tol)?, tol)?;
    let rb = range_projector(&psd_sqrt(b, tol)?, tol)?;
    let join = subspace_join(&ra, &rb, tol)?;
    let rsum = range_projector(&psd_sqrt(&(a + b), tol)?, tol)?;
    Ok(join.projector.diff_norm(&rsum.projector) <= tol.eq_atol * (1.0 + join.dim as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol(n: usize) -> TolerancePolicy {
        TolerancePolicy::for_dims(n, n)
    }

    proptest::proptest! {
        #[test]
        fn scalar_parallel_is_symmetric_and_below_min(a in 1e-6f64..1e6, b in 1e-6f64..1e6) {
            let ab = scalar_parallel(a, b).unwrap();
            let ba = scalar_parallel(b, a).unwrap();
            proptest::prop_assert!((ab - ba).abs() <= 1e-12 * ab.abs());
            proptest::prop_assert!(ab < a.min(b));
            proptest::prop_assert!(ab > 0.0);
        }
    }

    #[test]
    fn scalar_parallel_values() {
        assert_eq!(scalar_parallel(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(scalar_parallel(2.0, 2.0).unwrap(), 1.0);
        // 1 : sqrt(2) = 2 - sqrt(2).
        let v = scalar_parallel(1.0, 2f64.sqrt()).unwrap();
        assert!((v - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((v - 0.5857864376269049).abs() < 1e-15);
        assert!(scalar_parallel(0.0, 1.0).is_err());
        assert!(scalar_parallel(1.0, -2.0).is_err());
    }

    #[test]
    fn orthogonal_psd_pair_is_summable_with_zero_sum() {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::diag(&[0.0, 1.0]);
        let rep = is_parallel_summable(&a, &b, &tol(2)).unwrap();
        assert!(rep.summable && rep.range_row_a && rep.range_col_b);
        let ps = parallel_sum(&a, &b, &tol(2)).unwrap();
        assert!(ps.value.frobenius_norm() < 1e-12);
        assert!(ps.invariance_spread < 1e-10);
    }

    #[test]
    fn zero_second_operand_is_summable() {
        let mut rng = gen::trial_rng(50, 1);
        let a = gen::matrix_gaussian(&mut rng, 3, 3);
        let z = ComplexMatrix::zeros(3, 3);
        let rep = is_parallel_summable(&a, &z, &tol(3)).unwrap();
        assert!(rep.summable);
        let ps = parallel_sum(&a, &z, &tol(3)).unwrap();
        assert!(ps.value.frobenius_norm() < 1e-12);
    }

    // The canned non-summable pair: A = [[1,0],[0,0]], B = [[-1,0],[1,0]].
    // R(B) = span{(-1,1)} is not inside R(A+B) = span{e2}.
    #[test]
    fn canned_pair_is_not_summable() {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_rows(&[
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let rep = is_parallel_summable(&a, &b, &tol(2)).unwrap();
        assert!(!rep.summable);
        assert!(!rep.range_col_b);
        assert!(rep.residual_right > 1e-3);
        // residual_left happens to vanish for this pair; the right
        // condition alone breaks summability.
        assert!(rep.residual_left < 1e-12);

        match parallel_sum(&a, &b, &tol(2)) {
            Err(Error::NotSummable {
                diagnostic_spread, ..
            }) => assert!(diagnostic_spread > 1e-3),
            other => panic!("expected NotSummable, got {other:?}"),
        }
    }

    #[test]
    fn identity_parallel_identity_is_half() {
        let i = ComplexMatrix::identity(2);
        let ps = parallel_sum(&i, &i, &tol(2)).unwrap();
        assert!(ps.value.close_to(&i.scale_re(0.5), 1e-13));
        assert!(ps.alt_residual_a < 1e-12 && ps.alt_residual_b < 1e-12);
    }

    // The norm-bound violation pair at dim K = 1: A = rho(i), B = rho(1-i);
    // A:B = [[0, 1+i], [1-i, 0]] with norm sqrt(2).
    #[test]
    fn rho_pair_parallel_sum_is_rho_of_product() {
        let a = rho_embed(&ComplexMatrix::scalar(c(0.0, 1.0)));
        let b = rho_embed(&ComplexMatrix::scalar(c(1.0, -1.0)));
        let ps = parallel_sum(&a, &b, &tol(2)).unwrap();
        let expect = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 1.0)],
            vec![c(1.0, -1.0), c(0.0, 0.0)],
        ]);
        assert!(ps.value.close_to(&expect, 1e-12));
        assert!((operator_norm(&ps.value) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn projection_parallel_identities() {
        let i = ComplexMatrix::identity(2);
        let (v, m) = projection_parallel(&i, &i, &tol(2)).unwrap();
        assert!(v.close_to(&i.scale_re(0.5), 1e-12));
        assert_eq!(m.dim, 2);

        let p = ComplexMatrix::diag(&[1.0, 0.0]);
        let q = ComplexMatrix::diag(&[0.0, 1.0]);
        let (v, m) = projection_parallel(&p, &q, &tol(2)).unwrap();
        assert!(v.frobenius_norm() < 1e-12);
        assert_eq!(m.dim, 0);

        // P = (1/2) ones, Q = diag(1,0): ranges meet trivially, P:Q = 0.
        let ones_half = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.5, 0.0)],
            vec![c(0.5, 0.0), c(0.5, 0.0)],
        ]);
        let (v, m) = projection_parallel(&ones_half, &p, &tol(2)).unwrap();
        assert!(v.frobenius_norm() < 1e-12, "{v:?}");
        assert_eq!(m.dim, 0);
    }

    #[test]
    fn projection_parallel_rejects_non_projectors() {
        let m = ComplexMatrix::diag(&[2.0, 0.0]);
        let i = ComplexMatrix::identity(2);
        assert!(matches!(
            projection_parallel(&m, &i, &tol(2)),
            Err(Error::NotProjector { .. })
        ));
    }

    #[test]
    fn sum_decomposition_equal_and_orthogonal() {
        let mut rng = gen::trial_rng(60, 0);
        let p = gen::projector(&mut rng, 4, 2);
        let dec = submodule_sum_decomposition(&p, &p, &tol(4)).unwrap();
        assert_eq!(dec.join.dim, 2);
        assert_eq!(dec.meet.dim, 2);
        assert!(dec.perp_identity);
        assert!(dec.join.projector.close_to(&p, 1e-10));
        assert!(dec.meet.projector.close_to(&p, 1e-10));

        let e1 = ComplexMatrix::diag(&[1.0, 0.0]);
        let e2 = ComplexMatrix::diag(&[0.0, 1.0]);
        let dec = submodule_sum_decomposition(&e1, &e2, &tol(2)).unwrap();
        assert_eq!(dec.join.dim, 2);
        assert_eq!(dec.meet.dim, 0);
        assert!(dec.perp_identity);
    }

    #[test]
    fn rho_embedding_preserves_norm() {
        let t = ComplexMatrix::scalar(c(0.0, 1.0));
        let r = rho_embed(&t);
        assert_eq!(r.shape(), (2, 2));
        assert!((operator_norm(&r) - 1.0).abs() < 1e-14);

        let z = ComplexMatrix::zeros(2, 3);
        assert_eq!(rho_embed(&z).shape(), (5, 5));
        assert_eq!(operator_norm(&rho_embed(&z)), 0.0);

        let mut rng = gen::trial_rng(61, 0);
        let t = gen::matrix_gaussian(&mut rng, 4, 3);
        assert!((operator_norm(&rho_embed(&t)) - operator_norm(&t)).abs() < 1e-10);
    }

    #[test]
    fn norm_bound_holds_for_psd_and_fails_for_rho_pair() {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::diag(&[0.0, 1.0]);
        let rep = check_norm_bound(&a, &b, &tol(2)).unwrap();
        assert!(rep.bound_holds);
        assert!(rep.triangle_residual < 1e-12);

        // The violation pair: norm sqrt(2) > 2 - sqrt(2).
        let a = rho_embed(&ComplexMatrix::scalar(c(0.0, 1.0)));
        let b = rho_embed(&ComplexMatrix::scalar(c(1.0, -1.0)));
        let rep = check_norm_bound(&a, &b, &tol(2)).unwrap();
        assert!(!rep.bound_holds);
        assert!((rep.norm_a - 1.0).abs() < 1e-12);
        assert!((rep.norm_b - 2f64.sqrt()).abs() < 1e-12);
        assert!((rep.norm_parallel - 2f64.sqrt()).abs() < 1e-12);
        assert!((rep.scalar_bound - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert!(rep.triangle_residual > 1e-3);
    }

    #[test]
    fn norm_bound_rejects_zero_operand() {
        let i = ComplexMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            check_norm_bound(&i, &z, &tol(2)),
            Err(Error::ZeroOperand)
        ));
    }

    #[test]
    fn shared_isometry_with_identity_is_trivial() {
        let mut rng = gen::trial_rng(70, 0);
        let a = gen::psd_rank(&mut rng, 4, 2);
        let b = gen::psd_rank(&mut rng, 4, 3);
        let i = ComplexMatrix::identity(4);
        let pair = shared_isometry_pair(&a, &b, &i, &tol(4)).unwrap();
        assert!(pair.a.close_to(&a, 1e-13));
        assert!(pair.b.close_to(&b, 1e-13));
        assert!(pair.triangle_residual < 1e-9);
    }

    #[test]
    fn shared_isometry_with_unitary() {
        let mut rng = gen::trial_rng(71, 0);
        let a = gen::psd_rank(&mut rng, 4, 2);
        let b = gen::psd_rank(&mut rng, 4, 2);
        let w = gen::unitary(&mut rng, 4);
        let pair = shared_isometry_pair(&a, &b, &w, &tol(4)).unwrap();
        assert!(pair.triangle_residual <= 1e-9);
        assert!(pair.pinv_residual_left <= 1e-8);
        assert!(pair.pinv_residual_right <= 1e-8);
        let rep = is_parallel_summable(&pair.a, &pair.b, &tol(4)).unwrap();
        assert!(rep.summable);
    }

    #[test]
    fn shared_isometry_with_proper_partial_isometry() {
        // 2-dimensional initial space on C^4 containing both ranges.
        let mut rng = gen::trial_rng(72, 0);
        let q = gen::orthonormal_cols(&mut rng, 4, 2);
        let d1 = ComplexMatrix::diag(&[0.9, 0.4]);
        let d2 = ComplexMatrix::diag(&[0.3, 1.0]);
        let abs_a = &(&q * &d1) * &q.adjoint();
        let abs_b = &(&q * &d2) * &q.adjoint();
        let u = gen::partial_isometry_over(&mut rng, 4, &q);
        // U is proper: U*U is a rank-2 projection.
        let uu = &u.adjoint() * &u;
        assert!((uu.trace().re - 2.0).abs() < 1e-10);
        let pair = shared_isometry_pair(&abs_a, &abs_b, &u, &tol(4)).unwrap();
        assert!(pair.triangle_residual <= 1e-9);
        assert!(pair.pinv_residual_left <= 1e-8);
        assert!(pair.pinv_residual_right <= 1e-8);
        let bound = check_norm_bound(&pair.a, &pair.b, &tol(4)).unwrap();
        assert!(bound.bound_holds);
    }

    #[test]
    fn shared_isometry_rejects_bad_initial_space() {
        // U annihilates part of the range of |A|.
        let abs_a = ComplexMatrix::diag(&[1.0, 1.0]);
        let abs_b = ComplexMatrix::diag(&[1.0, 0.0]);
        let u = ComplexMatrix::diag(&[1.0, 0.0]);
        assert!(matches!(
            shared_isometry_pair(&abs_a, &abs_b, &u, &tol(2)),
            Err(Error::InitialSpaceViolation { .. })
        ));
    }

    #[test]
    fn douglas_factors_identity_case() {
        let i = ComplexMatrix::identity(2);
        let f = douglas_factor(&i, &i, &tol(2)).unwrap();
        let expect = i.scale_re(std::f64::consts::FRAC_1_SQRT_2);
        assert!(f.c.close_to(&expect, 1e-12));
        assert!(f.d.close_to(&expect, 1e-12));
        assert!(f.fw_sum.close_to(&i.scale_re(0.5), 1e-12));
        assert!(f.range_condition);
    }

    #[test]
    fn douglas_factors_orthogonal_diagonals() {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::diag(&[0.0, 1.0]);
        let f = douglas_factor(&a, &b, &tol(2)).unwrap();
        assert!(f.c.close_to(&a, 1e-12));
        assert!(f.d.close_to(&b, 1e-12));
        assert!(f.fw_sum.frobenius_norm() < 1e-12);
        assert!(f.factor_residual < 1e-12);
    }

    #[test]
    fn douglas_factors_match_parallel_sum_on_random_psd() {
        let mut rng = gen::trial_rng(80, 0);
        for trial in 0..10 {
            let (a, b, _) = gen::psd_pair(&mut rng, 5, 3, 4);
            let f = douglas_factor(&a, &b, &tol(5)).unwrap();
            assert!(f.parallel_residual <= 1e-8, "trial {trial}");
            assert!(f.factor_residual <= 1e-8, "trial {trial}");
            assert!(f.range_condition, "trial {trial}");
            let ps = parallel_sum(&a, &b, &tol(5)).unwrap();
            assert!(f.fw_sum.diff_norm(&ps.value) <= 1e-8, "trial {trial}");
        }
    }

    #[test]
    fn douglas_rejects_non_psd() {
        let a = ComplexMatrix::diag(&[1.0, -1.0]);
        let i = ComplexMatrix::identity(2);
        assert!(douglas_factor(&a, &i, &tol(2)).is_err());
    }

    #[test]
    fn range_sum_identity() {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::diag(&[0.0, 1.0]);
        assert!(range_sum_check(&a, &b, &tol(2)).unwrap());
        assert!(range_sum_check(&a, &a, &tol(2)).unwrap());

        let mut rng = gen::trial_rng(81, 0);
        for _ in 0..10 {
            let (a, b, _) = gen::psd_pair(&mut rng, 6, 2, 3);
            assert!(range_sum_check(&a, &b, &tol(6)).unwrap());
        }
    }
}
