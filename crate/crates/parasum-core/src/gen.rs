//! Seeded random instance generators for the verification suites.
//!
//! Every generator draws from a caller-owned RNG; suites derive one RNG per
//! trial from `(seed, trial index)` so runs are deterministic and
//! order-independent. Rank-deficient instances are built as products of
//! independent Gaussian factors of exact rank, never by thresholding noise.
//! Instances whose retained spectrum comes too close to the rank cutoff are
//! resampled and counted, so equality assertions never straddle a rank
//! decision boundary.

use crate::matrix::{orthonormalize_columns, ComplexMatrix};
use crate::svd::svd;
use crate::tol::TolerancePolicy;
use crate::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Version tag embedded in suite reports so regressions are attributable
/// to generator changes.
pub const GENERATOR_VERSION: &str = "gen-1";

/// Smallest allowed ratio of a retained singular value to the largest one.
/// Instances below this are resampled ("excluded") rather than asserted on.
pub const MIN_RETAINED_RATIO: f64 = 1e-3;

const MAX_RESAMPLE: u32 = 64;

/// Deterministic per-trial RNG stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial.wrapping_add(1));
    rng
}

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn matrix_gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    matrix_gaussian(rng, n, n).hermitian_part()
}

/// Ratio sigma_r / sigma_1 over the retained spectrum (1.0 for the zero
/// matrix, which has nothing to retain).
pub fn retained_ratio(m: &ComplexMatrix, tol: &TolerancePolicy) -> f64 {
    let s = svd(m).expect("svd of generated instance");
    let r = s.rank(tol);
    if r == 0 {
        1.0
    } else {
        s.sigma[r - 1] / s.sigma[0]
    }
}

fn normalized(m: ComplexMatrix) -> ComplexMatrix {
    let n = crate::svd::operator_norm(&m);
    if n > 0.0 {
        m.scale_re(1.0 / n)
    } else {
        m
    }
}

/// Exact-rank-`r` matrix as a product of independent Gaussian factors,
/// normalized to unit operator norm. Resamples while the smallest retained
/// singular value is too close to the cutoff; returns the matrix together
/// with the number of discarded draws.
pub fn matrix_rank(rng: &mut impl Rng, rows: usize, cols: usize, r: usize) -> ComplexMatrix {
    matrix_rank_counted(rng, rows, cols, r).0
}

pub fn matrix_rank_counted(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    r: usize,
) -> (ComplexMatrix, u32) {
    assert!(r <= rows.min(cols));
    if r == 0 {
        return (ComplexMatrix::zeros(rows, cols), 0);
    }
    let tol = TolerancePolicy::for_dims(rows, cols);
    let mut resamples = 0;
    loop {
        let g = matrix_gaussian(rng, rows, r);
        let h = matrix_gaussian(rng, r, cols);
        let t = normalized(&g * &h);
        if retained_ratio(&t, &tol) >= MIN_RETAINED_RATIO || resamples >= MAX_RESAMPLE {
            return (t, resamples);
        }
        resamples += 1;
    }
}

/// Positive semidefinite matrix of exact rank `r` (`G G*` for a Gaussian
/// `n x r` factor), normalized to unit operator norm.
pub fn psd_rank(rng: &mut impl Rng, n: usize, r: usize) -> ComplexMatrix {
    psd_rank_counted(rng, n, r).0
}

pub fn psd_rank_counted(rng: &mut impl Rng, n: usize, r: usize) -> (ComplexMatrix, u32) {
    assert!(r <= n);
    if r == 0 {
        return (ComplexMatrix::zeros(n, n), 0);
    }
    let tol = TolerancePolicy::for_dims(n, n);
    let mut resamples = 0;
    loop {
        let g = matrix_gaussian(rng, n, r);
        let a = normalized(&g * &g.adjoint());
        if retained_ratio(&a, &tol) >= MIN_RETAINED_RATIO || resamples >= MAX_RESAMPLE {
            return (a, resamples);
        }
        resamples += 1;
    }
}

/// A pair of psd matrices whose sum is safely conditioned on its range.
pub fn psd_pair(
    rng: &mut impl Rng,
    n: usize,
    ra: usize,
    rb: usize,
) -> (ComplexMatrix, ComplexMatrix, u32) {
    let tol = TolerancePolicy::for_dims(n, n);
    let mut resamples = 0;
    loop {
        let (a, ka) = psd_rank_counted(rng, n, ra);
        let (b, kb) = psd_rank_counted(rng, n, rb);
        resamples += ka + kb;
        let sum = &a + &b;
        if retained_ratio(&sum, &tol) >= MIN_RETAINED_RATIO || resamples >= MAX_RESAMPLE {
            return (a, b, resamples);
        }
        resamples += 1;
    }
}

/// Positive pair whose ranges share an exactly `shared`-dimensional
/// subspace: each operator is `Q D Q*` over an orthonormal basis extending
/// the common block, with eigenvalues bounded away from zero, so ranks and
/// intersections are unambiguous by construction.
pub fn psd_pair_sharing(
    rng: &mut impl Rng,
    n: usize,
    shared: usize,
    extra_a: usize,
    extra_b: usize,
) -> (ComplexMatrix, ComplexMatrix, u32) {
    let (pa, pb, _, resamples) = projector_pair_sharing(rng, n, shared, extra_a, extra_b);
    let mut weighted = |p: &ComplexMatrix| -> ComplexMatrix {
        let dec = svd(p).expect("svd of projector");
        let r = dec.sigma.iter().filter(|&&s| s > 0.5).count();
        if r == 0 {
            return ComplexMatrix::zeros(n, n);
        }
        let q = dec.u.columns(0, r);
        let weights: Vec<f64> = (0..r).map(|_| rng.gen_range(0.1..=1.0)).collect();
        let d = ComplexMatrix::diag(&weights);
        &(&q * &d) * &q.adjoint()
    };
    (weighted(&pa), weighted(&pb), resamples)
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let g = matrix_gaussian(rng, n, n);
        if let Some(q) = orthonormalize_columns(&g, 1e-8) {
            if q.cols() == n {
                return q;
            }
        }
    }
}

/// `n x r` matrix with orthonormal columns.
pub fn orthonormal_cols(rng: &mut impl Rng, n: usize, r: usize) -> ComplexMatrix {
    assert!(r >= 1 && r <= n);
    loop {
        let g = matrix_gaussian(rng, n, r);
        if let Some(q) = orthonormalize_columns(&g, 1e-8) {
            if q.cols() == r {
                return q;
            }
        }
    }
}

/// Orthogonal projection of rank `r`.
pub fn projector(rng: &mut impl Rng, n: usize, r: usize) -> ComplexMatrix {
    if r == 0 {
        return ComplexMatrix::zeros(n, n);
    }
    let q = orthonormal_cols(rng, n, r);
    &q * &q.adjoint()
}

/// Pair of projections whose ranges share an exactly `shared`-dimensional
/// subspace and are otherwise in general position. Returns the projectors,
/// an orthonormal basis of the shared subspace (when non-empty), and a
/// resample count.
#[allow(clippy::type_complexity)]
pub fn projector_pair_sharing(
    rng: &mut impl Rng,
    n: usize,
    shared: usize,
    extra_a: usize,
    extra_b: usize,
) -> (ComplexMatrix, ComplexMatrix, Option<ComplexMatrix>, u32) {
    assert!(shared + extra_a <= n && shared + extra_b <= n);
    let mut resamples = 0;
    loop {
        let shared_q = if shared > 0 {
            Some(orthonormal_cols(rng, n, shared))
        } else {
            None
        };
        let basis = |rng: &mut dyn rand::RngCore, extra: usize| -> Option<ComplexMatrix> {
            let mut cols: Vec<&ComplexMatrix> = Vec::new();
            let gauss;
            if let Some(q) = &shared_q {
                cols.push(q);
            }
            if extra > 0 {
                gauss = ComplexMatrix::from_fn(n, extra, |_, _| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(re, im)
                });
                cols.push(&gauss);
            }
            if cols.is_empty() {
                return None;
            }
            orthonormalize_columns(&ComplexMatrix::hstack(&cols), 1e-8)
        };
        let qa = basis(rng, extra_a);
        let qb = basis(rng, extra_b);
        match (qa, qb) {
            (Some(qa), Some(qb))
                if qa.cols() == shared + extra_a && qb.cols() == shared + extra_b =>
            {
                // The non-shared parts must stay clearly apart so the
                // intersection is exactly the shared subspace.
                let mut clean = true;
                if extra_a > 0 && extra_b > 0 {
                    let ea = qa.columns(shared, shared + extra_a);
                    let eb = qb.columns(shared, shared + extra_b);
                    let cross = svd(&(&ea.adjoint() * &eb)).expect("svd");
                    if cross.sigma.first().copied().unwrap_or(0.0) > 1.0 - MIN_RETAINED_RATIO {
                        clean = false;
                    }
                }
                if clean || resamples >= MAX_RESAMPLE {
                    let pa = &qa * &qa.adjoint();
                    let pb = &qb * &qb.adjoint();
                    return (pa, pb, shared_q, resamples);
                }
                resamples += 1;
            }
            _ => {
                if shared + extra_a == 0 || shared + extra_b == 0 {
                    let pa = if shared + extra_a == 0 {
                        ComplexMatrix::zeros(n, n)
                    } else {
                        let q = orthonormal_cols(rng, n, shared + extra_a);
                        &q * &q.adjoint()
                    };
                    let pb = if shared + extra_b == 0 {
                        ComplexMatrix::zeros(n, n)
                    } else {
                        let q = orthonormal_cols(rng, n, shared + extra_b);
                        &q * &q.adjoint()
                    };
                    return (pa, pb, None, resamples);
                }
                resamples += 1;
            }
        }
    }
}

/// Parallel-summable (generally non-Hermitian) pair: the sum `S` is drawn
/// with exact rank `r`, and `A` is compressed between the range and co-range
/// projections of `S`, which forces both inclusion conditions; `B = S - A`.
pub fn summable_pair(
    rng: &mut impl Rng,
    n: usize,
    r: usize,
) -> (ComplexMatrix, ComplexMatrix, u32) {
    assert!(r >= 1);
    let tol = TolerancePolicy::for_dims(n, n);
    let mut resamples = 0;
    loop {
        let (s, k) = matrix_rank_counted(rng, n, n, r);
        resamples += k;
        let dec = svd(&s).expect("svd");
        let rk = dec.rank(&tol);
        let ur = dec.u.columns(0, rk);
        let vr = dec.v.columns(0, rk);
        let p_col = &ur * &ur.adjoint();
        let p_row = &vr * &vr.adjoint();
        let x = matrix_gaussian(rng, n, n);
        let a_raw = &(&p_col * &x) * &p_row;
        let na = crate::svd::operator_norm(&a_raw);
        if na < 1e-6 {
            resamples += 1;
            continue;
        }
        let a = a_raw.scale_re(0.5 / na);
        let b = &s - &a;
        if crate::svd::operator_norm(&b) < 1e-6
            || retained_ratio(&a, &tol) < MIN_RETAINED_RATIO
            || retained_ratio(&b, &tol) < MIN_RETAINED_RATIO
        {
            resamples += 1;
            continue;
        }
        return (a, b, resamples);
    }
}

/// Direction of the deliberate range-condition failure in a non-summable
/// pair.
#[derive(Clone, Copy)]
pub enum NonSummableKind {
    RowConditionFails,
    ColumnConditionFails,
}

/// Rank-one cancellation pair that is *not* parallel summable: `A = u v*`,
/// `B = -u w*` makes `A + B = u (v - w)*`, whose co-range misses `v`.
pub fn nonsummable_pair(
    rng: &mut impl Rng,
    n: usize,
    kind: NonSummableKind,
) -> (ComplexMatrix, ComplexMatrix) {
    assert!(n >= 2);
    loop {
        let u = orthonormal_cols(rng, n, 1);
        let v = orthonormal_cols(rng, n, 1);
        let w = orthonormal_cols(rng, n, 1);
        let overlap = (&v.adjoint() * &w)[(0, 0)].norm();
        if overlap > 0.9 {
            continue;
        }
        let a = &u * &v.adjoint();
        let b = (&u * &w.adjoint()).scale_re(-1.0);
        return match kind {
            NonSummableKind::RowConditionFails => (a, b),
            NonSummableKind::ColumnConditionFails => (a.adjoint(), b.adjoint()),
        };
    }
}

/// Partial isometry `U = W P` with `W` unitary and `P` the projection onto
/// a subspace containing the given range basis columns.
pub fn partial_isometry_over(
    rng: &mut impl Rng,
    n: usize,
    range_basis: &ComplexMatrix,
) -> ComplexMatrix {
    let w = unitary(rng, n);
    let p = &range_basis.clone() * &range_basis.adjoint();
    &w * &p
}

// ---------------------------------------------------------------------------
// Module-layer generators.

use crate::cstar::{AlgebraElement, FiniteCStarAlgebra, HilbertModuleVector, ModuleOperator};

pub fn algebra_element(rng: &mut impl Rng, algebra: &FiniteCStarAlgebra) -> AlgebraElement {
    let blocks = algebra
        .block_dims()
        .iter()
        .map(|&d| matrix_gaussian(rng, d, d))
        .collect();
    AlgebraElement::new(algebra.clone(), blocks).expect("block dims match by construction")
}

pub fn module_vector(
    rng: &mut impl Rng,
    algebra: &FiniteCStarAlgebra,
    rank: usize,
) -> HilbertModuleVector {
    let components = (0..rank).map(|_| algebra_element(rng, algebra)).collect();
    HilbertModuleVector::new(components).expect("rank >= 1")
}

pub fn module_gaussian(
    rng: &mut impl Rng,
    algebra: &FiniteCStarAlgebra,
    rank: usize,
) -> ModuleOperator {
    let grid = (0..rank * rank)
        .map(|_| algebra_element(rng, algebra))
        .collect();
    ModuleOperator::new(rank, grid).expect("grid sized by construction")
}

/// Positive module operator `G* G`, optionally deflated by zeroing one
/// grid row of the factor first (which makes the flattened operator
/// rank-deficient while staying inside the algebra).
pub fn module_psd(
    rng: &mut impl Rng,
    algebra: &FiniteCStarAlgebra,
    rank: usize,
    deflate: bool,
) -> ModuleOperator {
    let mut g = module_gaussian(rng, algebra, rank);
    if deflate && rank > 1 {
        let row = rng.gen_range(0..rank);
        let mut grid = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                if i == row {
                    grid.push(AlgebraElement::zero(algebra));
                } else {
                    grid.push(g.entry(i, j).clone());
                }
            }
        }
        g = ModuleOperator::new(rank, grid).expect("same shape");
    }
    let a = g.adjoint().mul(&g).expect("compatible by construction");
    // Normalize to unit operator norm.
    let n = a.norm();
    if n > 0.0 {
        let grid = (0..rank * rank)
            .map(|idx| {
                let i = idx / rank;
                let j = idx % rank;
                a.entry(i, j).scale(Complex64::new(1.0 / n, 0.0))
            })
            .collect();
        ModuleOperator::new(rank, grid).expect("same shape")
    } else {
        a
    }
}
