//! A finite-dimensional Hilbert C*-module model.
//!
//! The algebra is a direct sum of full matrix blocks `M_{n1} ⊕ ... ⊕ M_{nr}`,
//! the module is the free module `A^k` with the algebra-valued inner product
//! `<x, y> = Σ x_i* y_i`, and adjointable operators are `k x k` grids of
//! algebra elements acting by left multiplication on components. Flattening
//! an operator into a plain `kN x kN` matrix (`N = Σ n_i`) is a faithful
//! unital *-homomorphism, so norms, positivity, and Moore-Penrose inverses
//! transfer verbatim between the two pictures; structured zeros survive the
//! Jacobi kernels exactly, so flattened computations reshape back into grids.

use crate::matrix::ComplexMatrix;
use crate::svd::operator_norm;
use crate::tol::TolerancePolicy;
use crate::{Complex64, Error};
use serde::{Deserialize, Serialize};

/// `M_{n1} ⊕ ... ⊕ M_{nr}` described by its block dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteCStarAlgebra {
    block_dims: Vec<usize>,
}

impl FiniteCStarAlgebra {
    pub fn new(block_dims: Vec<usize>) -> Self {
        assert!(!block_dims.is_empty() && block_dims.iter().all(|&d| d > 0));
        FiniteCStarAlgebra { block_dims }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Total flattened dimension `N = Σ n_i`.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }
}

/// Element of the algebra: one square block per summand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraElement {
    pub algebra: FiniteCStarAlgebra,
    pub blocks: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn new(algebra: FiniteCStarAlgebra, blocks: Vec<ComplexMatrix>) -> Result<Self, Error> {
        if blocks.len() != algebra.block_dims().len()
            || blocks
                .iter()
                .zip(algebra.block_dims())
                .any(|(b, &d)| b.shape() != (d, d))
        {
            return Err(Error::AlgebraMismatch);
        }
        Ok(AlgebraElement { algebra, blocks })
    }

    pub fn zero(algebra: &FiniteCStarAlgebra) -> Self {
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&d| ComplexMatrix::zeros(d, d))
            .collect();
        AlgebraElement {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn one(algebra: &FiniteCStarAlgebra) -> Self {
        let blocks = algebra
            .block_dims()
            .iter()
            .map(|&d| ComplexMatrix::identity(d))
            .collect();
        AlgebraElement {
            algebra: algebra.clone(),
            blocks,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_algebra(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a + b)
            .collect();
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_algebra(other)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a * b)
            .collect();
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks,
        })
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(s)).collect(),
        }
    }

    /// C*-norm: max over blocks of the operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(operator_norm).fold(0.0, f64::max)
    }

    /// Positivity is decided blockwise (the order of a direct sum is the
    /// blockwise order).
    pub fn is_positive(&self, tol: &TolerancePolicy) -> Result<bool, Error> {
        for b in &self.blocks {
            if !crate::positive::is_positive(b, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Block-diagonal flattening into `M_N`.
    pub fn flatten(&self) -> ComplexMatrix {
        let n = self.algebra.total_dim();
        let mut out = ComplexMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            out.set_block(off, off, b);
            off += b.rows();
        }
        out
    }

    /// Inverse of `flatten`; verifies that off-block entries carry no more
    /// than `eq_atol` of relative mass.
    pub fn unflatten(
        m: &ComplexMatrix,
        algebra: &FiniteCStarAlgebra,
        tol: &TolerancePolicy,
    ) -> Result<Self, Error> {
        let n = algebra.total_dim();
        if m.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                context: "flattened element has the total algebra dimension",
                got_rows: m.rows(),
                got_cols: m.cols(),
                want_rows: n,
                want_cols: n,
            });
        }
        // Block index of each flattened coordinate.
        let mut owner = vec![0usize; n];
        let mut off = 0;
        for (bi, &d) in algebra.block_dims().iter().enumerate() {
            for r in 0..d {
                owner[off + r] = bi;
            }
            off += d;
        }
        let mut off_mass = 0.0;
        for i in 0..n {
            for j in 0..n {
                if owner[i] != owner[j] {
                    off_mass += m[(i, j)].norm_sqr();
                }
            }
        }
        let off_mass = off_mass.sqrt();
        if off_mass > tol.eq_atol * (1.0 + m.frobenius_norm()) {
            return Err(Error::OffStructure { residual: off_mass });
        }
        let mut blocks = Vec::with_capacity(algebra.block_dims().len());
        let mut off = 0;
        for &d in algebra.block_dims() {
            blocks.push(m.block(off, off, d, d));
            off += d;
        }
        Ok(AlgebraElement {
            algebra: algebra.clone(),
            blocks,
        })
    }

    fn check_algebra(&self, other: &Self) -> Result<(), Error> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }
}

/// Element of the free module `A^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HilbertModuleVector {
    pub components: Vec<AlgebraElement>,
}

impl HilbertModuleVector {
    pub fn new(components: Vec<AlgebraElement>) -> Result<Self, Error> {
        if components.is_empty() {
            return Err(Error::RankMismatch("module vector needs rank >= 1".into()));
        }
        let algebra = components[0].algebra.clone();
        if components.iter().any(|c| c.algebra != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(HilbertModuleVector { components })
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn algebra(&self) -> &FiniteCStarAlgebra {
        &self.components[0].algebra
    }

    /// Right action `x · a`, componentwise.
    pub fn act(&self, a: &AlgebraElement) -> Result<Self, Error> {
        let components: Result<Vec<_>, _> = self.components.iter().map(|c| c.mul(a)).collect();
        Ok(HilbertModuleVector {
            components: components?,
        })
    }

    /// Stack of flattened components: a `kN x N` matrix whose operator norm
    /// is the module norm of the vector.
    pub fn flatten(&self) -> ComplexMatrix {
        let flats: Vec<ComplexMatrix> = self.components.iter().map(|c| c.flatten()).collect();
        let refs: Vec<&ComplexMatrix> = flats.iter().collect();
        ComplexMatrix::vstack(&refs)
    }
}

/// Algebra-valued inner product `<x, y> = Σ x_i* y_i`: conjugate-linear in
/// the first slot, `A`-linear in the second, with `<x, x> >= 0`.
pub fn inner_product(
    x: &HilbertModuleVector,
    y: &HilbertModuleVector,
) -> Result<AlgebraElement, Error> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch(format!(
            "inner product needs equal ranks, got {} and {}",
            x.rank(),
            y.rank()
        )));
    }
    if x.algebra() != y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let mut acc = AlgebraElement::zero(x.algebra());
    for (xi, yi) in x.components.iter().zip(&y.components) {
        acc = acc.add(&xi.adjoint().mul(yi)?)?;
    }
    Ok(acc)
}

/// Module norm `|x| = sqrt(|<x, x>|)`.
pub fn module_norm(x: &HilbertModuleVector) -> f64 {
    inner_product(x, x)
        .map(|g| g.norm().sqrt())
        .unwrap_or(f64::NAN)
}

/// Adjointable operator on `A^k`: a `k x k` grid of algebra elements acting
/// by left multiplication, `(T x)_i = Σ_j T_ij x_j`. The adjoint is the
/// conjugate-transpose grid, and `T(x a) = (T x) a` holds by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuleOperator {
    rank: usize,
    grid: Vec<AlgebraElement>,
}

impl ModuleOperator {
    pub fn new(rank: usize, grid: Vec<AlgebraElement>) -> Result<Self, Error> {
        if rank == 0 || grid.len() != rank * rank {
            return Err(Error::RankMismatch(format!(
                "grid must hold rank^2 = {} elements, got {}",
                rank * rank,
                grid.len()
            )));
        }
        let algebra = grid[0].algebra.clone();
        if grid.iter().any(|g| g.algebra != algebra) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(ModuleOperator { rank, grid })
    }

    pub fn identity(algebra: &FiniteCStarAlgebra, rank: usize) -> Self {
        let mut grid = vec![AlgebraElement::zero(algebra); rank * rank];
        for i in 0..rank {
            grid[i * rank + i] = AlgebraElement::one(algebra);
        }
        ModuleOperator { rank, grid }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn algebra(&self) -> &FiniteCStarAlgebra {
        &self.grid[0].algebra
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.grid[i * self.rank + j]
    }

    pub fn adjoint(&self) -> Self {
        let mut grid = Vec::with_capacity(self.rank * self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                grid.push(self.entry(j, i).adjoint());
            }
        }
        ModuleOperator {
            rank: self.rank,
            grid,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let grid: Result<Vec<_>, _> = self
            .grid
            .iter()
            .zip(&other.grid)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(ModuleOperator {
            rank: self.rank,
            grid: grid?,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_compatible(other)?;
        let k = self.rank;
        let mut grid = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let mut acc = AlgebraElement::zero(self.algebra());
                for l in 0..k {
                    acc = acc.add(&self.entry(i, l).mul(other.entry(l, j))?)?;
                }
                grid.push(acc);
            }
        }
        Ok(ModuleOperator { rank: k, grid })
    }

    pub fn apply(&self, x: &HilbertModuleVector) -> Result<HilbertModuleVector, Error> {
        if x.rank() != self.rank {
            return Err(Error::RankMismatch(format!(
                "operator rank {} vs vector rank {}",
                self.rank,
                x.rank()
            )));
        }
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        let mut components = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let mut acc = AlgebraElement::zero(self.algebra());
            for j in 0..self.rank {
                acc = acc.add(&self.entry(i, j).mul(&x.components[j])?)?;
            }
            components.push(acc);
        }
        Ok(HilbertModuleVector { components })
    }

    /// Operator norm in the module picture, via the faithful flattening.
    pub fn norm(&self) -> f64 {
        operator_norm(&flatten(self))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), Error> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(format!(
                "operator ranks differ: {} vs {}",
                self.rank, other.rank
            )));
        }
        if self.algebra() != other.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }
}

/// Faithful flattening of a module operator into a `kN x kN` matrix:
/// multiplicative, adjoint-preserving, unital, and norm-preserving.
pub fn flatten(t: &ModuleOperator) -> ComplexMatrix {
    let k = t.rank();
    let n = t.algebra().total_dim();
    let mut out = ComplexMatrix::zeros(k * n, k * n);
    for i in 0..k {
        for j in 0..k {
            out.set_block(i * n, j * n, &t.entry(i, j).flatten());
        }
    }
    out
}

/// Reshape a `kN x kN` matrix back into a grid of algebra elements,
/// verifying that off-structure entries are negligible.
pub fn unflatten(
    m: &ComplexMatrix,
    algebra: &FiniteCStarAlgebra,
    rank: usize,
    tol: &TolerancePolicy,
) -> Result<ModuleOperator, Error> {
    let n = algebra.total_dim();
    if m.shape() != (rank * n, rank * n) {
        return Err(Error::ShapeMismatch {
            context: "flattened operator has dimension rank * total_dim",
            got_rows: m.rows(),
            got_cols: m.cols(),
            want_rows: rank * n,
            want_cols: rank * n,
        });
    }
    let mut grid = Vec::with_capacity(rank * rank);
    for i in 0..rank {
        for j in 0..rank {
            let cell = m.block(i * n, j * n, n, n);
            grid.push(AlgebraElement::unflatten(&cell, algebra, tol)?);
        }
    }
    ModuleOperator::new(rank, grid)
}

/// Parallel sum of two positive module operators, computed by flattening,
/// applying the matrix-level parallel sum, and reshaping. The result is
/// positive and satisfies all the matrix-level identities verbatim.
pub fn module_parallel_sum(
    a: &ModuleOperator,
    b: &ModuleOperator,
    tol: &TolerancePolicy,
) -> Result<ModuleOperator, Error> {
    a.check_compatible(b)?;
    let fa = flatten(a);
    let fb = flatten(b);
    if !crate::positive::is_positive(&fa, tol)? || !crate::positive::is_positive(&fb, tol)? {
        return Err(Error::NotPositive {
            reason: "module parallel sum is the positive-pair entry point".into(),
        });
    }
    let ps = crate::parallel::parallel_sum(&fa, &fb, tol)?;
    unflatten(&ps.value, a.algebra(), a.rank(), tol)
}

// ---------------------------------------------------------------------------
// JSON schema: the matrix format extended with the algebra block structure.

#[derive(Serialize, Deserialize)]
struct ModuleOperatorJson {
    algebra: Vec<usize>,
    rank: usize,
    /// Row-major `rank x rank` grid; each entry is one matrix per block.
    grid: Vec<Vec<ComplexMatrix>>,
}

pub fn module_operator_to_json(t: &ModuleOperator) -> String {
    let grid = t.grid.iter().map(|e| e.blocks.clone()).collect::<Vec<_>>();
    serde_json::to_string(&ModuleOperatorJson {
        algebra: t.algebra().block_dims().to_vec(),
        rank: t.rank(),
        grid,
    })
    .expect("module operator serialization cannot fail")
}

pub fn module_operator_from_json(s: &str) -> Result<ModuleOperator, Error> {
    let raw: ModuleOperatorJson = serde_json::from_str(s)?;
    let algebra = FiniteCStarAlgebra::new(raw.algebra);
    if raw.grid.len() != raw.rank * raw.rank {
        return Err(Error::RankMismatch(format!(
            "grid must hold rank^2 = {} entries, got {}",
            raw.rank * raw.rank,
            raw.grid.len()
        )));
    }
    let grid: Result<Vec<AlgebraElement>, Error> = raw
        .grid
        .into_iter()
        .map(|blocks| AlgebraElement::new(algebra.clone(), blocks))
        .collect();
    ModuleOperator::new(raw.rank, grid?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    fn scalar_algebra() -> FiniteCStarAlgebra {
        FiniteCStarAlgebra::new(vec![1])
    }

    fn two_one() -> FiniteCStarAlgebra {
        FiniteCStarAlgebra::new(vec![2, 1])
    }

    #[test]
    fn scalar_algebra_reduces_to_standard_inner_product() {
        // Over C with rank 2, <x, y> is the usual conjugate-linear-in-first
        // inner product on C^2.
        let alg = scalar_algebra();
        let mk = |a: Complex64| {
            AlgebraElement::new(alg.clone(), vec![ComplexMatrix::scalar(a)]).unwrap()
        };
        let x = HilbertModuleVector::new(vec![
            mk(Complex64::new(1.0, 2.0)),
            mk(Complex64::new(0.0, -1.0)),
        ])
        .unwrap();
        let y = HilbertModuleVector::new(vec![
            mk(Complex64::new(3.0, 0.0)),
            mk(Complex64::new(1.0, 1.0)),
        ])
        .unwrap();
        let ip = inner_product(&x, &y).unwrap();
        let expect = Complex64::new(1.0, -2.0) * Complex64::new(3.0, 0.0)
            + Complex64::new(0.0, 1.0) * Complex64::new(1.0, 1.0);
        assert!((ip.blocks[0][(0, 0)] - expect).norm() < 1e-15);
    }

    #[test]
    fn identity_component_gives_identity_inner_product() {
        let alg = two_one();
        let e = AlgebraElement::one(&alg);
        let z = AlgebraElement::zero(&alg);
        let x = HilbertModuleVector::new(vec![e.clone(), z]).unwrap();
        let ip = inner_product(&x, &x).unwrap();
        assert_eq!(ip, e);
        assert!(ip.is_positive(&tol()).unwrap());
        assert!((module_norm(&x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_vector_has_zero_norm() {
        let alg = two_one();
        let x = HilbertModuleVector::new(vec![AlgebraElement::zero(&alg)]).unwrap();
        assert_eq!(module_norm(&x), 0.0);
    }

    #[test]
    fn module_norm_matches_flattened_operator_norm() {
        let mut rng = gen::trial_rng(90, 0);
        let alg = two_one();
        let x = gen::module_vector(&mut rng, &alg, 3);
        let flat = x.flatten();
        assert!((module_norm(&x) - operator_norm(&flat)).abs() < 1e-10);
    }

    #[test]
    fn cauchy_schwarz_on_random_vectors() {
        let mut rng = gen::trial_rng(91, 0);
        let alg = two_one();
        for _ in 0..20 {
            let x = gen::module_vector(&mut rng, &alg, 2);
            let y = gen::module_vector(&mut rng, &alg, 2);
            let ip = inner_product(&x, &y).unwrap();
            assert!(ip.norm() <= module_norm(&x) * module_norm(&y) + 1e-10);
        }
    }

    #[test]
    fn flatten_is_unital_and_multiplicative() {
        let alg = two_one();
        let id = ModuleOperator::identity(&alg, 2);
        assert!(flatten(&id).close_to(&ComplexMatrix::identity(6), 1e-15));

        let mut rng = gen::trial_rng(92, 0);
        let t = gen::module_gaussian(&mut rng, &alg, 2);
        let s = gen::module_gaussian(&mut rng, &alg, 2);
        let lhs = flatten(&t.mul(&s).unwrap());
        let rhs = &flatten(&t) * &flatten(&s);
        assert!(lhs.diff_norm(&rhs) <= 1e-10 * (1.0 + rhs.frobenius_norm()));
        assert!(flatten(&t.adjoint()).close_to(&flatten(&t).adjoint(), 1e-14));
    }

    #[test]
    fn flatten_of_scalar_algebra_rank2_is_plain_matrix() {
        let alg = scalar_algebra();
        let mk = |a: f64, b: f64| {
            AlgebraElement::new(
                alg.clone(),
                vec![ComplexMatrix::scalar(Complex64::new(a, b))],
            )
            .unwrap()
        };
        let t = ModuleOperator::new(
            2,
            vec![mk(1.0, 0.0), mk(2.0, 1.0), mk(0.0, -1.0), mk(3.0, 0.0)],
        )
        .unwrap();
        let f = flatten(&t);
        assert_eq!(f.shape(), (2, 2));
        assert_eq!(f[(0, 1)], Complex64::new(2.0, 1.0));
        assert_eq!(f[(1, 0)], Complex64::new(0.0, -1.0));
    }

    #[test]
    fn pinv_of_flattened_operator_reshapes_into_a_grid() {
        let mut rng = gen::trial_rng(93, 0);
        let alg = two_one();
        let t = gen::module_psd(&mut rng, &alg, 3, true);
        let f = flatten(&t);
        let pinv = crate::geninv::mp_inverse(&f, &tol()).unwrap();
        let back = unflatten(&pinv, &alg, 3, &tol()).unwrap();
        assert!(flatten(&back).close_to(&pinv, 1e-12));
    }

    #[test]
    fn module_linearity_of_grid_action() {
        let mut rng = gen::trial_rng(94, 0);
        let alg = two_one();
        let t = gen::module_gaussian(&mut rng, &alg, 3);
        let x = gen::module_vector(&mut rng, &alg, 3);
        let a = gen::algebra_element(&mut rng, &alg);
        let lhs = t.apply(&x.act(&a).unwrap()).unwrap();
        let rhs = t.apply(&x).unwrap().act(&a).unwrap();
        let diff: f64 = lhs
            .components
            .iter()
            .zip(&rhs.components)
            .map(|(u, v)| u.flatten().diff_norm(&v.flatten()))
            .sum();
        assert!(diff <= 1e-12 * (1.0 + module_norm(&lhs)));
    }

    #[test]
    fn module_parallel_sum_identity_case() {
        let alg = two_one();
        let id = ModuleOperator::identity(&alg, 2);
        let ps = module_parallel_sum(&id, &id, &tol()).unwrap();
        let half = flatten(&id).scale_re(0.5);
        assert!(flatten(&ps).close_to(&half, 1e-12));
    }

    #[test]
    fn module_parallel_sum_rejects_non_positive() {
        let alg = two_one();
        let mut rng = gen::trial_rng(95, 0);
        let t = gen::module_gaussian(&mut rng, &alg, 2);
        let id = ModuleOperator::identity(&alg, 2);
        assert!(module_parallel_sum(&t, &id, &tol()).is_err());
    }

    // Diagonal grids decompose: the parallel sum acts per grid-diagonal
    // entry, blockwise. Independent oracle for the flatten route.
    #[test]
    fn block_diagonal_operators_sum_blockwise() {
        let mut rng = gen::trial_rng(96, 0);
        let alg = two_one();
        let k = 3;
        let diag_psd = |rng: &mut rand_chacha::ChaCha12Rng| {
            let mut grid = vec![AlgebraElement::zero(&alg); k * k];
            for i in 0..k {
                let blocks = alg
                    .block_dims()
                    .iter()
                    .map(|&d| {
                        let g = gen::matrix_gaussian(rng, d, d);
                        &g * &g.adjoint()
                    })
                    .collect();
                grid[i * k + i] = AlgebraElement::new(alg.clone(), blocks).unwrap();
            }
            ModuleOperator::new(k, grid).unwrap()
        };
        let a = diag_psd(&mut rng);
        let b = diag_psd(&mut rng);
        let ps = module_parallel_sum(&a, &b, &tol()).unwrap();
        for i in 0..k {
            for (bi, block) in ps.entry(i, i).blocks.iter().enumerate() {
                let pa = &a.entry(i, i).blocks[bi];
                let pb = &b.entry(i, i).blocks[bi];
                let expect = crate::parallel::parallel_sum(pa, pb, &tol()).unwrap().value;
                assert!(block.close_to(&expect, 1e-9), "grid entry {i}, block {bi}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let mut rng = gen::trial_rng(97, 0);
        let alg = two_one();
        let t = gen::module_gaussian(&mut rng, &alg, 2);
        let s = module_operator_to_json(&t);
        let back = module_operator_from_json(&s).unwrap();
        assert_eq!(t, back);
    }
}
