//! Generalized inverses and parallel sums of operators, verified by
//! seeded property sweeps over dense complex matrices, a finite-dimensional
//! Hilbert C*-module model, and an exact-arithmetic diagonal-operator model.
//!
//! The crate is organized around five layers:
//!
//! * [`matrix`], [`eig`], [`svd`], [`positive`], [`subspace`], [`io`] —
//!   dense complex linear algebra: arithmetic, Jacobi eigendecomposition,
//!   SVD, positivity, square roots, and subspace calculus.
//! * [`geninv`] — Moore-Penrose inverses, {1}-inverse families, and the
//!   `AXB = C` solvability test.
//! * [`parallel`] — parallel summability, the parallel sum `A:B` and its
//!   identities, norm bounds, the self-adjoint block embedding, and
//!   Douglas-style factors.
//! * [`cstar`] — free Hilbert modules over a finite-dimensional C*-algebra
//!   with a faithful flattening into plain matrices.
//! * [`symbolic`] — exact rational/surd arithmetic for parity-diagonal
//!   operators, including the unsolvable half-power factor equation.
//!
//! Seeded instance generators live in [`gen`], the data-parallel trial
//! engine in [`sweep`] (rayon behind the `parallel` feature, sequential
//! fallback otherwise), and the named verification suites in [`suite`].

pub mod cstar;
pub mod eig;
pub mod gen;
pub mod geninv;
pub mod io;
pub mod matrix;
pub mod parallel;
pub mod positive;
pub mod subspace;
pub mod suite;
pub mod svd;
pub mod sweep;
pub mod symbolic;
pub mod tol;

mod error;

pub use error::Error;
pub use matrix::ComplexMatrix;
pub use tol::TolerancePolicy;

/// Convenience alias used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;
