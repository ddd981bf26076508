//! Finite-dimensional matrix function calculus for operator monotone
//! functions: spectral functions, Fréchet derivatives, unitarily invariant
//! norms, operator quadrature along segments, and numerical checkers for the
//! norm inequalities these objects satisfy.
//!
//! The numerical core is generic over [`Real`]; the aliases at the crate root
//! fix it to `f64` (the precision every tolerance is calibrated for) or `f32`.

pub mod eig;
pub mod error;
pub mod funcat;
pub mod ineq;
pub mod matrix;
pub mod norms;
pub mod opfun;
pub mod quadrature;
pub mod random;
pub mod scalar;

pub use eig::{eig_hermitian, is_positive_definite, SpectralDecomposition};
pub use error::{Error, Result};
pub use funcat::{catalog_get, divided_difference, FunctionSpec};
pub use matrix::{schur_product, ComplexMatrix, HermitianMatrix, MatrixFile};
pub use norms::{norm, norm_identity, NormKind};
pub use opfun::{
    commutator_map, frechet_derivative, frechet_derivative_n, heinz_difference, matrix_function,
    sample_multilinear_norm, LoewnerMatrix,
};
pub use quadrature::{
    hh_integral, lemma1_residual, simpson_13, simpson_38, weight_moments, SegmentIntegralResult,
    SimpsonRule, WeightMoments,
};
pub use random::random_pd;
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type Matrix = ComplexMatrix<f64>;
pub type Hermitian = HermitianMatrix<f64>;
pub type Spectral = SpectralDecomposition<f64>;
pub type SegmentIntegral = SegmentIntegralResult<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type Hermitian32 = HermitianMatrix<f32>;
pub type Spectral32 = SpectralDecomposition<f32>;
