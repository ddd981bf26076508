//! Functional calculus on Hermitian matrices: `f(A)`, Fréchet derivatives of
//! order 1 to 3 through divided differences in the eigenbasis of `A`, and the
//! commutator-type maps the perturbation bounds are stated for.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::eig::{eig_hermitian, require_positive_definite, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::funcat::divided::{dd1, dd2, dd3};
use crate::funcat::FunctionSpec;
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::norms::{norm_hermitian, norm_identity, NormKind};
use crate::random::{derive_seed, random_hermitian, random_rank_one, rng_from_seed};
use crate::scalar::Real;

/// Highest Fréchet derivative order implemented.
pub const MAX_FRECHET_ORDER: usize = 3;

/// Loewner matrix `f^{[1]}(Λ)` together with the spectrum it was built on.
#[derive(Clone, Debug, PartialEq)]
pub struct LoewnerMatrix<T> {
    pub base_eigenvalues: Vec<T>,
    /// Row-major real entries `f[λ_i, λ_j]`.
    pub entries: Vec<T>,
}

impl<T: Real> LoewnerMatrix<T> {
    pub fn new(spec: &FunctionSpec, eigenvalues: &[T]) -> Result<Self> {
        Ok(Self {
            base_eigenvalues: eigenvalues.to_vec(),
            entries: crate::funcat::loewner_matrix(spec, eigenvalues)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.base_eigenvalues.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[i * self.dim() + j]
    }

    /// `L ∘ M` for a complex `M` of the same size.
    pub fn schur(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = m.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = out[(i, j)].scale(self.get(i, j));
            }
        }
        out
    }

    pub fn as_complex(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        ComplexMatrix::from_vec_unchecked(
            n,
            self.entries.iter().map(|&v| Complex::new(v, T::zero())).collect(),
        )
    }
}

/// Eigendecomposition of `A` with its spectrum checked against `spec`'s domain.
pub fn spectral_in_domain<T: Real>(spec: &FunctionSpec, a: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let d = eig_hermitian(a)?;
    for &l in &d.eigenvalues {
        spec.check_domain(l.to_f64_lossy())?;
    }
    Ok(d)
}

/// `U g(Λ) U*` for an arbitrary scalar map `g` applied to the spectrum.
pub fn spectral_map<T: Real>(d: &SpectralDecomposition<T>, g: impl Fn(T) -> T) -> HermitianMatrix<T> {
    let values: Vec<T> = d.eigenvalues.iter().map(|&l| g(l)).collect();
    d.synthesize(&values)
}

/// `f(A) = U f(Λ) U*`.
pub fn matrix_function<T: Real>(spec: &FunctionSpec, a: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let d = spectral_in_domain(spec, a)?;
    Ok(spectral_map(&d, |l| spec.eval(l)))
}

/// `f^{(n)}(A)`.
pub fn matrix_derivative<T: Real>(spec: &FunctionSpec, n: usize, a: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    let d = spectral_in_domain(spec, a)?;
    Ok(spectral_map(&d, |l| spec.deriv(n, l)))
}

/// `||f^{(n)}(A)||` in the operator norm: the largest `|f^{(n)}(λ_i)|`.
pub fn derivative_op_norm<T: Real>(spec: &FunctionSpec, n: usize, a: &HermitianMatrix<T>) -> Result<T> {
    let d = spectral_in_domain(spec, a)?;
    Ok(derivative_op_norm_from(spec, n, &d))
}

pub(crate) fn derivative_op_norm_from<T: Real>(spec: &FunctionSpec, n: usize, d: &SpectralDecomposition<T>) -> T {
    d.eigenvalues
        .iter()
        .map(|&l| spec.deriv(n, l).abs())
        .fold(T::zero(), T::max)
}

fn check_same_dim<T: Real>(a: &HermitianMatrix<T>, b: &ComplexMatrix<T>) -> Result<()> {
    a.as_matrix().check_dim(b)
}

/// `Df(A)(B) = U [f^{[1]}(Λ) ∘ (U* B U)] U*` (Daleckii-Krein).
pub fn frechet_derivative<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
) -> Result<HermitianMatrix<T>> {
    check_same_dim(a, b)?;
    let d = spectral_in_domain(spec, a)?;
    Ok(frechet_from(spec, &d, b))
}

pub(crate) fn frechet_from<T: Real>(
    spec: &FunctionSpec,
    d: &SpectralDecomposition<T>,
    b: &HermitianMatrix<T>,
) -> HermitianMatrix<T> {
    let bt = d.to_eigenbasis(b.as_matrix());
    let lam = &d.eigenvalues;
    let n = lam.len();
    let mut inner = bt;
    for i in 0..n {
        for j in 0..n {
            let w = dd1(spec, lam[i], lam[j]);
            inner[(i, j)] = inner[(i, j)].scale(w);
        }
    }
    HermitianMatrix::symmetrize(d.from_eigenbasis(&inner))
}

/// `D^n f(A)(B_1, ..., B_n)` for `1 <= n <= 3`.
///
/// In the eigenbasis of `A`, entry `(i_0, i_n)` is the sum over permutations
/// `σ` and intermediate indices of
/// `f[λ_{i_0}, ..., λ_{i_n}] (B_{σ(1)})_{i_0 i_1} ⋯ (B_{σ(n)})_{i_{n-1} i_n}`.
pub fn frechet_derivative_n<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    dirs: &[&HermitianMatrix<T>],
) -> Result<HermitianMatrix<T>> {
    if dirs.is_empty() || dirs.len() > MAX_FRECHET_ORDER {
        return Err(Error::param(
            "dirs",
            format!("need 1..={MAX_FRECHET_ORDER} directions, got {}", dirs.len()),
        ));
    }
    for b in dirs {
        check_same_dim(a, b)?;
    }
    let d = spectral_in_domain(spec, a)?;
    Ok(frechet_n_from(spec, &d, dirs))
}

pub(crate) fn frechet_n_from<T: Real>(
    spec: &FunctionSpec,
    d: &SpectralDecomposition<T>,
    dirs: &[&HermitianMatrix<T>],
) -> HermitianMatrix<T> {
    if dirs.len() == 1 {
        return frechet_from(spec, d, dirs[0]);
    }
    let lam = &d.eigenvalues;
    let n = lam.len();
    let bt: Vec<ComplexMatrix<T>> = dirs.iter().map(|b| d.to_eigenbasis(b.as_matrix())).collect();
    let mut inner = ComplexMatrix::<T>::zeros(n);
    match dirs.len() {
        2 => {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex::zero();
                    for k in 0..n {
                        let w = dd2(spec, lam[i], lam[k], lam[j]);
                        let pair = bt[0][(i, k)] * bt[1][(k, j)] + bt[1][(i, k)] * bt[0][(k, j)];
                        acc += pair.scale(w);
                    }
                    inner[(i, j)] = acc;
                }
            }
        }
        3 => {
            const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Complex::zero();
                    for k in 0..n {
                        for l in 0..n {
                            let w = dd3(spec, lam[i], lam[k], lam[l], lam[j]);
                            let mut s = Complex::zero();
                            for p in PERMS {
                                s += bt[p[0]][(i, k)] * bt[p[1]][(k, l)] * bt[p[2]][(l, j)];
                            }
                            acc += s.scale(w);
                        }
                    }
                    inner[(i, j)] = acc;
                }
            }
        }
        _ => unreachable!("order validated by caller"),
    }
    HermitianMatrix::symmetrize(d.from_eigenbasis(&inner))
}

/// Lower bound on `|||D^n f(A)|||`: the largest `|||D^n f(A)(B_1..B_n)|||`
/// over sampled direction tuples normalized to `|||B_i||| = 1`.
///
/// Tuple 0 is always `(1/|||1|||, ..., 1/|||1|||)`; tuple `k >= 1` is drawn
/// from a seed derived from `(seed, k)`, so a run with more samples sees a
/// superset of the tuples of a run with fewer. Directions alternate between
/// Gaussian Hermitian matrices and rank-one projectors.
pub fn sample_multilinear_norm<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    n: usize,
    kind: NormKind,
    samples: usize,
    seed: u64,
) -> Result<T> {
    if samples == 0 {
        return Err(Error::param("samples", "must be >= 1"));
    }
    if n == 0 || n > MAX_FRECHET_ORDER {
        return Err(Error::param("n", format!("must be in 1..={MAX_FRECHET_ORDER}")));
    }
    let dim = a.dim();
    kind.validate(dim)?;
    let d = spectral_in_domain(spec, a)?;

    let unit = HermitianMatrix::identity(dim).scale(norm_identity::<T>(dim, kind)?.recip());
    let identity_tuple: Vec<&HermitianMatrix<T>> = vec![&unit; n];
    let mut best = norm_hermitian(&frechet_n_from(spec, &d, &identity_tuple), kind)?;

    for k in 1..samples {
        let mut rng = rng_from_seed(derive_seed(seed, &[k as u64]));
        let mut dirs = Vec::with_capacity(n);
        for _ in 0..n {
            dirs.push(random_unit_direction(dim, kind, k % 2 == 0, &mut rng)?);
        }
        let refs: Vec<&HermitianMatrix<T>> = dirs.iter().collect();
        let v = norm_hermitian(&frechet_n_from(spec, &d, &refs), kind)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

fn random_unit_direction<T: Real, R: Rng>(dim: usize, kind: NormKind, rank_one: bool, rng: &mut R) -> Result<HermitianMatrix<T>> {
    loop {
        let b = if rank_one {
            random_rank_one::<T, _>(dim, rng)
        } else {
            random_hermitian::<T, _>(dim, rng)
        };
        let nb = norm_hermitian(&b, kind)?;
        if nb > T::epsilon() {
            return Ok(b.scale(nb.recip()));
        }
    }
}

/// `f(A) X - X f(B)`.
pub fn commutator_map<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    x: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    a.as_matrix().check_dim(b.as_matrix())?;
    check_same_dim(a, x)?;
    let fa = matrix_function(spec, a)?;
    let fb = matrix_function(spec, b)?;
    Ok(&fa.as_matrix().matmul(x) - &x.matmul(fb.as_matrix()))
}

/// `A^ν X B^{1-ν} - A^{1-ν} X B^ν` for positive definite `A`, `B`.
pub fn heinz_difference<T: Real>(
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    x: &ComplexMatrix<T>,
    nu: T,
) -> Result<ComplexMatrix<T>> {
    if !(nu >= T::zero() && nu <= T::one()) {
        return Err(Error::param("nu", format!("must lie in [0, 1], got {nu}")));
    }
    a.as_matrix().check_dim(b.as_matrix())?;
    check_same_dim(a, x)?;
    let da = require_positive_definite(a)?;
    let db = require_positive_definite(b)?;
    let one_minus = T::one() - nu;
    let a_nu = spectral_map(&da, |l| l.powf(nu));
    let a_rest = spectral_map(&da, |l| l.powf(one_minus));
    let b_nu = spectral_map(&db, |l| l.powf(nu));
    let b_rest = spectral_map(&db, |l| l.powf(one_minus));
    let left = a_nu.as_matrix().matmul(x).matmul(b_rest.as_matrix());
    let right = a_rest.as_matrix().matmul(x).matmul(b_nu.as_matrix());
    Ok(&left - &right)
}
