//! Dense square complex matrices and the Hermitian wrapper used as the
//! argument type of every matrix function.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Relative tolerance on `||M - M*||_F` accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense `dim x dim` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting ragged or non-finite input.
    pub fn new(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data: entries })
    }

    pub(crate) fn from_vec_unchecked(dim: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                expected: dim * dim,
                got: dim * (dim - 1) + bad.len(),
            });
        }
        Self::new(dim, rows.iter().flatten().copied().collect())
    }

    /// Real matrix from row-major `f64` values.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            dim,
            values.iter().map(|&v| Complex::new(T::lit(v), T::zero())).collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// All-ones matrix, the unit of the Schur product.
    pub fn ones(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::one(); dim * dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: T) -> Self {
        self.map(|z| z.scale(c))
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Matrix product; panics on dimension mismatch (use [`Self::try_matmul`]
    /// for checked input).
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out[i * n..(i + 1) * n];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.matmul(rhs))
    }

    /// Entrywise (Schur / Hadamard) product.
    pub fn schur(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(Self {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a * b).collect(),
        })
    }

    pub(crate) fn check_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        Ok(())
    }

    /// `||M - M*||_F`.
    pub fn hermitian_defect(&self) -> T {
        let n = self.dim;
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n + m);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..m {
            for j in 0..m {
                out[(n + i, n + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Copy of the `size x size` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        let mut out = Self::zeros(size);
        for i in 0..size {
            for j in 0..size {
                out[(i, j)] = self[(row + i, col + j)];
            }
        }
        out
    }

    pub fn to_f64(&self) -> ComplexMatrix<f64> {
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()))
                .collect(),
        }
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            dim: self.dim,
            entries: self
                .data
                .iter()
                .map(|z| [z.re.to_f64_lossy(), z.im.to_f64_lossy()])
                .collect(),
        }
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        if file.entries.len() != file.dim * file.dim {
            return Err(Error::Format(format!(
                "expected {} entry pairs for dim {}, found {}",
                file.dim * file.dim,
                file.dim,
                file.entries.len()
            )));
        }
        Self::new(
            file.dim,
            file.entries
                .iter()
                .map(|&[re, im]| Complex::new(T::lit(re), T::lit(im)))
                .collect(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("matrix file serializes")
    }
}

/// Schur product `X ∘ Y`.
pub fn schur_product<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    x.schur(y)
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        self.map(|z| -z)
    }
}

/// On-disk matrix format: `{"dim": n, "entries": [[re, im], ...]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

/// A complex matrix certified Hermitian.
///
/// Construction rejects inputs whose Hermitian defect exceeds
/// [`HERMITIAN_TOL`]`·(1 + ||M||_F)` and replaces accepted inputs by
/// `(M + M*)/2`, so the stored matrix is exactly Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    base: ComplexMatrix<T>,
    symmetrized: bool,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let defect = m.hermitian_defect();
        let tol = T::tol_floor(HERMITIAN_TOL) * (T::one() + m.frobenius_norm());
        if defect > tol {
            return Err(Error::NotHermitian {
                defect: defect.to_f64_lossy(),
                tolerance: tol.to_f64_lossy(),
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// `(M + M*)/2` without a tolerance check; for internal results that are
    /// Hermitian up to rounding by construction.
    pub(crate) fn symmetrize(mut m: ComplexMatrix<T>) -> Self {
        let n = m.dim;
        let half = T::half();
        let mut touched = false;
        for i in 0..n {
            let d = m[(i, i)];
            if !d.im.is_zero() {
                touched = true;
                m[(i, i)] = Complex::new(d.re, T::zero());
            }
            for j in (i + 1)..n {
                let a = m[(i, j)];
                let b = m[(j, i)].conj();
                if a != b {
                    touched = true;
                    let avg = (a + b).scale(half);
                    m[(i, j)] = avg;
                    m[(j, i)] = avg.conj();
                }
            }
        }
        Self {
            base: m,
            symmetrized: touched,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            base: ComplexMatrix::identity(dim),
            symmetrized: false,
        }
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        Self {
            base: ComplexMatrix::from_diag(diag),
            symmetrized: false,
        }
    }

    pub fn from_diag_f64(diag: &[f64]) -> Self {
        Self::from_real_diag(&diag.iter().map(|&d| T::lit(d)).collect::<Vec<_>>())
    }

    /// Real symmetric input given row-major as `f64`.
    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(dim, values)?)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            base: ComplexMatrix::zeros(dim),
            symmetrized: false,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.base.dim
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.base
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.base
    }

    /// Whether construction had to average `M` with `M*`.
    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::symmetrize(&self.base + &rhs.base)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::symmetrize(&self.base - &rhs.base)
    }

    pub fn scale(&self, c: T) -> Self {
        Self::symmetrize(self.base.scale_real(c))
    }

    /// `(1 - t) A + t B`.
    pub fn lerp(&self, other: &Self, t: T) -> Self {
        let s = T::one() - t;
        let n = self.dim();
        let data = self
            .base
            .data
            .iter()
            .zip(&other.base.data)
            .map(|(&a, &b)| a.scale(s) + b.scale(t))
            .collect();
        Self::symmetrize(ComplexMatrix::from_vec_unchecked(n, data))
    }

    /// Linear combination `Σ w_k M_k` of Hermitian matrices with real weights.
    pub fn combination(terms: &[(T, &Self)]) -> Self {
        let n = terms.first().map(|(_, m)| m.dim()).unwrap_or(0);
        let mut acc = ComplexMatrix::zeros(n);
        for (w, m) in terms {
            for (a, &b) in acc.data.iter_mut().zip(&m.base.data) {
                *a += b.scale(*w);
            }
        }
        Self::symmetrize(acc)
    }

    /// `U A U*` for unitary `U`.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        Self::symmetrize(u.matmul(&self.base).matmul(&u.adjoint()))
    }

    /// `U* A U` for unitary `U`.
    pub fn conjugate_by_adjoint(&self, u: &ComplexMatrix<T>) -> Self {
        Self::symmetrize(u.adjoint().matmul(&self.base).matmul(u))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            base: self.base.direct_sum(&other.base),
            symmetrized: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(ComplexMatrix::from_json(text)?)
    }
}

impl<T> std::ops::Deref for HermitianMatrix<T> {
    type Target = ComplexMatrix<T>;

    fn deref(&self) -> &ComplexMatrix<T> {
        &self.base
    }
}

impl<T: Real> TryFrom<ComplexMatrix<T>> for HermitianMatrix<T> {
    type Error = Error;

    fn try_from(m: ComplexMatrix<T>) -> Result<Self> {
        Self::new(m)
    }
}
