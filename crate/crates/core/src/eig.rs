//! Cyclic Jacobi eigensolver for Hermitian matrices.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;

/// Sweeps stop once the off-diagonal Frobenius mass drops below
/// `OFFDIAG_TOL * ||A||_F`.
pub const OFFDIAG_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Relative factor of the default positive-definiteness floor.
pub const PD_FLOOR_FACTOR: f64 = 1e-10;

/// `A = U diag(λ) U*` with `λ` ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub unitary: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn lambda_min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> T {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U diag(values) U*`.
    pub fn synthesize(&self, values: &[T]) -> HermitianMatrix<T> {
        let n = self.dim();
        let u = &self.unitary;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex::zero();
                for (k, &v) in values.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = acc;
                if i != j {
                    out[(j, i)] = acc.conj();
                }
            }
        }
        HermitianMatrix::symmetrize(out)
    }

    /// `U M U*` for a general matrix expressed in the eigenbasis.
    pub fn from_eigenbasis(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.unitary.matmul(m).matmul(&self.unitary.adjoint())
    }

    /// `U* M U`.
    pub fn to_eigenbasis(&self, m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.unitary.adjoint().matmul(m).matmul(&self.unitary)
    }
}

fn offdiag_mass<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary and
/// then applies a real Givens rotation to the resulting real symmetric 2x2 block.
pub fn eig_hermitian<T: Real>(a: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let target = T::tol_floor(OFFDIAG_TOL) * m.frobenius_norm();

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        if offdiag_mass(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        let residual = offdiag_mass(&m);
        if residual > target {
            return Err(Error::NonConvergence {
                sweeps: MAX_SWEEPS,
                residual: residual.to_f64_lossy(),
            });
        }
    }

    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues").then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let mut unitary = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            unitary[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok(SpectralDecomposition { eigenvalues, unitary })
}

fn rotate<T: Real>(m: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r.is_zero() {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // phase e^{-iφ} making the (p, q) entry real and positive
    let phase = (apq / r).conj();

    let tau = (aqq - app) / (T::two() * r);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // G acts on columns (p, q): G = diag(1, phase) · [[c, s], [-s, c]]
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = m.dim();
    // M <- M G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
    }
    // M <- G* M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = Complex::zero();
    m[(q, p)] = Complex::zero();
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// `λ_min(A) > floor`.
pub fn is_positive_definite<T: Real>(a: &HermitianMatrix<T>, floor: T) -> Result<bool> {
    if floor < T::zero() {
        return Err(Error::param("floor", "must be non-negative"));
    }
    Ok(eig_hermitian(a)?.lambda_min() > floor)
}

/// Default floor `1e-10 · max|λ|`.
pub fn default_pd_floor<T: Real>(decomp: &SpectralDecomposition<T>) -> T {
    let spectral_radius = decomp.lambda_min().abs().max(decomp.lambda_max().abs());
    T::lit(PD_FLOOR_FACTOR) * spectral_radius
}

/// Positive definiteness against [`default_pd_floor`].
pub fn is_positive_definite_default<T: Real>(a: &HermitianMatrix<T>) -> Result<bool> {
    let d = eig_hermitian(a)?;
    Ok(d.lambda_min() > default_pd_floor(&d))
}

/// Returns the decomposition if `A` is positive definite w.r.t. the default floor.
pub fn require_positive_definite<T: Real>(a: &HermitianMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let d = eig_hermitian(a)?;
    let floor = default_pd_floor(&d);
    if d.lambda_min() > floor {
        Ok(d)
    } else {
        Err(Error::NotPositiveDefinite {
            lambda_min: d.lambda_min().to_f64_lossy(),
            floor: floor.to_f64_lossy(),
        })
    }
}

/// `||U U* - I||_F`.
pub fn unitarity_defect<T: Real>(u: &ComplexMatrix<T>) -> T {
    let n = u.dim();
    let prod = u.matmul(&u.adjoint());
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { Complex::one() } else { Complex::zero() };
            acc += (prod[(i, j)] - target).norm_sqr();
        }
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn herm(dim: usize, re_im: &[(f64, f64)]) -> HermitianMatrix<f64> {
        HermitianMatrix::new(
            ComplexMatrix::new(dim, re_im.iter().map(|&(r, i)| Complex::new(r, i)).collect()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn diagonal_input() {
        let a = HermitianMatrix::<f64>::from_diag_f64(&[3.0, 1.0]);
        let d = eig_hermitian(&a).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 3.0]);
        // columns swapped: U is a permutation
        assert_eq!(d.unitary[(1, 0)].norm(), 1.0);
        assert_eq!(d.unitary[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn two_by_two_real() {
        let a = HermitianMatrix::<f64>::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let d = eig_hermitian(&a).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn pauli_y() {
        let a = herm(2, &[(0.0, 0.0), (0.0, 1.0), (0.0, -1.0), (0.0, 0.0)]);
        let d = eig_hermitian(&a).unwrap();
        assert_abs_diff_eq!(d.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.eigenvalues[1], 1.0, epsilon = 1e-14);
        let back = d.synthesize(&d.eigenvalues);
        assert!((&back.into_matrix() - a.as_matrix()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let d = eig_hermitian(&HermitianMatrix::<f64>::zeros(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn positive_definite_examples() {
        let id = HermitianMatrix::<f64>::identity(3);
        assert!(is_positive_definite(&id, 0.0).unwrap());
        assert!(!is_positive_definite(&HermitianMatrix::from_diag_f64(&[1.0, 0.0]), 0.0).unwrap());
        assert!(!is_positive_definite(&HermitianMatrix::from_diag_f64(&[1e-12, 1.0]), 1e-10).unwrap());
        assert!(is_positive_definite(&id, -1.0).is_err());
        assert!(require_positive_definite(&HermitianMatrix::<f64>::from_diag_f64(&[-1.0, 1.0])).is_err());
    }

    #[test]
    fn f32_instantiation() {
        let a = HermitianMatrix::<f32>::from_real(2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let d = eig_hermitian(&a).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-5);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-5);
    }
}
