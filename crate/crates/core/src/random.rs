//! Seeded random matrices: Haar unitaries, positive definite matrices with a
//! prescribed log-uniform spectrum, Hermitian and general complex matrices.
//!
//! Every generator takes an explicit seed or RNG; there is no shared state.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a list of indices into an independent child seed
/// (SplitMix64 finalizer per component).
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = base ^ 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        h = splitmix(h ^ splitmix(p.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary
/// parts each N(0, 1/2)).
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let data = (0..dim * dim)
        .map(|_| Complex::new(gaussian::<T, _>(rng) * s, gaussian::<T, _>(rng) * s))
        .collect();
    ComplexMatrix::from_vec_unchecked(dim, data)
}

/// Haar-distributed unitary: the Q factor of a complex Gaussian matrix by
/// modified Gram-Schmidt (which yields a positive diagonal in R).
pub fn random_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix<T> {
    loop {
        let z = complex_gaussian::<T, _>(dim, rng);
        if let Some(q) = gram_schmidt_columns(&z) {
            return q;
        }
    }
}

fn gram_schmidt_columns<T: Real>(z: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let n = z.dim();
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| (0..n).map(|i| z[(i, j)]).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let vj = &mut rest[0];
            let proj: Complex<T> = qk.iter().zip(vj.iter()).map(|(a, b)| a.conj() * b).sum();
            for (v, q) in vj.iter_mut().zip(qk) {
                *v -= *q * proj;
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::epsilon() {
            return None;
        }
        for v in cols[j].iter_mut() {
            *v = v.unscale(norm);
        }
    }
    let mut q = ComplexMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            q[(i, j)] = v;
        }
    }
    Some(q)
}

/// Hermitian matrix `(Z + Z*)/2` with `Z` complex Gaussian.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix<T> {
    let z = complex_gaussian::<T, _>(dim, rng);
    HermitianMatrix::symmetrize((&z + &z.adjoint()).scale_real(T::half()))
}

/// Rank-one projector `x x*` onto a random unit vector.
pub fn random_rank_one<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix<T> {
    let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let mut x: Vec<Complex<T>> = (0..dim)
        .map(|_| Complex::new(gaussian::<T, _>(rng) * s, gaussian::<T, _>(rng) * s))
        .collect();
    let norm = x.iter().map(|v| v.norm_sqr()).sum::<T>().sqrt();
    for v in x.iter_mut() {
        *v = v.unscale(norm);
    }
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = x[i] * x[j].conj();
        }
    }
    HermitianMatrix::symmetrize(m)
}

/// `Q diag(λ) Q*` with `λ_i` log-uniform in `[lo, hi]` and `Q` Haar.
pub fn random_pd_with<T: Real, R: Rng + ?Sized>(
    dim: usize,
    spectrum_range: (f64, f64),
    rng: &mut R,
) -> Result<HermitianMatrix<T>> {
    let (lo, hi) = spectrum_range;
    if dim == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::param(
            "spectrum_range",
            format!("need 0 < lo <= hi < inf, got ({lo}, {hi})"),
        ));
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    let lambdas: Vec<T> = (0..dim)
        .map(|_| {
            let u: f64 = rng.random();
            if lo == hi {
                T::lit(lo)
            } else {
                T::lit((llo + u * (lhi - llo)).exp().clamp(lo, hi))
            }
        })
        .collect();
    let q = random_unitary::<T, _>(dim, rng);
    Ok(HermitianMatrix::from_real_diag(&lambdas).conjugate_by(&q))
}

/// Seeded positive definite matrix; bit-identical for identical arguments.
pub fn random_pd<T: Real>(dim: usize, spectrum_range: (f64, f64), seed: u64) -> Result<HermitianMatrix<T>> {
    random_pd_with(dim, spectrum_range, &mut rng_from_seed(seed))
}

/// Zero-mean complex matrix; `X` in the commutator inequalities.
pub fn random_complex<T: Real>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    complex_gaussian(dim, &mut rng_from_seed(seed))
}
