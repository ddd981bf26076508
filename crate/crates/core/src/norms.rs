//! Unitarily invariant norms, all computed from singular values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eig::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::scalar::Real;

/// Which unitarily invariant norm to evaluate.
///
/// String grammar: `op`, `tr`, `fro`, `s:<p>` (p >= 1), `kf:<k>` (k >= 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    Operator,
    Trace,
    Frobenius,
    Schatten(f64),
    KyFan(usize),
}

impl NormKind {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            NormKind::Schatten(p) if p.is_nan() || p < 1.0 => Err(Error::InvalidNorm(format!(
                "schatten exponent must be >= 1, got {p}"
            ))),
            NormKind::KyFan(k) if k == 0 || k > dim => Err(Error::InvalidNorm(format!(
                "ky fan index must be in 1..={dim}, got {k}"
            ))),
            _ => Ok(()),
        }
    }

    /// Whether this is the operator (spectral) norm, in any of its spellings.
    pub fn is_operator(&self) -> bool {
        matches!(self, NormKind::Operator | NormKind::KyFan(1))
            || matches!(self, NormKind::Schatten(p) if p.is_infinite())
    }

    /// Norm of a vector of singular values (any order).
    pub fn of_singular_values<T: Real>(&self, sv: &[T]) -> Result<T> {
        self.validate(sv.len())?;
        let value = match *self {
            NormKind::Operator => sv.iter().copied().fold(T::zero(), T::max),
            NormKind::Trace => sv.iter().copied().sum(),
            NormKind::Frobenius => sv.iter().map(|&s| s * s).sum::<T>().sqrt(),
            NormKind::Schatten(p) if p.is_infinite() => sv.iter().copied().fold(T::zero(), T::max),
            NormKind::Schatten(p) => {
                let smax = sv.iter().copied().fold(T::zero(), T::max);
                if smax.is_zero() {
                    T::zero()
                } else {
                    // scaled to avoid overflow for large p
                    let p = T::lit(p);
                    smax * sv.iter().map(|&s| (s / smax).powf(p)).sum::<T>().powf(p.recip())
                }
            }
            NormKind::KyFan(k) => {
                let mut sorted = sv.to_vec();
                sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite singular values"));
                sorted.iter().take(k).copied().sum()
            }
        };
        Ok(value)
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => write!(f, "op"),
            NormKind::Trace => write!(f, "tr"),
            NormKind::Frobenius => write!(f, "fro"),
            NormKind::Schatten(p) => write!(f, "s:{p}"),
            NormKind::KyFan(k) => write!(f, "kf:{k}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidNorm(s.to_string());
        match s.trim() {
            "op" => Ok(NormKind::Operator),
            "tr" => Ok(NormKind::Trace),
            "fro" => Ok(NormKind::Frobenius),
            other => {
                if let Some(p) = other.strip_prefix("s:") {
                    let p: f64 = p.parse().map_err(|_| bad())?;
                    if p.is_nan() || p < 1.0 {
                        return Err(bad());
                    }
                    Ok(NormKind::Schatten(p))
                } else if let Some(k) = other.strip_prefix("kf:") {
                    let k: usize = k.parse().map_err(|_| bad())?;
                    if k == 0 {
                        return Err(bad());
                    }
                    Ok(NormKind::KyFan(k))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list of norm kinds.
pub fn parse_norm_list(s: &str) -> Result<Vec<NormKind>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

/// Singular values, descending: the `n` largest eigenvalues of the Hermitian
/// dilation `[[0, X], [X*, 0]]`, whose spectrum is `±σ_i`. Working with the
/// dilation instead of `X* X` keeps small singular values accurate to
/// `eps ||X||` rather than `sqrt(eps) ||X||`.
pub fn singular_values<T: Real>(x: &ComplexMatrix<T>) -> Result<Vec<T>> {
    let n = x.dim();
    let mut dil = ComplexMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            dil[(i, n + j)] = x[(i, j)];
            dil[(n + j, i)] = x[(i, j)].conj();
        }
    }
    let d = eig_hermitian(&HermitianMatrix::symmetrize(dil))?;
    Ok(d.eigenvalues.iter().rev().take(n).map(|&l| l.max(T::zero())).collect())
}

/// Singular values of a Hermitian matrix: `|λ_i|`, descending.
pub fn singular_values_hermitian<T: Real>(a: &HermitianMatrix<T>) -> Result<Vec<T>> {
    let d = eig_hermitian(a)?;
    let mut sv: Vec<T> = d.eigenvalues.iter().map(|l| l.abs()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(sv)
}

pub fn norm<T: Real>(x: &ComplexMatrix<T>, kind: NormKind) -> Result<T> {
    kind.validate(x.dim())?;
    kind.of_singular_values(&singular_values(x)?)
}

/// Same as [`norm`] but uses the eigenvalues directly.
pub fn norm_hermitian<T: Real>(a: &HermitianMatrix<T>, kind: NormKind) -> Result<T> {
    kind.validate(a.dim())?;
    kind.of_singular_values(&singular_values_hermitian(a)?)
}

/// Operator norm `||A||` of a Hermitian matrix.
pub fn op_norm<T: Real>(a: &HermitianMatrix<T>) -> Result<T> {
    norm_hermitian(a, NormKind::Operator)
}

/// `|||1|||` for the `dim x dim` identity.
pub fn norm_identity<T: Real>(dim: usize, kind: NormKind) -> Result<T> {
    kind.validate(dim)?;
    kind.of_singular_values(&vec![T::one(); dim])
}
