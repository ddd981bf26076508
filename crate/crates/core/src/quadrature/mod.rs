//! Operator-valued integrals along the segment `(1 - t) A + t B`, the weight
//! moments of the Hermite-Hadamard bounds, and the Simpson 1/3 and 3/8 rules.

pub mod gauss;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcat::FunctionSpec;
use crate::matrix::HermitianMatrix;
use crate::opfun::{frechet_from, matrix_function, spectral_in_domain};
use crate::scalar::Real;

use gauss::{GaussLegendre, PANEL_POINTS};

/// Default Frobenius tolerance between successive refinements.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Maximum number of panels (`2^10`).
pub const MAX_PANELS: usize = 1 << 10;

/// Points where segment membership in the domain is checked up front.
const DOMAIN_PROBES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct SegmentIntegralResult<T> {
    pub value: HermitianMatrix<T>,
    /// Number of panel-doubling levels evaluated (1 panel is level 1).
    pub refinement_levels: usize,
    /// Frobenius distance between the last two levels.
    pub est_error: T,
}

/// Composite 16-point Gauss-Legendre on `[0, 1]` for a Hermitian-valued
/// integrand, doubling the panel count until successive levels agree to `tol`
/// in Frobenius norm.
pub fn integrate_unit_interval<T: Real>(
    dim: usize,
    tol: T,
    integrand: impl Fn(T) -> Result<HermitianMatrix<T>>,
) -> Result<SegmentIntegralResult<T>> {
    if tol.is_nan() || tol <= T::zero() {
        return Err(Error::param("tol", "must be positive"));
    }
    let rule = GaussLegendre::<T>::new(PANEL_POINTS);
    let mut panels = 1usize;
    let mut previous: Option<HermitianMatrix<T>> = None;
    let mut levels = 0usize;
    loop {
        let h = T::one() / T::lit(panels as f64);
        let mut terms: Vec<(T, HermitianMatrix<T>)> = Vec::with_capacity(panels * PANEL_POINTS);
        for p in 0..panels {
            let a = h * T::lit(p as f64);
            for (t, w) in rule.mapped(a, a + h) {
                terms.push((w, integrand(t)?));
            }
        }
        let refs: Vec<(T, &HermitianMatrix<T>)> = terms.iter().map(|(w, m)| (*w, m)).collect();
        let current = if refs.is_empty() {
            HermitianMatrix::zeros(dim)
        } else {
            HermitianMatrix::combination(&refs)
        };
        levels += 1;
        if let Some(prev) = previous {
            let err = current.sub(&prev).frobenius_norm();
            if err < tol {
                return Ok(SegmentIntegralResult {
                    value: current,
                    refinement_levels: levels,
                    est_error: err,
                });
            }
            if panels >= MAX_PANELS {
                return Err(Error::QuadratureNonConvergence {
                    panels,
                    est_error: err.to_f64_lossy(),
                    tol: tol.to_f64_lossy(),
                });
            }
        }
        previous = Some(current);
        panels *= 2;
    }
}

fn check_pair<T: Real>(a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<()> {
    a.as_matrix().check_dim(b.as_matrix())
}

fn check_segment<T: Real>(spec: &FunctionSpec, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<()> {
    check_pair(a, b)?;
    for &t in &DOMAIN_PROBES {
        spectral_in_domain(spec, &a.lerp(b, T::lit(t)))?;
    }
    Ok(())
}

/// `∫_0^1 f((1 - t) A + t B) dt`.
pub fn hh_integral<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    tol: T,
) -> Result<SegmentIntegralResult<T>> {
    check_segment(spec, a, b)?;
    integrate_unit_interval(a.dim(), tol, |t| matrix_function(spec, &a.lerp(b, t)))
}

/// Closed-form moments of the kernel `|t - ν|`:
///
/// * `m0  = ∫ |t-ν| dt           = ν² - ν + 1/2`
/// * `m1  = ∫ |t-ν| t dt         = (2ν³ - 3ν + 2)/6`
/// * `m1c = ∫ |t-ν| (1-t) dt     = m1(1 - ν)`
/// * `ms  = ∫ |t-ν| t^s dt       = 1/(s+2) - ν/(s+1) + 2ν^{s+2}/((s+1)(s+2))`
/// * `msc = ∫ |t-ν| (1-t)^s dt   = ms(1 - ν)`
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightMoments {
    pub m0: f64,
    pub m1: f64,
    pub m1c: f64,
    pub ms: f64,
    pub msc: f64,
}

pub fn weight_moments(nu: f64, s: f64) -> Result<WeightMoments> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::param("nu", format!("must lie in [0, 1], got {nu}")));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::param("s", format!("must lie in (0, 1], got {s}")));
    }
    let m1 = |v: f64| (2.0 * v.powi(3) - 3.0 * v + 2.0) / 6.0;
    let ms = |v: f64| 1.0 / (s + 2.0) - v / (s + 1.0) + 2.0 * v.powf(s + 2.0) / ((s + 1.0) * (s + 2.0));
    Ok(WeightMoments {
        m0: nu * nu - nu + 0.5,
        m1: m1(nu),
        m1c: m1(1.0 - nu),
        ms: ms(nu),
        msc: ms(1.0 - nu),
    })
}

/// Simpson-type rules on the segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimpsonRule {
    /// Nodes `0, 1/2, 1`, weights `(1, 4, 1)/6`.
    OneThird,
    /// Nodes `0, 1/3, 2/3, 1`, weights `(1, 3, 3, 1)/8`.
    ThreeEighth,
}

impl SimpsonRule {
    pub const ALL: [SimpsonRule; 2] = [SimpsonRule::OneThird, SimpsonRule::ThreeEighth];

    /// `(node, weight)` pairs on `[0, 1]`.
    pub fn nodes(&self) -> &'static [(f64, f64)] {
        match self {
            SimpsonRule::OneThird => &[(0.0, 1.0 / 6.0), (0.5, 4.0 / 6.0), (1.0, 1.0 / 6.0)],
            SimpsonRule::ThreeEighth => &[
                (0.0, 1.0 / 8.0),
                (1.0 / 3.0, 3.0 / 8.0),
                (2.0 / 3.0, 3.0 / 8.0),
                (1.0, 1.0 / 8.0),
            ],
        }
    }

    /// Error-bound constant as an exact fraction: `5/32` and `25/288`.
    pub fn error_constant_fraction(&self) -> (u32, u32) {
        match self {
            SimpsonRule::OneThird => (5, 32),
            SimpsonRule::ThreeEighth => (25, 288),
        }
    }

    pub fn error_constant(&self) -> f64 {
        let (num, den) = self.error_constant_fraction();
        num as f64 / den as f64
    }

    pub fn name(&self) -> &'static str {
        match self {
            SimpsonRule::OneThird => "onethird",
            SimpsonRule::ThreeEighth => "threeeighth",
        }
    }
}

impl std::str::FromStr for SimpsonRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "onethird" | "1/3" => Ok(SimpsonRule::OneThird),
            "threeeighth" | "3/8" => Ok(SimpsonRule::ThreeEighth),
            other => Err(Error::param("rule", format!("unknown Simpson rule {other:?}"))),
        }
    }
}

/// Weighted node sum of `rule` applied to `f` along the segment.
pub fn simpson<T: Real>(
    rule: SimpsonRule,
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
) -> Result<HermitianMatrix<T>> {
    check_pair(a, b)?;
    let values = rule
        .nodes()
        .iter()
        .map(|&(t, w)| Ok((T::lit(w), matrix_function(spec, &a.lerp(b, T::lit(t)))?)))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<(T, &HermitianMatrix<T>)> = values.iter().map(|(w, m)| (*w, m)).collect();
    Ok(HermitianMatrix::combination(&refs))
}

/// `(f(A) + 4 f((A+B)/2) + f(B)) / 6`.
pub fn simpson_13<T: Real>(spec: &FunctionSpec, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    simpson(SimpsonRule::OneThird, spec, a, b)
}

/// `(f(A) + 3 f((2A+B)/3) + 3 f((A+2B)/3) + f(B)) / 8`.
pub fn simpson_38<T: Real>(spec: &FunctionSpec, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
    simpson(SimpsonRule::ThreeEighth, spec, a, b)
}

/// `ν f(A) + (1 - ν) f(B) - ∫ f((1-t)A + tB) dt`, given the integral.
pub fn weighted_endpoint_gap<T: Real>(
    fa: &HermitianMatrix<T>,
    fb: &HermitianMatrix<T>,
    integral: &HermitianMatrix<T>,
    nu: T,
) -> HermitianMatrix<T> {
    HermitianMatrix::combination(&[(nu, fa), (T::one() - nu, fb), (-T::one(), integral)])
}

/// Frobenius norm of the difference between the two sides of
/// `ν f(A) + (1-ν) f(B) - ∫ f(C_t) dt = ∫ (t - ν) Df(C_t)(B - A) dt`,
/// `C_t = (1-t) A + t B`, each side computed by its own quadrature.
pub fn lemma1_residual<T: Real>(
    spec: &FunctionSpec,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    nu: T,
    tol: T,
) -> Result<T> {
    if !(nu >= T::zero() && nu <= T::one()) {
        return Err(Error::param("nu", format!("must lie in [0, 1], got {nu}")));
    }
    let hh = hh_integral(spec, a, b, tol)?;
    let fa = matrix_function(spec, a)?;
    let fb = matrix_function(spec, b)?;
    let lhs = weighted_endpoint_gap(&fa, &fb, &hh.value, nu);

    let diff = b.sub(a);
    let rhs = integrate_unit_interval(a.dim(), tol, |t| {
        let c = a.lerp(b, t);
        let d = spectral_in_domain(spec, &c)?;
        Ok(frechet_from(spec, &d, &diff).scale(t - nu))
    })?;
    Ok(lhs.sub(&rhs.value).frobenius_norm())
}
