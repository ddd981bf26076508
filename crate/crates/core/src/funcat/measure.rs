use crate::error::{Error, Result};
use crate::funcat::factorial;
use crate::quadrature::gauss::adaptive;

/// Relative tolerance of the half-line integrals.
pub const MEASURE_REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Density {
    /// `coef · λ^exponent`
    Power { coef: f64, exponent: f64 },
    /// Lebesgue measure on `(0, ∞)`.
    Unit,
}

/// Linear coefficient `β ≥ 0` and absolutely continuous measure `dμ` of an
/// operator monotone function, so that
/// `f'(t) = β + ∫_0^∞ (λ + t)^{-2} dμ(λ)`.
///
/// The additive constant of the representation is not carried; it never
/// enters derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepresentationMeasure {
    beta: f64,
    density: Density,
}

impl RepresentationMeasure {
    /// `t^r`, `0 < r < 1`: `β = 0`, `dμ = (sin rπ / π) λ^r dλ`.
    pub fn power(r: f64) -> Self {
        Self {
            beta: 0.0,
            density: Density::Power {
                coef: (r * std::f64::consts::PI).sin() / std::f64::consts::PI,
                exponent: r,
            },
        }
    }

    /// `log t`: `β = 0`, `dμ = dλ`.
    pub fn log() -> Self {
        Self {
            beta: 0.0,
            density: Density::Unit,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn density(&self, lambda: f64) -> f64 {
        match self.density {
            Density::Power { coef, exponent } => coef * lambda.powf(exponent),
            Density::Unit => 1.0,
        }
    }

    /// `∫_0^∞ (λ + t)^{-(n+1)} dμ(λ)` for `n >= 1`.
    ///
    /// Uses `λ = u / (1 - u)` on `(0, 1)`, integrated in the complementary
    /// variable `w = 1 - u` so that the endpoint `u → 1` (`λ → ∞`) stays
    /// resolvable by bisection: `λ = (1 - w) / w`, `dλ = dw / w²`.
    pub fn resolvent_moment(&self, n: usize, t: f64) -> Result<f64> {
        if n == 0 {
            return Err(Error::param("n", "moment order must be >= 1"));
        }
        if t.is_nan() || t <= 0.0 {
            return Err(Error::param("t", format!("must be positive, got {t}")));
        }
        let power = -((n + 1) as f64);
        let integrand = |w: f64| {
            if w <= 0.0 {
                return 0.0;
            }
            let lambda = (1.0 - w) / w;
            // (λ + t)^{-(n+1)} / w² = w^{n-1} / (1 - w + t w)^{n+1}
            let base = 1.0 - w + t * w;
            self.density(lambda) * w.powi(n as i32 - 1) * base.powf(power)
        };
        Ok(adaptive(0.0, 1.0, MEASURE_REL_TOL, 0.0, integrand)?.value)
    }

    /// `f^{(n)}(t) = (-1)^{n+1} n! ∫ (λ + t)^{-n-1} dμ(λ)` (plus `β` when `n = 1`).
    pub fn derivative(&self, n: usize, t: f64) -> Result<f64> {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let linear = if n == 1 { self.beta } else { 0.0 };
        Ok(linear + sign * factorial(n) * self.resolvent_moment(n, t)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcat::catalog_get;
    use approx::assert_relative_eq;

    #[test]
    fn sqrt_measure_at_four() {
        let m = catalog_get("pow:0.5").unwrap().measure().copied().unwrap();
        assert_relative_eq!(m.derivative(1, 4.0).unwrap(), 0.25, max_relative = 1e-7);
    }

    #[test]
    fn density_non_negative() {
        for r in [0.1, 0.5, 0.9] {
            let m = RepresentationMeasure::power(r);
            for lambda in [1e-6, 0.5, 3.0, 1e6] {
                assert!(m.density(lambda) >= 0.0);
            }
        }
        assert!(RepresentationMeasure::log().beta() >= 0.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        let m = RepresentationMeasure::log();
        assert!(m.resolvent_moment(0, 1.0).is_err());
        assert!(m.resolvent_moment(1, 0.0).is_err());
    }
}
