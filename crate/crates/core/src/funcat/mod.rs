//! Catalog of scalar functions: operator monotone functions with their
//! derivatives and representation measures, plus the non-monotone functions
//! used as contrasts and counterexamples.
//!
//! Ids: `pow:<r>`, `log`, `exp`, `square`, `square_minus_one`,
//! `product:<a>:<b>`.

pub(crate) mod divided;
mod measure;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use divided::{divided_difference, loewner_matrix, CONFLUENT_DELTA};
pub use measure::{RepresentationMeasure, MEASURE_REL_TOL};

/// Highest derivative order the catalog is validated for.
pub const MAX_DERIV_ORDER: usize = 4;

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub const POSITIVE: Domain = Domain {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    pub const REAL: Domain = Domain {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    fn intersect(&self, other: &Domain) -> Domain {
        Domain {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Whether `||D f(A)|| = ||f'(A)||` holds for all positive `A` (class D1),
/// as established in the literature the catalog relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D1Status {
    Member,
    NonMember,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    Pow(f64),
    Log,
    Exp,
    Square,
    SquareMinusOne,
    Product(Box<FunctionSpec>, Box<FunctionSpec>),
}

/// A catalog entry. Evaluation is generic over the scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionSpec {
    id: String,
    kind: FunctionKind,
    domain: Domain,
    operator_monotone: bool,
    s_convex_order: Option<f64>,
    d1: D1Status,
    measure: Option<RepresentationMeasure>,
}

impl FunctionSpec {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_operator_monotone(&self) -> bool {
        self.operator_monotone
    }

    /// Largest `s` in `(0, 1]` for which `A ↦ ||f'(A)||` is known to be
    /// s-convex on positive definite matrices (`1` means convex).
    pub fn s_convex_order(&self) -> Option<f64> {
        self.s_convex_order
    }

    pub fn d1_status(&self) -> D1Status {
        self.d1
    }

    pub fn measure(&self) -> Option<&RepresentationMeasure> {
        self.measure.as_ref()
    }

    pub fn in_domain(&self, t: f64) -> bool {
        self.domain.contains(t)
    }

    pub(crate) fn check_domain(&self, t: f64) -> Result<()> {
        if self.in_domain(t) {
            Ok(())
        } else {
            Err(Error::Domain {
                function: self.id.clone(),
                point: t,
                domain: self.domain.to_string(),
            })
        }
    }

    pub fn eval<T: Real>(&self, t: T) -> T {
        self.deriv(0, t)
    }

    /// `f^{(n)}(t)`. Closed forms are valid for every `n`; the catalog is
    /// validated up to [`MAX_DERIV_ORDER`].
    pub fn deriv<T: Real>(&self, n: usize, t: T) -> T {
        match &self.kind {
            FunctionKind::Pow(r) => {
                let mut coef = T::one();
                for k in 0..n {
                    coef *= T::lit(r - k as f64);
                }
                if coef.is_zero() {
                    return T::zero();
                }
                let e = r - n as f64;
                let p = if e == e.round() && e.abs() <= 64.0 {
                    t.powi(e as i32)
                } else {
                    t.powf(T::lit(e))
                };
                coef * p
            }
            FunctionKind::Log => {
                if n == 0 {
                    t.ln()
                } else {
                    let sign = if n % 2 == 1 { T::one() } else { -T::one() };
                    sign * T::lit(factorial(n - 1)) / t.powi(n as i32)
                }
            }
            FunctionKind::Exp => t.exp(),
            FunctionKind::Square | FunctionKind::SquareMinusOne => match n {
                0 => {
                    let sq = t * t;
                    if matches!(self.kind, FunctionKind::SquareMinusOne) {
                        sq - T::one()
                    } else {
                        sq
                    }
                }
                1 => T::two() * t,
                2 => T::two(),
                _ => T::zero(),
            },
            FunctionKind::Product(f, g) => (0..=n)
                .map(|k| T::lit(binomial(n, k)) * f.deriv(k, t) * g.deriv(n - k, t))
                .sum(),
        }
    }

    /// `f^{(n)}(t) / n!`, the confluent divided difference.
    pub fn taylor_coefficient<T: Real>(&self, n: usize, t: T) -> T {
        self.deriv(n, t) / T::lit(factorial(n))
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        catalog_get(s)
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn pow_spec(r: f64) -> FunctionSpec {
    let operator_monotone = (0.0..=1.0).contains(&r);
    // ||f'(A)|| = |r| ||A^{r-1}|| is convex unless r - 1 lies in (0, 1),
    // where it is (r - 1)-convex.
    let s_convex_order = if r > 1.0 && r < 2.0 { Some(r - 1.0) } else { Some(1.0) };
    let d1 = if r <= 1.0 || r >= 2.0 {
        D1Status::Member
    } else if r < std::f64::consts::SQRT_2 {
        D1Status::NonMember
    } else {
        D1Status::Unknown
    };
    let measure = (r > 0.0 && r < 1.0).then(|| RepresentationMeasure::power(r));
    FunctionSpec {
        id: format!("pow:{r}"),
        kind: FunctionKind::Pow(r),
        domain: Domain::POSITIVE,
        operator_monotone,
        s_convex_order,
        d1,
        measure,
    }
}

fn simple(id: &str, kind: FunctionKind, domain: Domain) -> FunctionSpec {
    let operator_monotone = matches!(kind, FunctionKind::Log);
    let measure = operator_monotone.then(RepresentationMeasure::log);
    FunctionSpec {
        id: id.to_string(),
        kind,
        domain,
        operator_monotone,
        s_convex_order: Some(1.0),
        d1: D1Status::Member,
        measure,
    }
}

/// Looks up a catalog entry by id.
pub fn catalog_get(id: &str) -> Result<FunctionSpec> {
    let id = id.trim();
    match id {
        "log" => return Ok(simple("log", FunctionKind::Log, Domain::POSITIVE)),
        "exp" => return Ok(simple("exp", FunctionKind::Exp, Domain::REAL)),
        "square" => return Ok(simple("square", FunctionKind::Square, Domain::REAL)),
        "square_minus_one" => {
            return Ok(simple("square_minus_one", FunctionKind::SquareMinusOne, Domain::REAL))
        }
        _ => {}
    }
    if let Some(r) = id.strip_prefix("pow:") {
        let r: f64 = r
            .parse()
            .map_err(|_| Error::param("pow exponent", format!("cannot parse {r:?} in {id:?}")))?;
        if !r.is_finite() {
            return Err(Error::param("pow exponent", "must be finite"));
        }
        return Ok(pow_spec(r));
    }
    if let Some(rest) = id.strip_prefix("product:") {
        // factor ids may themselves contain ':'; take the first split that parses
        for (i, _) in rest.match_indices(':') {
            let (a, b) = (&rest[..i], &rest[i + 1..]);
            if let (Ok(f), Ok(g)) = (catalog_get(a), catalog_get(b)) {
                return Ok(product(f, g));
            }
        }
        return Err(Error::param("product", format!("cannot split {rest:?} into two catalog ids")));
    }
    Err(Error::UnknownFunction(id.to_string()))
}

/// Pointwise product `f·g`, derivatives by the Leibniz rule.
pub fn product(f: FunctionSpec, g: FunctionSpec) -> FunctionSpec {
    FunctionSpec {
        id: format!("product:{}:{}", f.id, g.id),
        domain: f.domain.intersect(&g.domain),
        kind: FunctionKind::Product(Box::new(f), Box::new(g)),
        operator_monotone: false,
        s_convex_order: None,
        d1: D1Status::Unknown,
        measure: None,
    }
}

/// Parses a comma-separated id list. Commas never occur inside ids.
pub fn parse_function_list(s: &str) -> Result<Vec<FunctionSpec>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(catalog_get).collect()
}
