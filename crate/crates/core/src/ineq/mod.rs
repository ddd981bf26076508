//! Numerical checkers for the norm inequalities satisfied by operator
//! monotone functions, and a seeded sweep that runs all of them.
//!
//! Every checker evaluates both sides of one inequality and returns an
//! [`IneqReport`]. A report passes when `rhs - lhs >= -1e-8 (1 + |rhs|)`.

mod checks;
mod sweep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::norms::NormKind;

pub use checks::*;
pub use sweep::{run_sweep, summarize, SweepConfig, SweepSummary};

/// Relative slack on the margin: `pass ⇔ margin >= -MARGIN_TOL (1 + |rhs|)`.
pub const MARGIN_TOL: f64 = 1e-8;

/// Inputs that identify one evaluation. Unused fields are omitted from JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<usize>,
    pub dim: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub functions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub norm: Option<NormKind>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub direction_samples: Option<usize>,
}

impl Witness {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            ..Self::default()
        }
    }

    pub fn functions<I: IntoIterator<Item = S>, S: Into<String>>(mut self, ids: I) -> Self {
        self.functions = ids.into_iter().map(Into::into).collect();
        self
    }

    pub fn norm(mut self, kind: NormKind) -> Self {
        self.norm = Some(kind);
        self
    }

    pub fn nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn order(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn mode(mut self, mode: impl fmt::Display) -> Self {
        self.mode = Some(mode.to_string());
        self
    }

    pub fn variant(mut self, variant: impl fmt::Display) -> Self {
        self.variant = Some(variant.to_string());
        self
    }

    pub fn seeded(mut self, seed: u64, sample: usize) -> Self {
        self.seed = Some(seed);
        self.sample = Some(sample);
        self
    }
}

/// One inequality evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IneqReport {
    pub check_id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    pub pass: bool,
    /// Set for counterexamples that are supposed to violate the inequality.
    #[serde(default)]
    pub expected_fail: bool,
    pub witness: Witness,
    /// Secondary margin for checks that compare two bounds (refinement mode).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comparison_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl IneqReport {
    pub fn new(check_id: impl Into<String>, lhs: f64, rhs: f64, witness: Witness) -> Self {
        let margin = rhs - lhs;
        Self {
            check_id: check_id.into(),
            lhs,
            rhs,
            margin,
            pass: margin_passes(margin, rhs),
            expected_fail: false,
            witness,
            comparison_margin: None,
            error: None,
        }
    }

    /// Report for a checker that errored inside a sweep.
    pub fn failed(check_id: impl Into<String>, witness: Witness, err: &Error) -> Self {
        Self {
            check_id: check_id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            pass: false,
            expected_fail: false,
            witness,
            comparison_margin: None,
            error: Some(err.to_string()),
        }
    }

    pub fn expecting_failure(mut self) -> Self {
        self.expected_fail = true;
        self
    }

    /// `lhs / rhs` when `rhs > 0`.
    pub fn ratio(&self) -> Option<f64> {
        (self.rhs > 0.0).then(|| self.lhs / self.rhs)
    }

    pub fn outcome(&self) -> Outcome {
        match (self.pass, self.expected_fail) {
            (true, false) => Outcome::Pass,
            (false, true) => Outcome::ExpectedFail,
            _ => Outcome::UnexpectedFail,
        }
    }
}

pub fn margin_passes(margin: f64, rhs: f64) -> bool {
    margin >= -MARGIN_TOL * (1.0 + rhs.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    ExpectedFail,
    /// A violated inequality, a checker error, or a counterexample that held.
    UnexpectedFail,
}

/// How the endpoint derivative norms enter a bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// `||f'(·)||` convex.
    Convex,
    /// `||f'(·)||` quasi-convex.
    QuasiConvex,
    /// `||f'(·)||` s-convex in the second sense.
    SConvex(f64),
    /// Perturbation bound compared against `f'(a) |||B - A|||`.
    Refinement,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Convex => write!(f, "convex"),
            Mode::QuasiConvex => write!(f, "quasiconvex"),
            Mode::SConvex(s) => write!(f, "sconvex:{s}"),
            Mode::Refinement => write!(f, "refinement"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(Mode::Convex),
            "quasiconvex" => Ok(Mode::QuasiConvex),
            "refinement" => Ok(Mode::Refinement),
            other => {
                let s = other
                    .strip_prefix("sconvex:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .ok_or_else(|| Error::param("mode", format!("unknown mode {other:?}")))?;
                if !(s > 0.0 && s <= 1.0) {
                    return Err(Error::param("mode", format!("s must lie in (0, 1], got {s}")));
                }
                Ok(Mode::SConvex(s))
            }
        }
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Commutator-type inequality to evaluate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CommutatorVariant {
    /// `|||f(A)g(A)X - Xf(B)g(B)||| <= |||AX - XB||| [..]`
    ProductCommutator,
    /// `|||f(A)X - Xf(B)||| <= max ||f'|| |||AX - XB|||`
    MonotoneCommutator,
    /// `|||A^ν X B^{1-ν} - A^{1-ν} X B^ν||| <= |2ν - 1| |||AX - XB|||`
    Heinz { nu: f64 },
    /// `|||A^r X - X B^r||| <= r max{||A^{r-1}||, ||B^{r-1}||} |||AX - XB|||`
    PowerCommutator { r: f64 },
    /// `α |||A^ν X B^{1-ν} - A^{1-ν} X B^ν||| <= |2ν-1| max{||A^{1-α}||, ||B^{1-α}||} |||A^α X - X B^α|||`
    HeinzPower { alpha: f64, nu: f64 },
    /// `|||AX - XB||| <= (1/α) max{||A^{1-α}||, ||B^{1-α}||} |||A^α X - X B^α|||`
    RootCommutator { alpha: f64 },
}

impl fmt::Display for CommutatorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommutatorVariant::ProductCommutator => write!(f, "t3"),
            CommutatorVariant::MonotoneCommutator => write!(f, "t4"),
            CommutatorVariant::Heinz { nu } => write!(f, "heinz:{nu}"),
            CommutatorVariant::PowerCommutator { r } => write!(f, "kapil_r:{r}"),
            CommutatorVariant::HeinzPower { alpha, nu } => write!(f, "kapil_alpha:{alpha}:{nu}"),
            CommutatorVariant::RootCommutator { alpha } => write!(f, "eq420:{alpha}"),
        }
    }
}
