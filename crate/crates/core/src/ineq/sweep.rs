use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcat::{catalog_get, product, FunctionSpec};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::norms::NormKind;
use crate::quadrature::SimpsonRule;
use crate::random::{derive_seed, random_complex, random_pd};

use super::checks::*;
use super::{CommutatorVariant, IneqReport, Mode, Outcome, Witness};

/// Parameters of a seeded verification sweep.
///
/// Every `(dim, sample)` pair draws its own `A`, `B`, `X` from a seed derived
/// from `(seed, dim, sample)`, so results do not depend on thread scheduling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub functions: Vec<String>,
    pub norms: Vec<NormKind>,
    pub nu_grid: Vec<f64>,
    pub spectrum_range: (f64, f64),
    /// Direction tuples per sampled Fréchet-derivative norm.
    pub direction_samples: usize,
    /// Exponents for the power commutator bound.
    pub r_grid: Vec<f64>,
    /// Exponents for the Heinz-power and root commutator bounds.
    pub alpha_grid: Vec<f64>,
    /// Orders used in s-convex mode (filtered by each function's known order).
    pub s_grid: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 5, 6],
            samples: 100,
            seed: 42,
            functions: vec!["pow:0.5".into(), "log".into()],
            norms: vec![
                NormKind::Operator,
                NormKind::Trace,
                NormKind::Frobenius,
                NormKind::Schatten(3.0),
                NormKind::KyFan(2),
            ],
            nu_grid: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            spectrum_range: (0.1, 10.0),
            direction_samples: 50,
            r_grid: vec![0.3, 0.5, 0.9],
            alpha_grid: vec![1.0, 1.5, 2.0],
            s_grid: vec![0.5],
        }
    }
}

fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        Err(Error::param(name, "must not be empty"))
    } else {
        Ok(())
    }
}

impl SweepConfig {
    /// Checks ranges and resolves function ids.
    pub fn validate(&self) -> Result<Vec<FunctionSpec>> {
        nonempty("dims", &self.dims)?;
        nonempty("functions", &self.functions)?;
        nonempty("norms", &self.norms)?;
        nonempty("nu_grid", &self.nu_grid)?;
        if self.samples == 0 {
            return Err(Error::param("samples", "must be >= 1"));
        }
        if self.direction_samples == 0 {
            return Err(Error::param("direction_samples", "must be >= 1"));
        }
        if self.dims.contains(&0) {
            return Err(Error::param("dims", "dimensions must be >= 1"));
        }
        let min_dim = *self.dims.iter().min().expect("non-empty");
        for kind in &self.norms {
            kind.validate(min_dim)?;
        }
        if let Some(nu) = self.nu_grid.iter().find(|nu| !(0.0..=1.0).contains(*nu)) {
            return Err(Error::param("nu_grid", format!("{nu} is outside [0, 1]")));
        }
        let (lo, hi) = self.spectrum_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::param("spectrum_range", format!("need 0 < lo <= hi < inf, got ({lo}, {hi})")));
        }
        if let Some(r) = self.r_grid.iter().find(|r| !(**r > 0.0 && **r <= 1.0)) {
            return Err(Error::param("r_grid", format!("{r} is outside (0, 1]")));
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(**a >= 1.0 && a.is_finite())) {
            return Err(Error::param("alpha_grid", format!("{a} is below 1")));
        }
        if let Some(s) = self.s_grid.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
            return Err(Error::param("s_grid", format!("{s} is outside (0, 1]")));
        }
        self.functions.iter().map(|id| catalog_get(id)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub pass: usize,
    pub expected_fail: usize,
    pub unexpected_fail: usize,
}

impl fmt::Display for SweepSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total={} pass={} expected-fail={} unexpected-fail={}",
            self.total, self.pass, self.expected_fail, self.unexpected_fail
        )
    }
}

pub fn summarize(reports: &[IneqReport]) -> SweepSummary {
    let mut s = SweepSummary {
        total: reports.len(),
        ..SweepSummary::default()
    };
    for r in reports {
        match r.outcome() {
            Outcome::Pass => s.pass += 1,
            Outcome::ExpectedFail => s.expected_fail += 1,
            Outcome::UnexpectedFail => s.unexpected_fail += 1,
        }
    }
    s
}

/// Runs every applicable checker over the configured grid.
///
/// Checker errors become failing reports with `error` set. If
/// `square_minus_one` is among the functions, the quasi-convexity
/// counterexample is appended as an expected failure.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<IneqReport>> {
    let specs = config.validate()?;
    let tasks: Vec<(usize, usize)> = config
        .dims
        .iter()
        .flat_map(|&d| (0..config.samples).map(move |s| (d, s)))
        .collect();
    let mut reports: Vec<IneqReport> = tasks
        .par_iter()
        .map(|&(dim, sample)| Task::new(config, &specs, dim, sample).run())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    if config.functions.iter().any(|id| id.trim() == "square_minus_one") {
        reports.push(quasiconvex_counterexample(config.dims[0])?);
    }
    Ok(reports)
}

struct Task<'c> {
    config: &'c SweepConfig,
    specs: &'c [FunctionSpec],
    dim: usize,
    sample: usize,
    seed: u64,
    out: Vec<IneqReport>,
}

impl<'c> Task<'c> {
    fn new(config: &'c SweepConfig, specs: &'c [FunctionSpec], dim: usize, sample: usize) -> Self {
        Self {
            config,
            specs,
            dim,
            sample,
            seed: derive_seed(config.seed, &[dim as u64, sample as u64]),
            out: Vec::new(),
        }
    }

    fn record(&mut self, check_id: &str, fallback: impl FnOnce() -> Witness, result: Result<IneqReport>) {
        let mut report = match result {
            Ok(r) => r,
            Err(e) => IneqReport::failed(check_id, fallback(), &e),
        };
        report.witness.seed = Some(self.seed);
        report.witness.sample = Some(self.sample);
        self.out.push(report);
    }

    fn modes(&self, refinement: bool) -> Vec<Mode> {
        let mut modes = vec![Mode::Convex, Mode::QuasiConvex];
        modes.extend(self.config.s_grid.iter().map(|&s| Mode::SConvex(s)));
        if refinement {
            modes.push(Mode::Refinement);
        }
        modes
    }

    fn run(mut self) -> Vec<IneqReport> {
        let dim = self.dim;
        let range = self.config.spectrum_range;
        let drawn = random_pd::<f64>(dim, range, derive_seed(self.seed, &[1]))
            .and_then(|a| Ok((a, random_pd::<f64>(dim, range, derive_seed(self.seed, &[2]))?)));
        let (a, b) = match drawn {
            Ok(pair) => pair,
            Err(e) => {
                self.record("sample", || Witness::new(dim), Err(e));
                return self.out;
            }
        };
        let x = random_complex::<f64>(dim, derive_seed(self.seed, &[3]));

        for (fi, spec) in self.specs.iter().enumerate() {
            self.single_function(fi, spec, &a, &b);
        }
        let monotone: Vec<&FunctionSpec> = self.specs.iter().filter(|s| s.is_operator_monotone()).collect();
        for (i, f) in monotone.iter().enumerate() {
            for g in &monotone[i + 1..] {
                self.function_pair(f, g, &a, &b, &x);
            }
        }
        self.commutators(&monotone, &a, &b, &x);
        self.out
    }

    fn single_function(&mut self, fi: usize, spec: &FunctionSpec, a: &HermitianMatrix<f64>, b: &HermitianMatrix<f64>) {
        let dim = self.dim;
        let cfg = self.config;
        let base = || Witness::new(dim).functions([spec.id()]);
        let monotone = spec.is_operator_monotone();

        if monotone {
            for &nu in &cfg.nu_grid {
                for n in 1..=3 {
                    let r = check_quasiconvex_fn_norm(spec, a, b, nu, n, false);
                    self.record(QUASICONVEX_FN_NORM, || base().nu(nu).order(n), r);
                }
            }
            for n in 1..=2 {
                let dir_seed = derive_seed(self.seed, &[4, fi as u64, n as u64]);
                for &kind in &cfg.norms {
                    let r = check_frechet_norm_bound(spec, a, n, kind, cfg.direction_samples, dir_seed);
                    self.record(FRECHET_NORM_BOUND, || base().norm(kind).order(n), r);
                }
            }
        }

        let seg = match Segment::new(spec, a, b) {
            Ok(seg) => seg,
            Err(e) => {
                self.record(HH_WEIGHTED, base, Err(e));
                return;
            }
        };
        for &kind in &cfg.norms {
            for mode in self.modes(false) {
                if mode_applicable(spec, mode, kind).is_err() {
                    continue;
                }
                for &nu in &cfg.nu_grid {
                    let r = hh_weighted_on(&seg, nu, mode, kind);
                    self.record(HH_WEIGHTED, || base().norm(kind).nu(nu).mode(mode), r);
                }
            }
            for mode in self.modes(true) {
                if mode_applicable(spec, mode, kind).is_err() {
                    continue;
                }
                let r = perturbation_on(&seg, mode, kind);
                self.record(PERTURBATION, || base().norm(kind).mode(mode), r);
            }
            if monotone {
                for rule in SimpsonRule::ALL {
                    let r = simpson_on(&seg, rule, kind);
                    self.record(SIMPSON, || base().norm(kind).variant(rule.name()), r);
                }
            }
        }
    }

    fn function_pair(
        &mut self,
        f: &FunctionSpec,
        g: &FunctionSpec,
        a: &HermitianMatrix<f64>,
        b: &HermitianMatrix<f64>,
        x: &ComplexMatrix<f64>,
    ) {
        let dim = self.dim;
        let cfg = self.config;
        let base = || Witness::new(dim).functions([f.id(), g.id()]);
        let fg = product(f.clone(), g.clone());
        let segs = Segment::new(f, a, b)
            .and_then(|sf| Ok((sf, Segment::new(g, a, b)?, Segment::new(&fg, a, b)?)));
        let (sf, sg, sfg) = match segs {
            Ok(s) => s,
            Err(e) => {
                self.record(PRODUCT_HH, base, Err(e));
                return;
            }
        };
        for &kind in &cfg.norms {
            for &nu in &cfg.nu_grid {
                let r = product_hh_on(&sf, &sg, &sfg, nu, kind);
                self.record(PRODUCT_HH, || base().norm(kind).nu(nu), r);
            }
            let r = product_perturbation_on(&sf, &sg, kind);
            self.record(PRODUCT_PERTURBATION, || base().norm(kind), r);
            let r = check_commutator_bounds(Some(f), Some(g), a, b, x, kind, CommutatorVariant::ProductCommutator);
            self.record(COMMUTATOR, || base().norm(kind).variant(CommutatorVariant::ProductCommutator), r);
        }
    }

    fn commutators(
        &mut self,
        monotone: &[&FunctionSpec],
        a: &HermitianMatrix<f64>,
        b: &HermitianMatrix<f64>,
        x: &ComplexMatrix<f64>,
    ) {
        let dim = self.dim;
        let cfg = self.config;
        let inputs = match CommutatorInputs::new(a, b, x) {
            Ok(i) => i,
            Err(e) => {
                self.record(COMMUTATOR, || Witness::new(dim), Err(e));
                return;
            }
        };
        let mut variants: Vec<(Option<&FunctionSpec>, CommutatorVariant)> = Vec::new();
        for f in monotone {
            variants.push((Some(*f), CommutatorVariant::MonotoneCommutator));
        }
        for &nu in &cfg.nu_grid {
            variants.push((None, CommutatorVariant::Heinz { nu }));
        }
        for &r in &cfg.r_grid {
            variants.push((None, CommutatorVariant::PowerCommutator { r }));
        }
        for &alpha in &cfg.alpha_grid {
            for &nu in &cfg.nu_grid {
                variants.push((None, CommutatorVariant::HeinzPower { alpha, nu }));
            }
            variants.push((None, CommutatorVariant::RootCommutator { alpha }));
        }
        for &kind in &cfg.norms {
            for &(f, variant) in &variants {
                let r = commutator_on(&inputs, f, None, kind, variant);
                let fallback = || {
                    let w = Witness::new(dim).norm(kind).variant(variant);
                    match f {
                        Some(f) => w.functions([f.id()]),
                        None => w,
                    }
                };
                self.record(COMMUTATOR, fallback, r);
            }
        }
    }
}
