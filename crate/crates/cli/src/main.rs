//! `opineq`: perturbation bounds, segment quadrature and seeded verification
//! sweeps for matrix functions.
//!
//! Exit codes: 0 success, 1 an inequality failed unexpectedly, 2 bad input or
//! configuration, 3 domain error, 4 numerical non-convergence.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use opineq::ineq::{self, IneqReport, Mode, SweepConfig};
use opineq::norms::norm_hermitian;
use opineq::opfun::derivative_op_norm;
use opineq::quadrature::{simpson, SimpsonRule};
use opineq::{catalog_get, hh_integral, Error, FunctionSpec, HermitianMatrix, MatrixFile, NormKind};

#[derive(Parser)]
#[command(name = "opineq", version, about = "Norm inequalities for operator monotone functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound |||f(B) - f(A)||| by the derivative norms at the endpoints.
    Bound {
        #[arg(long = "f")]
        function: String,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "op")]
        norms: Vec<NormKind>,
        /// Modes to evaluate; defaults to every mode that applies.
        #[arg(long, value_delimiter = ',')]
        mode: Vec<Mode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reference segment integral against the Simpson-type estimates.
    Quadrature {
        #[arg(long = "f")]
        function: String,
        #[arg(long = "A")]
        a: PathBuf,
        #[arg(long = "B")]
        b: PathBuf,
        #[arg(long, default_value_t = opineq::quadrature::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_delimiter = ',')]
        rule: Vec<SimpsonRule>,
        #[arg(long, value_delimiter = ',', default_value = "op")]
        norms: Vec<NormKind>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded sweep. Flags override values from --config.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_delimiter = ',')]
        functions: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        norms: Option<Vec<NormKind>>,
        #[arg(long = "nu", value_delimiter = ',')]
        nu_grid: Option<Vec<f64>>,
        #[arg(long)]
        direction_samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_domain() {
            3
        } else if e.is_numerical() {
            4
        } else {
            2
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound {
            function,
            a,
            b,
            norms,
            mode,
            out,
        } => cmd_bound(&function, &a, &b, &norms, &mode, out.as_deref()),
        Command::Quadrature {
            function,
            a,
            b,
            tol,
            rule,
            norms,
            out,
        } => cmd_quadrature(&function, &a, &b, tol, &rule, &norms, out.as_deref()),
        Command::Verify {
            config,
            dims,
            samples,
            seed,
            functions,
            norms,
            nu_grid,
            direction_samples,
            out,
        } => load_config(config.as_deref()).and_then(|mut cfg| {
            if let Some(v) = dims {
                cfg.dims = v;
            }
            if let Some(v) = samples {
                cfg.samples = v;
            }
            if let Some(v) = seed {
                cfg.seed = v;
            }
            if let Some(v) = functions {
                cfg.functions = v;
            }
            if let Some(v) = norms {
                cfg.norms = v;
            }
            if let Some(v) = nu_grid {
                cfg.nu_grid = v;
            }
            if let Some(v) = direction_samples {
                cfg.direction_samples = v;
            }
            cmd_verify(&cfg, out.as_deref())
        }),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_matrix(path: &Path) -> CliResult<HermitianMatrix<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let file: MatrixFile =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let m = opineq::ComplexMatrix::from_file(&file)
        .and_then(HermitianMatrix::new)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(m)
}

fn read_pair(a: &Path, b: &Path) -> CliResult<(HermitianMatrix<f64>, HermitianMatrix<f64>)> {
    let (a, b) = (read_matrix(a)?, read_matrix(b)?);
    if a.dim() != b.dim() {
        return Err(Failure::input(format!("A is {0}x{0} but B is {1}x{1}", a.dim(), b.dim())));
    }
    Ok((a, b))
}

fn load_config(path: Option<&Path>) -> CliResult<SweepConfig> {
    let Some(path) = path else {
        return Ok(SweepConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct BoundEntry {
    mode: String,
    rhs: f64,
    margin: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison_margin: Option<f64>,
}

#[derive(Serialize)]
struct NormBounds {
    norm: NormKind,
    lhs: f64,
    diff_norm: f64,
    bounds: Vec<BoundEntry>,
}

#[derive(Serialize)]
struct BoundOutput {
    function: String,
    dim: usize,
    derivative_norm_a: f64,
    derivative_norm_b: f64,
    results: Vec<NormBounds>,
}

fn default_modes(spec: &FunctionSpec) -> Vec<Mode> {
    let mut modes = vec![Mode::Convex, Mode::QuasiConvex];
    if let Some(s) = spec.s_convex_order().filter(|&s| s < 1.0) {
        modes.push(Mode::SConvex(s));
    }
    modes.push(Mode::Refinement);
    modes
}

fn cmd_bound(
    function: &str,
    a: &Path,
    b: &Path,
    norms: &[NormKind],
    modes: &[Mode],
    out: Option<&Path>,
) -> CliResult<u8> {
    let spec = catalog_get(function)?;
    let (a, b) = read_pair(a, b)?;
    for kind in norms {
        kind.validate(a.dim())?;
    }
    let explicit = !modes.is_empty();
    let modes = if explicit { modes.to_vec() } else { default_modes(&spec) };
    let seg = ineq::Segment::new(&spec, &a, &b)?;
    let (pa, pb) = seg.deriv_norms(1);

    let mut results = Vec::new();
    let mut all_pass = true;
    for &kind in norms {
        let mut bounds = Vec::new();
        let lhs = norm_hermitian(&seg.f_b().sub(seg.f_a()), kind)?;
        for &mode in &modes {
            if !explicit && ineq::mode_applicable(&spec, mode, kind).is_err() {
                continue;
            }
            let r = ineq::perturbation_on(&seg, mode, kind)?;
            all_pass &= r.pass;
            bounds.push(BoundEntry {
                mode: mode.to_string(),
                rhs: r.rhs,
                margin: r.margin,
                pass: r.pass,
                comparison_margin: r.comparison_margin,
            });
        }
        results.push(NormBounds {
            norm: kind,
            lhs,
            diff_norm: seg.diff_norm(kind)?,
            bounds,
        });
    }
    emit(
        out,
        &to_json(&BoundOutput {
            function: spec.id().to_string(),
            dim: a.dim(),
            derivative_norm_a: pa,
            derivative_norm_b: pb,
            results,
        }),
    )?;
    Ok(if all_pass { 0 } else { 1 })
}

#[derive(Serialize)]
struct RuleError {
    norm: NormKind,
    error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
}

#[derive(Serialize)]
struct RuleOutput {
    rule: &'static str,
    constant: String,
    constant_value: f64,
    estimate: MatrixFile,
    errors: Vec<RuleError>,
}

#[derive(Serialize)]
struct QuadratureOutput {
    function: String,
    dim: usize,
    tol: f64,
    reference: MatrixFile,
    refinement_levels: usize,
    est_error: f64,
    rules: Vec<RuleOutput>,
}

fn cmd_quadrature(
    function: &str,
    a: &Path,
    b: &Path,
    tol: f64,
    rules: &[SimpsonRule],
    norms: &[NormKind],
    out: Option<&Path>,
) -> CliResult<u8> {
    let spec = catalog_get(function)?;
    let (a, b) = read_pair(a, b)?;
    for kind in norms {
        kind.validate(a.dim())?;
    }
    let rules = if rules.is_empty() { SimpsonRule::ALL.to_vec() } else { rules.to_vec() };
    let reference = hh_integral(&spec, &a, &b, tol)?;
    let max_deriv = derivative_op_norm(&spec, 1, &a)?.max(derivative_op_norm(&spec, 1, &b)?);
    let diff = b.sub(&a);

    let mut within = true;
    let mut outputs = Vec::new();
    for rule in rules {
        let estimate = simpson(rule, &spec, &a, &b)?;
        let mut errors = Vec::new();
        for &kind in norms {
            let error = norm_hermitian(&estimate.sub(&reference.value), kind)?;
            let bound = spec
                .is_operator_monotone()
                .then(|| norm_hermitian(&diff, kind).map(|d| rule.error_constant() * d * max_deriv))
                .transpose()?;
            let ratio = bound.filter(|&b| b > 0.0).map(|b| error / b);
            if let Some(b) = bound {
                within &= ineq::margin_passes(b - error, b);
            }
            errors.push(RuleError {
                norm: kind,
                error,
                bound,
                ratio,
            });
        }
        let (num, den) = rule.error_constant_fraction();
        outputs.push(RuleOutput {
            rule: rule.name(),
            constant: format!("{num}/{den}"),
            constant_value: rule.error_constant(),
            estimate: estimate.to_file(),
            errors,
        });
    }
    emit(
        out,
        &to_json(&QuadratureOutput {
            function: spec.id().to_string(),
            dim: a.dim(),
            tol,
            reference: reference.value.to_file(),
            refinement_levels: reference.refinement_levels,
            est_error: reference.est_error,
            rules: outputs,
        }),
    )?;
    Ok(if within { 0 } else { 1 })
}

fn report_array(reports: &[IneqReport]) -> String {
    let mut s = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        s.push_str(&serde_json::to_string(r).expect("serializable"));
        s.push_str(if i + 1 < reports.len() { ",\n" } else { "\n" });
    }
    s.push_str("]\n");
    s
}

fn cmd_verify(cfg: &SweepConfig, out: Option<&Path>) -> CliResult<u8> {
    let reports = ineq::run_sweep(cfg).map_err(|e| Failure::input(e.to_string()))?;
    let summary = ineq::summarize(&reports);
    let text = report_array(&reports);
    match out {
        Some(_) => {
            emit(out, &text)?;
            println!("{summary}");
        }
        None => {
            emit(None, &text)?;
            eprintln!("{summary}");
        }
    }
    Ok(if summary.unexpected_fail == 0 { 0 } else { 1 })
}
