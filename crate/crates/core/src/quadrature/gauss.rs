//! Gauss-Legendre rules and an adaptive scalar integrator built on them.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Points per panel of every composite rule in the crate.
pub const PANEL_POINTS: usize = 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// `n`-point rule; nodes from Newton iteration on `P_n` in `f64`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one point");
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self {
            nodes: nodes.into_iter().map(T::lit).collect(),
            weights: weights.into_iter().map(T::lit).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::half();
        let mid = (a + b) * T::half();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, w * half))
    }

    pub fn integrate(&self, a: T, b: T, mut f: impl FnMut(T) -> T) -> T {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`adaptive`].
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveResult<T> {
    pub value: T,
    /// Sum of `|coarse - fine|` over accepted panels.
    pub est_error: T,
    pub panels: usize,
}

const MAX_DEPTH: usize = 200;
const MAX_PANELS: usize = 100_000;

/// Adaptive bisection with 16-point panels: a panel is accepted when its
/// estimate agrees with the sum over its two halves to within
/// `rel_tol * |I_0| + abs_tol`, where `I_0` is the single-panel estimate of the
/// whole interval. Handles integrable endpoint singularities (nodes never hit
/// the endpoints).
pub fn adaptive<T: Real>(
    a: T,
    b: T,
    rel_tol: T,
    abs_tol: T,
    f: impl Fn(T) -> T,
) -> Result<AdaptiveResult<T>> {
    let rule = GaussLegendre::<T>::new(PANEL_POINTS);
    let whole = rule.integrate(a, b, &f);
    let tol = rel_tol * whole.abs() + abs_tol;

    let mut stack = vec![(a, b, whole, 0usize)];
    let mut value = T::zero();
    let mut est_error = T::zero();
    let mut panels = 0usize;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = (lo + hi) * T::half();
        let left = rule.integrate(lo, mid, &f);
        let right = rule.integrate(mid, hi, &f);
        let fine = left + right;
        let diff = (coarse - fine).abs();
        if !fine.is_finite() {
            return Err(Error::QuadratureNonConvergence {
                panels,
                est_error: f64::INFINITY,
                tol: tol.to_f64_lossy(),
            });
        }
        if diff <= tol || depth >= MAX_DEPTH || mid <= lo || mid >= hi {
            if diff > tol {
                return Err(Error::QuadratureNonConvergence {
                    panels,
                    est_error: diff.to_f64_lossy(),
                    tol: tol.to_f64_lossy(),
                });
            }
            value += fine;
            est_error += diff;
            panels += 2;
            if panels > MAX_PANELS {
                return Err(Error::QuadratureNonConvergence {
                    panels,
                    est_error: est_error.to_f64_lossy(),
                    tol: tol.to_f64_lossy(),
                });
            }
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(AdaptiveResult {
        value,
        est_error,
        panels,
    })
}
