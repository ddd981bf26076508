use crate::error::{Error, Result};
use crate::funcat::FunctionSpec;
use crate::scalar::Real;

/// Relative spread below which a cluster of points is treated as confluent.
pub const CONFLUENT_DELTA: f64 = 1e-7;

/// Highest order supported by [`divided_difference`].
pub const MAX_DD_ORDER: usize = 3;

/// Divided difference `f[x_0, ..., x_n]` for `n <= 3`.
///
/// Points are sorted first (the divided difference is symmetric), then the
/// standard recursion runs on contiguous sub-clusters. A sub-cluster whose
/// spread is below `δ (1 + max |x_i|)` contributes `f^{(k)}(midpoint) / k!`.
pub fn divided_difference<T: Real>(spec: &FunctionSpec, points: &[T]) -> Result<T> {
    if points.is_empty() || points.len() > MAX_DD_ORDER + 1 {
        return Err(Error::param(
            "points",
            format!("need between 1 and {} points, got {}", MAX_DD_ORDER + 1, points.len()),
        ));
    }
    for &x in points {
        spec.check_domain(x.to_f64_lossy())?;
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
    Ok(dd_sorted(spec, &sorted))
}

/// Recursion on ascending points; no domain checks.
pub(crate) fn dd_sorted<T: Real>(spec: &FunctionSpec, xs: &[T]) -> T {
    let n = xs.len() - 1;
    if n == 0 {
        return spec.eval(xs[0]);
    }
    let lo = xs[0];
    let hi = xs[n];
    let scale = T::one() + lo.abs().max(hi.abs());
    if hi - lo < T::lit(CONFLUENT_DELTA) * scale {
        let mid = xs.iter().copied().sum::<T>() / T::lit((n + 1) as f64);
        return spec.taylor_coefficient(n, mid);
    }
    (dd_sorted(spec, &xs[1..]) - dd_sorted(spec, &xs[..n])) / (hi - lo)
}

/// First divided difference `f[λ_i, λ_j]` for a pair, no domain checks.
#[inline]
pub(crate) fn dd1<T: Real>(spec: &FunctionSpec, a: T, b: T) -> T {
    if a <= b {
        dd_sorted(spec, &[a, b])
    } else {
        dd_sorted(spec, &[b, a])
    }
}

/// Second divided difference, no domain checks.
pub(crate) fn dd2<T: Real>(spec: &FunctionSpec, a: T, b: T, c: T) -> T {
    let mut xs = [a, b, c];
    xs.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    dd_sorted(spec, &xs)
}

/// Third divided difference, no domain checks.
pub(crate) fn dd3<T: Real>(spec: &FunctionSpec, a: T, b: T, c: T, d: T) -> T {
    let mut xs = [a, b, c, d];
    xs.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    dd_sorted(spec, &xs)
}

/// Loewner matrix `[f[λ_i, λ_j]]` (row-major, real, symmetric) with `f'(λ_i)`
/// on the diagonal.
pub fn loewner_matrix<T: Real>(spec: &FunctionSpec, eigenvalues: &[T]) -> Result<Vec<T>> {
    for &x in eigenvalues {
        spec.check_domain(x.to_f64_lossy())?;
    }
    let n = eigenvalues.len();
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let v = dd1(spec, eigenvalues[i], eigenvalues[j]);
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    Ok(out)
}
