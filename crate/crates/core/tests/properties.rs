use num_complex::Complex;
use proptest::prelude::*;

use opineq::eig::unitarity_defect;
use opineq::funcat::{catalog_get, divided_difference};
use opineq::ineq::{self, margin_passes, CommutatorVariant, Mode};
use opineq::norms::{norm_hermitian, op_norm};
use opineq::opfun::{derivative_op_norm, frechet_derivative, frechet_derivative_n, matrix_function};
use opineq::quadrature::{hh_integral, weight_moments};
use opineq::random::{random_complex, random_hermitian, random_pd, random_unitary, rng_from_seed};
use opineq::{eig_hermitian, norm, ComplexMatrix, HermitianMatrix, NormKind};

const MONOTONE: [&str; 4] = ["pow:0.3", "pow:0.5", "pow:0.7", "log"];

fn kinds(dim: usize) -> Vec<NormKind> {
    let mut k = vec![
        NormKind::Operator,
        NormKind::Trace,
        NormKind::Frobenius,
        NormKind::Schatten(3.0),
        NormKind::Schatten(1.5),
        NormKind::KyFan(1),
    ];
    if dim >= 2 {
        k.push(NormKind::KyFan(2));
    }
    k
}

fn herm(dim: usize, seed: u64) -> HermitianMatrix<f64> {
    random_hermitian(dim, &mut rng_from_seed(seed))
}

fn unitary(dim: usize, seed: u64) -> ComplexMatrix<f64> {
    random_unitary(dim, &mut rng_from_seed(seed))
}

fn fro_diff(x: &ComplexMatrix<f64>, y: &ComplexMatrix<f64>) -> f64 {
    (x - y).frobenius_norm()
}

fn pd(dim: usize, seed: u64) -> HermitianMatrix<f64> {
    random_pd(dim, (0.1, 10.0), seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eig_reconstruction_unitarity_order(dim in 2usize..=8, seed in any::<u64>()) {
        let a = herm(dim, seed);
        let d = eig_hermitian(&a).unwrap();
        prop_assert!(unitarity_defect(&d.unitary) <= 1e-10 * dim as f64);
        let back = d.synthesize(&d.eigenvalues);
        prop_assert!(fro_diff(back.as_matrix(), a.as_matrix()) <= 1e-10 * (1.0 + a.frobenius_norm()));
        prop_assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eig_similarity_invariant(dim in 2usize..=8, seed in any::<u64>()) {
        let a = herm(dim, seed);
        let u = unitary(dim, seed ^ 0x55);
        let b = a.conjugate_by(&u);
        let la = eig_hermitian(&a).unwrap().eigenvalues;
        let lb = eig_hermitian(&b).unwrap().eigenvalues;
        for (x, y) in la.iter().zip(&lb) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn random_pd_reproducible(dim in 1usize..=8, seed in any::<u64>()) {
        let a = random_pd::<f64>(dim, (0.1, 10.0), seed).unwrap();
        let b = random_pd::<f64>(dim, (0.1, 10.0), seed).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn norms_unitarily_invariant(dim in 2usize..=8, seed in any::<u64>()) {
        let x = random_complex::<f64>(dim, seed);
        let u = unitary(dim, seed.wrapping_add(1));
        let v = unitary(dim, seed.wrapping_add(2));
        let uxv = u.matmul(&x).matmul(&v);
        for kind in kinds(dim) {
            let n0 = norm(&x, kind).unwrap();
            let n1 = norm(&uxv, kind).unwrap();
            prop_assert!((n0 - n1).abs() <= 1e-9 * n0, "{kind}: {n0} vs {n1}");
        }
    }

    #[test]
    fn norms_mixed_submultiplicative(dim in 2usize..=8, seed in any::<u64>()) {
        let x = random_complex::<f64>(dim, seed);
        let y = random_complex::<f64>(dim, seed.wrapping_add(7));
        let xy = x.matmul(&y);
        let opx = norm(&x, NormKind::Operator).unwrap();
        let opy = norm(&y, NormKind::Operator).unwrap();
        for kind in kinds(dim) {
            let nxy = norm(&xy, kind).unwrap();
            let nx = norm(&x, kind).unwrap();
            let ny = norm(&y, kind).unwrap();
            prop_assert!(nxy <= opx * ny * (1.0 + 1e-9));
            prop_assert!(nxy <= nx * opy * (1.0 + 1e-9));
        }
    }

    #[test]
    fn norms_triangle_and_homogeneity(dim in 2usize..=8, seed in any::<u64>(), c in -5.0f64..5.0) {
        let x = random_complex::<f64>(dim, seed);
        let y = random_complex::<f64>(dim, seed.wrapping_add(3));
        let sum = &x + &y;
        let scaled = x.scale(Complex::new(c, 0.5 * c));
        let cabs = Complex::new(c, 0.5 * c).norm();
        for kind in kinds(dim) {
            let nx = norm(&x, kind).unwrap();
            let ny = norm(&y, kind).unwrap();
            prop_assert!(norm(&sum, kind).unwrap() <= (nx + ny) * (1.0 + 1e-9));
            let ns = norm(&scaled, kind).unwrap();
            prop_assert!((ns - cabs * nx).abs() <= 1e-9 * cabs * nx + 1e-300);
        }
    }

    #[test]
    fn norm_aliases_agree(dim in 2usize..=8, seed in any::<u64>()) {
        let x = random_complex::<f64>(dim, seed);
        let pairs = [
            (NormKind::Schatten(1.0), NormKind::Trace),
            (NormKind::KyFan(1), NormKind::Operator),
            (NormKind::Schatten(2.0), NormKind::Frobenius),
        ];
        for (p, q) in pairs {
            let a = norm(&x, p).unwrap();
            let b = norm(&x, q).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b));
        }
        prop_assert!((norm(&x, NormKind::Frobenius).unwrap() - x.frobenius_norm()).abs() <= 1e-10 * (1.0 + x.frobenius_norm()));
    }

    #[test]
    fn divided_differences_symmetric(
        pts in prop::collection::vec(0.05f64..20.0, 2..=4),
        which in 0usize..7,
    ) {
        let ids = ["pow:0.5", "pow:0.3", "log", "exp", "square", "pow:-1", "product:pow:0.5:log"];
        let f = catalog_get(ids[which]).unwrap();
        let base = divided_difference(&f, &pts).unwrap();
        let mut rev = pts.clone();
        rev.reverse();
        let mut rot = pts.clone();
        rot.rotate_left(1);
        for p in [rev, rot] {
            let v = divided_difference(&f, &p).unwrap();
            prop_assert!((v - base).abs() <= 1e-9 * (1.0 + base.abs()), "{} {pts:?}: {v} vs {base}", ids[which]);
        }
    }

    #[test]
    fn monotone_derivative_signs(t in 0.01f64..100.0) {
        for id in MONOTONE {
            let f = catalog_get(id).unwrap();
            for n in 1..=3usize {
                let d: f64 = f.deriv(n, t);
                let expected = if n % 2 == 1 { 1.0 } else { -1.0 };
                prop_assert!(d * expected > 0.0, "{id} n={n} t={t}: {d}");
            }
        }
    }

    #[test]
    fn spectral_mapping(dim in 2usize..=6, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = pd(dim, seed);
        let fa = matrix_function(&f, &a).unwrap();
        let mut expected: Vec<f64> = eig_hermitian(&a).unwrap().eigenvalues.iter().map(|&l| f.eval(l)).collect();
        expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let got = eig_hermitian(&fa).unwrap().eigenvalues;
        for (x, y) in got.iter().zip(&expected) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn derivative_norm_attained_at_lambda_min(dim in 2usize..=6, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = pd(dim, seed);
        let lmin = eig_hermitian(&a).unwrap().lambda_min();
        for n in 1..=3 {
            let got = derivative_op_norm(&f, n, &a).unwrap();
            let expected = f.deriv(n, lmin).abs();
            prop_assert!((got - expected).abs() <= 1e-9 * expected);
        }
    }

    #[test]
    fn frechet_linear_in_direction(dim in 2usize..=6, seed in any::<u64>(), alpha in -3.0f64..3.0) {
        let f = catalog_get("log").unwrap();
        let a = pd(dim, seed);
        let b = herm(dim, seed.wrapping_add(1));
        let c = herm(dim, seed.wrapping_add(2));
        let lhs = frechet_derivative(&f, &a, &b.scale(alpha).add(&c)).unwrap();
        let rhs = frechet_derivative(&f, &a, &b).unwrap().scale(alpha).add(&frechet_derivative(&f, &a, &c).unwrap());
        prop_assert!(fro_diff(lhs.as_matrix(), rhs.as_matrix()) <= 1e-9 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn frechet_symmetric_in_directions(dim in 2usize..=5, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = random_pd::<f64>(dim, (0.5, 5.0), seed).unwrap();
        let b = herm(dim, seed.wrapping_add(1));
        let c = herm(dim, seed.wrapping_add(2));
        let e = herm(dim, seed.wrapping_add(3));
        let bc = frechet_derivative_n(&f, &a, &[&b, &c]).unwrap();
        let cb = frechet_derivative_n(&f, &a, &[&c, &b]).unwrap();
        prop_assert!(fro_diff(bc.as_matrix(), cb.as_matrix()) <= 1e-9 * (1.0 + bc.frobenius_norm()));
        let bce = frechet_derivative_n(&f, &a, &[&b, &c, &e]).unwrap();
        let ebc = frechet_derivative_n(&f, &a, &[&e, &b, &c]).unwrap();
        prop_assert!(fro_diff(bce.as_matrix(), ebc.as_matrix()) <= 1e-9 * (1.0 + bce.frobenius_norm()));
    }

    #[test]
    fn matrix_function_unitary_covariance(dim in 2usize..=6, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = pd(dim, seed);
        let u = unitary(dim, seed.wrapping_add(9));
        let lhs = matrix_function(&f, &a.conjugate_by(&u)).unwrap();
        let rhs = matrix_function(&f, &a).unwrap().conjugate_by(&u);
        prop_assert!(fro_diff(lhs.as_matrix(), rhs.as_matrix()) <= 1e-9 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn report_pass_matches_margin_rule(lhs in -1e3f64..1e3, rhs in -1e3f64..1e3) {
        let r = ineq::IneqReport::new("x", lhs, rhs, ineq::Witness::new(1));
        prop_assert_eq!(r.margin, rhs - lhs);
        prop_assert_eq!(r.pass, r.margin >= -1e-8 * (1.0 + rhs.abs()));
        prop_assert_eq!(r.pass, margin_passes(r.margin, r.rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hh_integral_symmetric(dim in 2usize..=5, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = pd(dim, seed);
        let b = pd(dim, seed.wrapping_add(1));
        let ab = hh_integral(&f, &a, &b, 1e-9).unwrap().value;
        let ba = hh_integral(&f, &b, &a, 1e-9).unwrap().value;
        prop_assert!(fro_diff(ab.as_matrix(), ba.as_matrix()) <= 1e-9);
    }

    #[test]
    fn homogeneous_commutators_scale(dim in 2usize..=5, seed in any::<u64>(), nu in 0.0f64..=1.0, r in 0.1f64..=1.0) {
        let a = pd(dim, seed);
        let b = pd(dim, seed.wrapping_add(1));
        let x = random_complex::<f64>(dim, seed.wrapping_add(2));
        let pow = catalog_get(&format!("pow:{r}")).unwrap();
        for kind in [NormKind::Operator, NormKind::Trace] {
            let heinz = |s: f64| ineq::check_commutator_bounds(None, None, &a.scale(s), &b.scale(s), &x.scale_real(s), kind, CommutatorVariant::Heinz { nu }).unwrap();
            let t4 = |s: f64| ineq::check_commutator_bounds(Some(&pow), None, &a.scale(s), &b.scale(s), &x.scale_real(s), kind, CommutatorVariant::MonotoneCommutator).unwrap();
            let (h1, p1) = (heinz(1.0), t4(1.0));
            for c in [0.5, 2.0] {
                prop_assert_eq!(heinz(c).pass, h1.pass);
                prop_assert_eq!(t4(c).pass, p1.pass);
                // both sides are homogeneous of the same degree
                let hc = heinz(c);
                prop_assert!((hc.margin - c * c * h1.margin).abs() <= 1e-9 * (1.0 + hc.rhs.abs()));
            }
        }
    }

    #[test]
    fn hh_quasiconvex_endpoints_reduce_to_half(dim in 2usize..=5, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = pd(dim, seed);
        let b = pd(dim, seed.wrapping_add(1));
        for kind in [NormKind::Operator, NormKind::Trace, NormKind::KyFan(2)] {
            let d = norm_hermitian(&b.sub(&a), kind).unwrap();
            let m = derivative_op_norm(&f, 1, &a).unwrap().max(derivative_op_norm(&f, 1, &b).unwrap());
            let perturb = ineq::check_perturbation(&f, &a, &b, Mode::QuasiConvex, kind).unwrap();
            for nu in [0.0, 1.0] {
                let r = ineq::check_hh_weighted(&f, &a, &b, nu, Mode::QuasiConvex, kind).unwrap();
                prop_assert!((r.rhs - 0.5 * d * m).abs() <= 1e-10 * (1.0 + r.rhs));
                prop_assert!((2.0 * r.rhs - perturb.rhs).abs() <= 1e-10 * (1.0 + perturb.rhs));
            }
        }
    }

    #[test]
    fn simpson_error_shrinks_on_halving(dim in 2usize..=4, seed in any::<u64>(), which in 0usize..4) {
        let f = catalog_get(MONOTONE[which]).unwrap();
        let a = random_pd::<f64>(dim, (0.5, 4.0), seed).unwrap();
        let b = random_pd::<f64>(dim, (0.5, 4.0), seed.wrapping_add(1)).unwrap();
        let mid = a.lerp(&b, 0.5);
        let exact = hh_integral(&f, &a, &b, 1e-13).unwrap().value;
        for rule in opineq::quadrature::SimpsonRule::ALL {
            let s = |p: &HermitianMatrix<f64>, q: &HermitianMatrix<f64>| opineq::quadrature::simpson(rule, &f, p, q).unwrap();
            let whole = op_norm(&s(&a, &b).sub(&exact)).unwrap();
            let halves = op_norm(&s(&a, &mid).add(&s(&mid, &b)).scale(0.5).sub(&exact)).unwrap();
            prop_assert!(whole >= 4.0 * 0.9 * halves, "{rule:?}: {whole} vs {halves}");
        }
    }
}

/// Independent oracle: adaptive Simpson with Richardson correction.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

#[test]
fn weight_moments_match_numeric_integration() {
    for i in 0..=10 {
        let nu = i as f64 / 10.0;
        for s in [0.25, 0.5, 0.75, 1.0] {
            let m = weight_moments(nu, s).unwrap();
            // split at ν so each piece is smooth apart from the t^s endpoint
            let int = |g: &dyn Fn(f64) -> f64| {
                adaptive_simpson(&|t| (t - nu).abs() * g(t), 0.0, nu, 1e-14)
                    + adaptive_simpson(&|t| (t - nu).abs() * g(t), nu, 1.0, 1e-14)
            };
            let checks = [
                (m.m0, int(&|_| 1.0)),
                (m.m1, int(&|t| t)),
                (m.m1c, int(&|t| 1.0 - t)),
                (m.ms, int(&|t| t.powf(s))),
                (m.msc, int(&|t| (1.0 - t).powf(s))),
            ];
            for (k, (closed, numeric)) in checks.iter().enumerate() {
                assert!((closed - numeric).abs() <= 1e-10, "nu={nu} s={s} moment {k}: {closed} vs {numeric}");
            }
        }
    }
}

#[test]
fn f32_pipeline() {
    let f = catalog_get("pow:0.5").unwrap();
    let a = random_pd::<f32>(3, (0.5, 4.0), 1).unwrap();
    let b = random_pd::<f32>(3, (0.5, 4.0), 2).unwrap();
    let r = ineq::check_perturbation(&f, &a, &b, Mode::QuasiConvex, NormKind::Trace).unwrap();
    assert!(r.margin > 0.0);
    let s = ineq::check_simpson(&f, &a, &b, opineq::quadrature::SimpsonRule::OneThird, NormKind::Operator).unwrap();
    assert!(s.lhs <= s.rhs);
}
