use num_complex::Complex64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polybergman::cauchy::{transform_coeff, transform_coeff_exact, transform_polyanalytic_closed};
use polybergman::discpoly::{eval_disc_poly, inner_product_fns, random_polyanalytic, DiscPolyIndex, PolyanalyticFn};
use polybergman::quad::gauss_jacobi_rule;
use polybergman::range::range_profile;
use polybergman::scalar::{beta_fn, chu_vandermonde_rhs, hyp2f1_terminating, pochhammer, rational, Rational};
use polybergman::weights::moment;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rational(p, q))
}

fn random_fn(seed: u64) -> PolyanalyticFn {
    random_polyanalytic(&mut ChaCha8Rng::seed_from_u64(seed), 4, 6)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #[test]
    fn pochhammer_splits(a in small_rational(), j in 0u32..8, k in 0u32..8) {
        let whole = pochhammer(a.clone(), j + k);
        let split = pochhammer(a.clone(), j) * pochhammer(a + rational(i64::from(j), 1), k);
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn beta_is_symmetric(x in 0.05f64..30.0, y in 0.05f64..30.0) {
        prop_assert!(close(beta_fn(x, y).unwrap(), beta_fn(y, x).unwrap(), 1e-14));
    }

    #[test]
    fn beta_with_unit_argument(x in 0.05f64..50.0) {
        prop_assert!(close(beta_fn(x, 1.0).unwrap(), 1.0 / x, 1e-12));
    }

    #[test]
    fn chu_vandermonde_is_exact(m in 0u32..=20, b in small_rational(), c in small_rational()) {
        let pole = c.is_integer() && c <= rational(0, 1) && (-c.to_integer()).to_u32().unwrap() < m;
        prop_assume!(!pole);
        prop_assert_eq!(
            hyp2f1_terminating(m, b.clone(), c.clone()).unwrap(),
            chu_vandermonde_rhs(m, b, c).unwrap()
        );
    }

    #[test]
    fn moment_recurrence(k in 0u32..30, s in 0u32..10, alpha in -0.9f64..10.0) {
        let lhs = moment(k + 1, s, alpha).unwrap();
        let rhs = moment(k, s, alpha).unwrap() * f64::from(k + 1) / (f64::from(k + s + 2) + alpha);
        prop_assert!(close(lhs, rhs, 1e-14));
    }

    #[test]
    fn gauss_jacobi_integrates_polynomials_exactly(n in 1usize..40, frac in 0.0f64..1.0, exponent in -0.5f64..12.0) {
        let degree = ((2 * n - 1) as f64 * frac) as u32;
        let rule = gauss_jacobi_rule(n, exponent).unwrap();
        let q: f64 = rule.iter().map(|&(t, w)| w * t.powi(degree as i32)).sum();
        prop_assert!(close(q, moment(degree, 0, exponent).unwrap(), 1e-11), "n={} d={} q={}", n, degree, q);
    }

    #[test]
    fn inner_product_is_hermitian(s1 in any::<u64>(), s2 in any::<u64>(), gamma in 0.0f64..4.0) {
        let (f, g) = (random_fn(s1), random_fn(s2));
        let fg = inner_product_fns(&f, &g, gamma).unwrap();
        let gf = inner_product_fns(&g, &f, gamma).unwrap();
        prop_assert!((fg - gf.conj()).norm() <= 1e-14 * fg.norm().max(1.0));
        prop_assert!(inner_product_fns(&f, &f, gamma).unwrap().re >= 0.0);
    }

    #[test]
    fn disc_poly_conjugation(m in 0u32..8, n in 0u32..8, gamma in 0.0f64..4.0, r in 0.0f64..0.99, theta in 0.0f64..6.3) {
        let z = Complex64::from_polar(r, theta);
        let a = eval_disc_poly(gamma, DiscPolyIndex::new(m, n), z).unwrap();
        let b = eval_disc_poly(gamma, DiscPolyIndex::new(n, m), z).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-13 * a.norm().max(1.0));
    }

    #[test]
    fn closed_transform_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0, alpha in 0.0f64..3.0) {
        let (f, g) = (random_fn(s1), random_fn(s2));
        let c = Complex64::new(re, im);
        let z = Complex64::new(1.3, -0.7);
        let combined = transform_polyanalytic_closed(&f.sum(&g.scaled(c)), alpha).unwrap().eval(z);
        let parts = transform_polyanalytic_closed(&f, alpha).unwrap().eval(z)
            + c * transform_polyanalytic_closed(&g, alpha).unwrap().eval(z);
        prop_assert!((combined - parts).norm() <= 1e-13 * parts.norm().max(1.0));
    }

    #[test]
    fn transform_constant_matches_exact(gn in 0i64..12, an in 0i64..12, m in 0u32..7, n in 0u32..7) {
        let exact = transform_coeff_exact(&rational(gn, 4), &rational(an, 4), m, n).unwrap();
        let float = transform_coeff(gn as f64 / 4.0, an as f64 / 4.0, m, n).unwrap();
        let e = exact.to_f64().unwrap();
        prop_assert!((float - e).abs() <= 1e-13 * e.abs(), "{} vs {}", float, e);
    }

    #[test]
    fn range_dimension_grows_by_at_most_one(gamma in 0.0f64..4.0, shift in 0.0f64..4.0, n in 0u32..12) {
        let alpha = gamma + shift;
        let a = range_profile(gamma, alpha, n).unwrap().dimension;
        let b = range_profile(gamma, alpha, n + 1).unwrap().dimension;
        prop_assert!(a <= b && b <= a + 1 && b <= n as usize + 2);
    }
}
