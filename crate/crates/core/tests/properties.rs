use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use theta_atlas_core::analytic::{self, EvalPoint, PrecisionContext};
use theta_atlas_core::bounds;
use theta_atlas_core::qseries::{self, QSeries};
use theta_atlas_core::Extent;

fn unit_series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-50i64..50, 0..15).prop_map(|rest| {
        let mut c = vec![1];
        c.extend(rest);
        QSeries::from_i64s(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tail_product_counts_distinct_partitions(r in 0usize..6, order in 1usize..30) {
        let s = qseries::series_sr(r, order);
        prop_assert_eq!(s.coeff(0), Some(&BigInt::from(0)));
        for nu in 1..=order {
            let expected = BigInt::from(qseries::count_distinct_partitions(nu, r + 1));
            prop_assert_eq!(s.coeff(nu), Some(&expected), "r = {}, nu = {}", r, nu);
        }
    }

    #[test]
    fn inverse_round_trip(a in unit_series()) {
        let inv = a.invert_unit().unwrap();
        prop_assert_eq!(a.mul(&inv), QSeries::one(a.order()));
    }

    #[test]
    fn inverse_pochhammer_positive(j in 1usize..25, order in 1usize..60) {
        let inv = qseries::pochhammer(Extent::Finite(j), order).invert_unit().unwrap();
        prop_assert!(inv.is_positive_on(0..=order));
    }

    #[test]
    fn shifted_majorant_below_base(n in 0usize..5, nu in 1usize..25) {
        let order = n + nu;
        let shifted = qseries::series_vjn(Extent::Infinite, n, order).unwrap();
        let base = qseries::series_vjn(Extent::Infinite, 0, order).unwrap();
        prop_assert!(shifted.coeff(n + nu).unwrap() <= base.coeff(nu).unwrap());
    }

    #[test]
    fn ujn_starts_at_n_plus_one(n in 0usize..6, extra in 1usize..8, order in 10usize..30) {
        let j = n + extra;
        let s = qseries::series_ujn(Extent::Finite(j), n, order).unwrap();
        for nu in 0..=n.min(order) {
            prop_assert_eq!(s.coeff(nu), Some(&BigInt::from(0)));
        }
        if n < order {
            prop_assert_eq!(s.coeff(n + 1), Some(&BigInt::from(1)));
        }
        let lemma = qseries::series_u(order);
        for nu in 1..=order - n {
            let v = s.coeff(n + nu).unwrap();
            let bound = lemma.coeff(nu).unwrap();
            prop_assert!(v <= bound && -v <= *bound);
        }
    }

    #[test]
    fn gamma_domination_random(p in 1usize..8, extra in 0usize..6, order in 5usize..30) {
        let report = qseries::verify_gamma_domination(p, p + extra, order).unwrap();
        prop_assert!(report.passed);
        prop_assert!(report.first_violation.is_none());
    }

    #[test]
    fn p_decreasing_in_k_and_x(x in 0.01f64..0.95, k in 0usize..20) {
        // the omitted factors differ from 1 by about x^{k+3/2}
        prop_assume!(x.powf(k as f64 + 1.5) > 1e-12);
        let pk = bounds::eval_p(x, Extent::Finite(k)).unwrap();
        let pk1 = bounds::eval_p(x, Extent::Finite(k + 1)).unwrap();
        let pinf = bounds::eval_p(x, Extent::Infinite).unwrap();
        prop_assert!(pk1.hi < pk.lo && pinf.hi < pk.lo);
        let y = (x + 0.04).min(0.99);
        let py = bounds::eval_p(y, Extent::Infinite).unwrap();
        prop_assert!(py.hi < pinf.lo);
    }

    #[test]
    fn theta_commutes_with_conjugation(r in 0.01f64..0.9, phi in 0.0f64..std::f64::consts::TAU, zr in -20.0f64..20.0, zi in -20.0f64..20.0) {
        let ctx = PrecisionContext::default();
        let q = Complex64::from_polar(r, phi);
        let z = Complex64::new(zr, zi);
        let a = analytic::theta_eval(&EvalPoint::new(q, z, &ctx).unwrap(), &ctx).to_c64();
        let b = analytic::theta_eval(&EvalPoint::new(q.conj(), z.conj(), &ctx).unwrap(), &ctx).to_c64();
        prop_assert!((a.conj() - b).norm() <= 1e-25 * (1.0 + a.norm()));
    }

    #[test]
    fn u_circle_bound_chain(r in 0.02f64..0.95, phi in 0.0f64..std::f64::consts::TAU, n in 1usize..8) {
        let b = bounds::u_circle_lower_bound(Complex64::from_polar(r, phi), n).unwrap();
        prop_assert!(b.bound.lo > 0.0);
        prop_assert!(b.chained.hi < b.bound.lo || n == 1 && b.chained.lo <= b.bound.hi);
    }
}
