use num_complex::Complex64;
use theta_atlas_core::analytic::{self, EvalPoint, PrecisionContext};
use theta_atlas_core::bounds::{self, AnnulusSpec};
use theta_atlas_core::mp::MpComplex;
use theta_atlas_core::{Error, Extent};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

/// `Π_{ℓ=0}^{k}(1 - x^{ℓ+1/2})` in plain f64.
fn p_f64(x: f64, k: usize) -> f64 {
    (0..=k).map(|l| 1.0 - x.powf(l as f64 + 0.5)).product()
}

#[test]
fn frozen_bound_values() {
    // reference digits from an independent 40-digit summation
    let s = bounds::eval_bound_suite(0.25).unwrap();
    assert!((s.r_val.value - 0.564_468_413_605_938_6).abs() < 1e-15);
    assert!((s.p_inf.value - 0.419_422_441_795_107_6).abs() < 1e-15);
    let s = bounds::eval_bound_suite(0.5).unwrap();
    assert!((s.m_val.value - 1.0 / 0.288_788_095_086_602_4).abs() < 1e-14);
    let m = bounds::eval_bound_suite(0.01).unwrap().m_val;
    assert!(m.lo > 1.0 && m.hi < 1.02);
}

#[test]
fn p_infinite_matches_long_product() {
    for x in [0.05, 0.25, 0.6] {
        let e = bounds::eval_p(x, Extent::Infinite).unwrap();
        let direct = p_f64(x, 400);
        assert!((e.value - direct).abs() < 1e-14, "x = {x}");
        assert!(e.lo <= e.value && e.value <= e.hi && e.error >= 0.0);
    }
}

#[test]
fn u_exceeds_argument() {
    for x in [0.001, 0.1, 0.5, 0.8] {
        let s = bounds::eval_bound_suite(x).unwrap();
        assert!(s.u_val.lo >= x, "x = {x}");
        assert!(s.p_inf.hi < 1.0 && s.t_val.lo > 0.0 && s.r_val.lo > 0.0 && s.m_val.lo >= 1.0);
    }
}

#[test]
fn pochhammer_modulus_dominates_real_product() {
    let c = ctx();
    for q in [Complex64::new(0.3, 0.4), Complex64::from_polar(0.7, 2.0), Complex64::new(-0.2, 0.0)] {
        let num = analytic::pochhammer_num(&MpComplex::from_c64(q, 288), Extent::Infinite, &c).to_c64();
        let m = bounds::eval_bound_suite(q.norm()).unwrap().m_val;
        assert!(num.norm() >= 1.0 / m.lo - 1e-15, "q = {q}");
    }
}

#[test]
fn theta_values() {
    let c = ctx();
    let v = analytic::theta_eval(&EvalPoint::new(Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), &c).unwrap(), &c);
    assert!((v.to_c64().re - 1.641_632_560_655_153_9).abs() < 1e-15);
    // a zero of θ found by Newton is also a zero at double the precision
    let q = Complex64::new(0.05, 0.0);
    let z = analytic::find_zeros(q, 1, &c).unwrap().zeros[0].location;
    let hi = PrecisionContext::with_bits(512).unwrap();
    let at = analytic::theta_eval(&EvalPoint::new(q, z, &hi).unwrap(), &hi).to_c64();
    assert!(at.norm() < 1e-12, "{at}");
}

#[test]
fn u_values() {
    let c = ctx();
    let v = analytic::u_eval(&EvalPoint::new(Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), &c).unwrap(), &c);
    assert!((v.to_c64().re - 2.384_231_029_031_371_7).abs() < 1e-15);
}

#[test]
fn derivative_against_differences() {
    let c = ctx();
    let p = 288;
    let q = MpComplex::from_f64(0.3, 0.0, p);
    let z = MpComplex::from_f64(2.0, 1.0, p);
    let h = MpComplex::from_f64(1e-8, 0.0, p);
    let f = |z: MpComplex| analytic::theta_eval(&EvalPoint::from_mp(q.clone(), z).unwrap(), &c);
    let fd = f(z.add(&h, p)).sub(&f(z.sub(&h, p)), p).div(&MpComplex::from_f64(2e-8, 0.0, p), p);
    let d = analytic::theta_prime_eval(&EvalPoint::from_mp(q.clone(), z).unwrap(), &c);
    let rel = d.sub(&fd, p).to_c64().norm() / d.to_c64().norm();
    assert!(rel < 1e-6);
}

#[test]
fn counts_at_small_q() {
    let c = ctx();
    let q = Complex64::new(0.1, 0.0);
    assert_eq!(analytic::count_zeros_in_theorem_disk(q, 1, &c).unwrap().count, 1);
    assert_eq!(analytic::count_zeros(q, 0.1f64.powf(-3.5), &c).unwrap().count, 3);
}

#[test]
fn zeros_at_five_hundredths() {
    let c = ctx();
    let q = Complex64::new(0.05, 0.0);
    let r = analytic::find_zeros(q, 5, &c).unwrap();
    assert!(r.cross_check);
    assert_eq!(r.zeros.iter().map(|z| z.multiplicity).sum::<usize>(), 5);
    assert!(r.residuals_within(c.eval_tolerance));
    for (i, z) in r.zeros.iter().enumerate() {
        let seed = -q.powi(-(i as i32 + 1));
        assert!((z.location - seed).norm() < 0.2 * seed.norm(), "{z:?}");
    }
}

#[test]
fn circle_minimum_respects_bound() {
    let c = ctx();
    for (q, n) in [(Complex64::new(0.25, 0.0), 3), (Complex64::from_polar(0.3, 1.0), 2)] {
        let m = analytic::circle_min_modulus_u(q, n, 256, &c).unwrap();
        let b = bounds::u_circle_lower_bound(q, n).unwrap();
        // attained at z = -|q|^{-n-1/2} when q > 0, so only error-free slack is allowed
        assert!(m.value_f64().next_up() * (1.0 + m.rel_error) >= b.bound.lo, "{q} {n}");
    }
}

#[test]
fn certificate_monotone_in_annulus() {
    let n0 = |d0, d| bounds::certify_threshold(&AnnulusSpec::new(d0, d).unwrap()).unwrap().n0;
    let by_delta0: Vec<usize> = [0.05, 0.1, 0.2].iter().map(|&d0| n0(d0, 0.3)).collect();
    assert!(by_delta0.windows(2).all(|w| w[1] <= w[0]), "{by_delta0:?}");
    let by_delta: Vec<usize> = [0.1, 0.3, 0.5].iter().map(|&d| n0(0.05, d)).collect();
    assert!(by_delta.windows(2).all(|w| w[0] <= w[1]), "{by_delta:?}");
}

#[test]
fn certificate_is_minimal() {
    let a = AnnulusSpec::new(0.1, 0.3).unwrap();
    let c = bounds::certify_threshold(&a).unwrap();
    assert!(c.conditions_hold());
    let at = bounds::threshold_terms(&a, c.m, c.n0).unwrap();
    assert!(at.z1.hi < at.target.lo && at.z3.hi < at.target.lo && at.z2.hi <= at.target.lo);
    if c.n0 > 1 {
        let before = bounds::threshold_terms(&a, c.m, c.n0 - 1).unwrap();
        assert!(before.z1.lo >= before.target.hi || before.z3.lo >= before.target.hi);
    }
}

#[test]
fn term_bounds_below_majorant() {
    let c = ctx();
    let q = Complex64::new(0.3, 0.2);
    let n = 3;
    let terms = bounds::term_bounds_on_circle(q, n, 0..=40, &c).unwrap();
    let s = bounds::eval_bound_suite(q.norm()).unwrap();
    let above: f64 = terms.iter().filter(|t| t.j > n).map(|t| t.normalized).sum();
    assert!(above <= q.norm().powi(n as i32) * s.u_val.hi * s.r_val.hi);
    assert!(terms.iter().all(|t| t.normalized >= 0.0));
}

#[test]
fn domain_errors() {
    assert!(matches!(bounds::eval_bound_suite(1.5), Err(Error::OutOfDomain { .. })));
    assert!(matches!(AnnulusSpec::new(0.2, 0.2), Err(Error::InvalidAnnulus { .. })));
    assert!(bounds::rouche_margin(Complex64::new(0.1, 0.0), 2, 8, &ctx()).is_err());
    assert!(analytic::find_zeros(Complex64::new(1.2, 0.0), 2, &ctx()).is_err());
}
