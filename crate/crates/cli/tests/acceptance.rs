//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use theta_atlas::{annulus_grid, rouche_witness, WitnessPoint};
use theta_atlas_core::analytic::{self, EvalPoint, PrecisionContext, ZeroCount, ZeroReport};
use theta_atlas_core::bounds::{self, AnnulusSpec, ThresholdCertificate};
use theta_atlas_core::mp::MpComplex;
use theta_atlas_core::{qseries, Extent};

const RESIDUAL_TOL: f64 = 1e-3;
const DERIVATIVE_REL_TOL: f64 = 1e-6;
const DERIVATIVE_STEP: f64 = 1e-8;
const ROUCHE_BOUND: f64 = 0.76;
const ROUCHE_SAMPLES: usize = 4096;
const CIRCLE_SAMPLES: usize = 1024;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn identity() -> Verdict {
    let r = qseries::verify_product_identity(30, 60).expect("valid orders");
    let ok = r.matched && r.mismatches.is_empty() && r.checked == 31 * 61;
    verdict(
        ok,
        format!("{} coefficients compared, {} mismatches", r.checked, r.mismatches.len()),
    )
}

fn lemma() -> Verdict {
    let r = qseries::verify_lemma1(6, Extent::Finite(18), 40).expect("valid ranges");
    verdict(
        r.success && r.violations.is_empty(),
        format!("{} inequalities, {} violations", r.checked, r.violations.len()),
    )
}

fn gamma() -> Verdict {
    let mut pairs = 0;
    let mut failed = Vec::new();
    for r in 1..=12 {
        for p in 1..=r {
            let g = qseries::verify_gamma_domination(p, r, 40).expect("valid range");
            pairs += 1;
            if !g.passed {
                failed.push((p, r));
            }
        }
    }
    verdict(failed.is_empty(), format!("{pairs} (p, r) pairs, failures {failed:?}"))
}

fn partitions() -> Verdict {
    let order = 40;
    let mut mismatches = 0;
    let mut shifted = 0;
    let mut compared = 0;
    let base = qseries::series_sr(0, order);
    for r in [0usize, 1, 2, 5] {
        let s = qseries::series_sr(r, order);
        if s.coeff(0) != Some(&BigInt::from(0)) {
            mismatches += 1;
        }
        for nu in 1..=order {
            compared += 1;
            if s.coeff(nu) != Some(&BigInt::from(qseries::count_distinct_partitions(nu, r + 1))) {
                mismatches += 1;
            }
        }
        for nu in 0..=order - r {
            if s.coeff(r + nu) > base.coeff(nu) {
                shifted += 1;
            }
        }
    }
    verdict(
        mismatches == 0 && shifted == 0,
        format!("{compared} coefficients, {mismatches} oracle mismatches, {shifted} shift violations"),
    )
}

fn small_q_points() -> [Complex64; 3] {
    [
        Complex64::new(0.05, 0.0),
        Complex64::new(0.1, 0.0),
        Complex64::from_polar(0.2, std::f64::consts::FRAC_PI_4),
    ]
}

/// Counts for n = 1..=12 and the zero reports used to cross-check them.
fn count_run() -> Result<(Vec<ZeroCount>, Vec<ZeroReport>), String> {
    let c = ctx();
    let mut counts = Vec::new();
    let mut reports = Vec::new();
    for q in small_q_points() {
        for n in 1..=12 {
            counts.push(analytic::count_zeros_in_theorem_disk(q, n, &c).map_err(|e| format!("count q = {q}, n = {n}: {e}"))?);
        }
        reports.push(analytic::find_zeros(q, 12, &c).map_err(|e| format!("zeros q = {q}: {e}"))?);
    }
    Ok((counts, reports))
}

fn counts_detail(counts: &[ZeroCount], reports: &[ZeroReport]) -> Verdict {
    let mut bad = Vec::new();
    for (i, c) in counts.iter().enumerate() {
        let n = i % 12 + 1;
        if c.count != n as i64 || c.residual >= RESIDUAL_TOL {
            bad.push(format!("q#{} n={n}: count {} residual {:.1e}", i / 12, c.count, c.residual));
        }
        let report = &reports[i / 12];
        let inside = report.count_inside(c.radius);
        if inside != n {
            bad.push(format!("q#{} n={n}: {inside} located zeros inside", i / 12));
        }
    }
    for (i, r) in reports.iter().enumerate() {
        if !r.cross_check || r.zeros.iter().map(|z| z.multiplicity).sum::<usize>() != 12 {
            bad.push(format!("q#{i}: zero report cross-check failed"));
        }
    }
    let worst = counts.iter().map(|c| c.residual).fold(0.0, f64::max);
    verdict(bad.is_empty(), format!("36 counts, worst residual {worst:.1e}; problems {bad:?}"))
}

fn circle_bound() -> Verdict {
    let c = ctx();
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for q in [
        Complex64::new(0.25, 0.0),
        Complex64::new(0.4, 0.0),
        Complex64::from_polar(0.3, std::f64::consts::FRAC_PI_3),
    ] {
        for n in [2, 3, 5] {
            let m = match analytic::circle_min_modulus_u(q, n, CIRCLE_SAMPLES, &c) {
                Ok(m) => m,
                Err(e) => {
                    bad.push(format!("{q} n={n}: {e}"));
                    continue;
                }
            };
            let b = bounds::u_circle_lower_bound(q, n).expect("valid point");
            // upper end of the sampled minimum against the lower end of the bound
            let sampled = m.value_f64().next_up() * (1.0 + m.rel_error);
            let gap = sampled / b.bound.lo - 1.0;
            worst = worst.min(gap);
            if sampled < b.bound.lo {
                bad.push(format!("{q} n={n}: min {} < bound {}", m.value_f64(), b.bound.lo));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("9 circles, smallest relative gap {worst:.2e}; failures {bad:?}"),
    )
}

fn certificate_run() -> Result<(ThresholdCertificate, Vec<WitnessPoint>), String> {
    let a = AnnulusSpec::new(0.1, 0.3).expect("valid annulus");
    let cert = bounds::certify_threshold(&a).map_err(|e| e.to_string())?;
    let grid = annulus_grid(&a, 8, 8);
    let witness = rouche_witness(&grid, cert.n0, ROUCHE_SAMPLES, &ctx()).map_err(|e| e.to_string())?;
    Ok((cert, witness))
}

fn certificate_detail(cert: &ThresholdCertificate, witness: &[WitnessPoint]) -> Verdict {
    let max = witness.iter().map(|w| w.margin).fold(0.0, f64::max);
    let ok = cert.conditions_hold() && witness.len() == 64 && max < 1.0 && max <= ROUCHE_BOUND;
    verdict(
        ok,
        format!(
            "m = {}, n0 = {}, z1 {:.3e} z2 {:.3e} z3 {:.3e} < target {:.3e}; max sampled ratio {max:.3e} over {} points",
            cert.m,
            cert.n0,
            cert.z1_bound,
            cert.z2_bound,
            cert.z3_bound,
            cert.target,
            witness.len()
        ),
    )
}

fn derivative() -> Verdict {
    let c = ctx();
    let p = c.mantissa_bits + 64;
    let points = [
        (Complex64::new(0.3, 0.0), Complex64::new(2.0, 1.0)),
        (Complex64::new(0.1, 0.0), Complex64::new(-5.0, 0.0)),
        (Complex64::from_polar(0.5, 1.0), Complex64::new(1.5, -0.5)),
        (Complex64::new(0.05, 0.02), Complex64::new(0.0, 10.0)),
        (Complex64::new(-0.7, 0.1), Complex64::new(-1.0, 1.0)),
    ];
    let mut worst: f64 = 0.0;
    for (q, z) in points {
        let qm = MpComplex::from_c64(q, p);
        let zm = MpComplex::from_c64(z, p);
        let h = MpComplex::from_f64(DERIVATIVE_STEP, 0.0, p);
        let f = |z: MpComplex| analytic::theta_eval(&EvalPoint::from_mp(qm.clone(), z).expect("|q| < 1"), &c);
        let fd = f(zm.add(&h, p))
            .sub(&f(zm.sub(&h, p)), p)
            .div(&MpComplex::from_f64(2.0 * DERIVATIVE_STEP, 0.0, p), p)
            .to_c64();
        let d = analytic::theta_prime_eval(&EvalPoint::from_mp(qm.clone(), zm).expect("|q| < 1"), &c).to_c64();
        worst = worst.max((d - fd).norm() / d.norm());
    }
    verdict(worst < DERIVATIVE_REL_TOL, format!("5 points, worst relative error {worst:.2e}"))
}

fn monotonicity() -> Verdict {
    let n0: Result<Vec<usize>, _> = [0.1, 0.3, 0.5]
        .iter()
        .map(|&d| bounds::certify_threshold(&AnnulusSpec::new(0.05, d).expect("valid")).map(|c| c.n0))
        .collect();
    let m: Result<Vec<usize>, _> = (1..=9).map(|k| bounds::choose_m(k as f64 / 10.0)).collect();
    match (n0, m) {
        (Ok(n0), Ok(m)) => {
            let ok = n0.windows(2).all(|w| w[0] <= w[1]) && m.windows(2).all(|w| w[0] <= w[1]);
            verdict(ok, format!("n0 over delta {n0:?}, m over delta {m:?}"))
        }
        (a, b) => verdict(false, format!("evaluation failed: {:?} {:?}", a.err(), b.err())),
    }
}

struct Criterion {
    id: usize,
    name: &'static str,
    limit: Duration,
}

fn report(c: &Criterion, v: &Verdict, elapsed: Duration) -> bool {
    let in_time = elapsed <= c.limit;
    let ok = v.ok && in_time;
    println!(
        "criterion {:>2} {:<28} {} ({:.2} s of {} s) {}",
        c.id,
        c.name,
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        c.limit.as_secs(),
        v.detail
    );
    ok
}

fn main() -> ExitCode {
    let list = std::env::args().any(|a| a == "--list");
    if list {
        return ExitCode::SUCCESS;
    }
    let criteria = [
        Criterion {
            id: 1,
            name: "product identity",
            limit: Duration::from_secs(5),
        },
        Criterion {
            id: 2,
            name: "majorant lemma sweep",
            limit: Duration::from_secs(30),
        },
        Criterion {
            id: 3,
            name: "gamma domination",
            limit: Duration::from_secs(10),
        },
        Criterion {
            id: 4,
            name: "distinct partitions",
            limit: Duration::from_secs(10),
        },
        Criterion {
            id: 5,
            name: "zero counts at small q",
            limit: Duration::from_secs(60),
        },
        Criterion {
            id: 6,
            name: "lower bound on the circle",
            limit: Duration::from_secs(30),
        },
        Criterion {
            id: 7,
            name: "certificate and witness",
            limit: Duration::from_secs(300),
        },
        Criterion {
            id: 8,
            name: "derivative check",
            limit: Duration::from_secs(1),
        },
        Criterion {
            id: 9,
            name: "monotonicity",
            limit: Duration::from_secs(60),
        },
        Criterion {
            id: 10,
            name: "determinism",
            limit: Duration::from_secs(600),
        },
    ];
    let mut all = true;
    let mut timed = |c: &Criterion, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        all &= report(c, &v, start.elapsed());
    };

    timed(&criteria[0], &mut identity);
    timed(&criteria[1], &mut lemma);
    timed(&criteria[2], &mut gamma);
    timed(&criteria[3], &mut partitions);

    let mut first_counts = None;
    timed(&criteria[4], &mut || match count_run() {
        Ok((counts, reports)) => {
            let v = counts_detail(&counts, &reports);
            first_counts = Some((counts, reports));
            v
        }
        Err(e) => verdict(false, e),
    });
    timed(&criteria[5], &mut circle_bound);

    let mut first_cert = None;
    timed(&criteria[6], &mut || match certificate_run() {
        Ok((cert, witness)) => {
            let v = certificate_detail(&cert, &witness);
            first_cert = Some((cert, witness));
            v
        }
        Err(e) => verdict(false, e),
    });
    timed(&criteria[7], &mut derivative);
    timed(&criteria[8], &mut monotonicity);

    timed(&criteria[9], &mut || {
        let json = |v: &dyn erased::Json| v.to_json();
        let (Some(counts), Some(cert)) = (&first_counts, &first_cert) else {
            return verdict(false, "criteria 5 and 7 did not produce reports");
        };
        let again_counts = count_run();
        let again_cert = certificate_run();
        match (again_counts, again_cert) {
            (Ok(c2), Ok(k2)) => {
                let same_counts = json(counts) == json(&c2);
                let same_cert = json(cert) == json(&k2);
                verdict(
                    same_counts && same_cert,
                    format!("count reports identical: {same_counts}, certificate reports identical: {same_cert}"),
                )
            }
            (a, b) => verdict(false, format!("rerun failed: {:?} {:?}", a.err(), b.err())),
        }
    });

    if all {
        println!("acceptance: all criteria PASS");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria FAIL");
        ExitCode::FAILURE
    }
}

mod erased {
    use serde::Serialize;

    pub trait Json {
        fn to_json(&self) -> String;
    }

    impl<T: Serialize> Json for T {
        fn to_json(&self) -> String {
            serde_json::to_string(self).expect("report serializes")
        }
    }
}
