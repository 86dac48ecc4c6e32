//! Multiprecision evaluation of `θ`, `θ′`, `u` and `(q;q)_n`, contour
//! counting of the zeros of `θ(q, ·)` and Newton zero finding.
//!
//! Truncation decisions compare `log2` magnitudes, which are cheap to read
//! off a [`BigFloat`]; the arithmetic itself runs at the context precision
//! plus guard bits.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use astro_float::{BigFloat, Consts};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mp::{self, MpComplex, RM};
use crate::qseries::QSeries;
use crate::{Error, Extent, Result};

/// Below this `|q|` the zeros of `θ` are seeded directly from `-q^{-ℓ}`.
pub const SEEDING_REGIME: f64 = 0.108;
/// Ceiling for automatic precision escalation.
pub const MAX_BITS: usize = 4096;
const GUARD_BITS: usize = 32;
const FIRST_QUADRATURE: usize = 256;
const MAX_QUADRATURE: usize = 1 << 20;
const INTEGER_TOLERANCE: f64 = 1e-3;
/// `log2(1e-8)`: samples this far below the largest one flag a zero near the contour.
const NEAR_CONTOUR_LOG2: f64 = -26.575_424_759_098_9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub mantissa_bits: usize,
    /// Relative truncation tolerance of series and products.
    pub eval_tolerance: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            mantissa_bits: 256,
            eval_tolerance: 1e-30,
        }
    }
}

impl PrecisionContext {
    pub fn new(mantissa_bits: usize, eval_tolerance: f64) -> Result<Self> {
        if mantissa_bits < 64 {
            return Err(Error::OutOfDomain {
                name: "mantissa_bits",
                value: mantissa_bits as f64,
                domain: "[64, inf)",
            });
        }
        if eval_tolerance.is_nan() || eval_tolerance <= 0.0 {
            return Err(Error::OutOfDomain {
                name: "eval_tolerance",
                value: eval_tolerance,
                domain: "(0, inf)",
            });
        }
        Ok(PrecisionContext {
            mantissa_bits,
            eval_tolerance,
        })
    }

    pub fn with_bits(mantissa_bits: usize) -> Result<Self> {
        Self::new(mantissa_bits, Self::default().eval_tolerance)
    }

    /// Same tolerance at twice the precision, or `None` past [`MAX_BITS`].
    pub fn escalated(&self) -> Option<Self> {
        let bits = self.mantissa_bits * 2;
        (bits <= MAX_BITS).then_some(PrecisionContext {
            mantissa_bits: bits,
            ..*self
        })
    }

    fn work(&self) -> usize {
        self.mantissa_bits + GUARD_BITS
    }

    fn tol_log2(&self) -> f64 {
        libm::log2(self.eval_tolerance)
    }
}

/// A point `(q, z)` with `|q| < 1`.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub q: MpComplex,
    pub z: MpComplex,
}

impl EvalPoint {
    pub fn new(q: Complex64, z: Complex64, ctx: &PrecisionContext) -> Result<Self> {
        Self::from_mp(MpComplex::from_c64(q, ctx.work()), MpComplex::from_c64(z, ctx.work()))
    }

    pub fn from_mp(q: MpComplex, z: MpComplex) -> Result<Self> {
        check_unit_disk(&q)?;
        Ok(EvalPoint { q, z })
    }
}

fn check_unit_disk(q: &MpComplex) -> Result<()> {
    let n = q.norm_sqr(128);
    if n.cmp(&mp::real(1.0, 64)).is_some_and(|c| c >= 0) {
        return Err(Error::OutOfDomain {
            name: "|q|",
            value: mp::to_f64(&n.sqrt(64, RM)),
            domain: "[0, 1)",
        });
    }
    Ok(())
}

fn check_punctured_disk(q: &MpComplex) -> Result<()> {
    check_unit_disk(q)?;
    if q.is_zero() {
        return Err(Error::OutOfDomain {
            name: "|q|",
            value: 0.0,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

struct SeriesEval {
    value: MpComplex,
    derivative: MpComplex,
    /// `log2` of the largest term of the value series.
    max_term_log2: f64,
}

/// `θ` and (optionally) `θ′` by direct summation.
///
/// Term `j` is `t_j = s_j·z` with `s_j = q^{j(j+1)/2} z^{j-1}` and
/// `s_{j+1} = s_j·q^{j+1}·z`. Once the ratio `|q^{j+1} z|` drops below
/// `1/4` every later ratio is smaller, so the tail is at most twice the
/// first omitted term (also for the derivative terms `j·s_j`).
fn theta_series(q: &MpComplex, z: &MpComplex, ctx: &PrecisionContext, derivative: bool) -> SeriesEval {
    let p = ctx.work();
    let tol = ctx.tol_log2();
    let mut value = MpComplex::one(p);
    let mut deriv = MpComplex::zero(p);
    let mut max_term = 0.0f64;
    let mut max_dterm = f64::NEG_INFINITY;
    let log_z = z.log2_abs_approx();
    let mut s = q.clone();
    let mut q_pow = q.clone();
    let mut j: u64 = 1;
    loop {
        let log_s = s.log2_abs_approx();
        if log_s == f64::NEG_INFINITY {
            break;
        }
        let t = s.mul(z, p);
        value = value.add(&t, p);
        max_term = max_term.max(log_s + log_z);
        if derivative {
            deriv = deriv.add(&s.scale(&mp::from_u64(j, p), p), p);
            max_dterm = max_dterm.max(log_s + libm::log2(j as f64));
        }
        q_pow = q_pow.mul(q, p);
        let w = q_pow.mul(z, p);
        s = s.mul(&w, p);
        j += 1;

        let log_w = w.log2_abs_approx();
        if log_w < -2.0 {
            let next = s.log2_abs_approx();
            let floor = max_term - p as f64;
            let ref_value = value.log2_abs_approx().max(floor);
            let value_done = next + log_z + 1.0 < ref_value + tol;
            let deriv_done = !derivative || {
                let ref_deriv = deriv.log2_abs_approx().max(max_dterm - p as f64);
                next + libm::log2(j as f64) + 1.0 < ref_deriv + tol
            };
            if value_done && deriv_done {
                break;
            }
        }
    }
    SeriesEval {
        value,
        derivative: deriv,
        max_term_log2: max_term,
    }
}

/// `θ(q, z) = Σ_{j≥0} q^{j(j+1)/2} z^j`.
pub fn theta_eval(pt: &EvalPoint, ctx: &PrecisionContext) -> MpComplex {
    theta_series(&pt.q, &pt.z, ctx, false).value.round(ctx.mantissa_bits)
}

/// `∂θ/∂z = Σ_{j≥1} j q^{j(j+1)/2} z^{j-1}`.
pub fn theta_prime_eval(pt: &EvalPoint, ctx: &PrecisionContext) -> MpComplex {
    theta_series(&pt.q, &pt.z, ctx, true).derivative.round(ctx.mantissa_bits)
}

/// `u(q, z) = Π_{ν≥1}(1 + q^ν z)`.
///
/// Stops once `Σ_{μ>ν}|q^μ z| = |q^{ν+1} z|/(1-|q|)` is below the tolerance;
/// since `|log(1+w)| ≤ 2|w|` for small `w`, the omitted factors change the
/// product by a relative amount of the same order.
pub fn u_eval(pt: &EvalPoint, ctx: &PrecisionContext) -> MpComplex {
    u_product(&pt.q, &pt.z, ctx).0.round(ctx.mantissa_bits)
}

fn u_product(q: &MpComplex, z: &MpComplex, ctx: &PrecisionContext) -> (MpComplex, usize) {
    let p = ctx.work();
    if q.is_zero() {
        return (MpComplex::one(p), 0);
    }
    let tol = ctx.tol_log2();
    let abs_q = mp::to_f64(&q.abs(64));
    let log_gap = libm::log2(1.0 - abs_q);
    let log_q = q.log2_abs_approx();
    let mut prod = MpComplex::one(p);
    let mut w = q.mul(z, p);
    let mut factors = 0;
    loop {
        if w.is_zero() {
            break;
        }
        prod = prod.mul(&MpComplex::one(p).add(&w, p), p);
        factors += 1;
        w = w.mul(q, p);
        if w.log2_abs_approx() + 1.0 - log_gap < tol {
            break;
        }
        if log_q == f64::NEG_INFINITY {
            break;
        }
    }
    (prod, factors)
}

/// `(q;q)_j = Π_{ℓ=1}^{j}(1 - q^ℓ)`; the infinite product stops once
/// `|q|^{L+1}/(1-|q|)` is below the tolerance.
pub fn pochhammer_num(q: &MpComplex, j: Extent, ctx: &PrecisionContext) -> MpComplex {
    let p = ctx.work();
    let mut prod = MpComplex::one(p);
    let mut q_pow = q.clone();
    let tol = ctx.tol_log2();
    let log_gap = libm::log2(1.0 - mp::to_f64(&q.abs(64)).min(1.0 - 1e-300));
    let mut ell = 1usize;
    loop {
        match j {
            Extent::Finite(k) if ell > k => break,
            Extent::Infinite if q_pow.log2_abs_approx() - log_gap < tol => break,
            _ => {}
        }
        prod = prod.mul(&MpComplex::one(p).sub(&q_pow, p), p);
        q_pow = q_pow.mul(q, p);
        ell += 1;
    }
    prod.round(ctx.mantissa_bits)
}

/// `U_{j,n}(q) = (1 - Π_{ℓ=n+1}^{j}(1-q^ℓ))/(q;q)_j` for `j > n`, from the
/// finite closed form.
pub fn ujn_eval(q: &MpComplex, j: usize, n: usize, ctx: &PrecisionContext) -> Result<MpComplex> {
    if j <= n {
        return Err(Error::InvalidIndex("need j > n"));
    }
    let p = ctx.work();
    let (head, tail) = split_pochhammer(q, n, j, p);
    let one = MpComplex::one(p);
    Ok(one.sub(&tail, p).div(&head.mul(&tail, p), p))
}

/// `Ũ_{j,n}(q) = (Π_{ℓ=j+1}^{n}(1-q^ℓ) - 1)/(q;q)_n` for `j < n`.
pub fn utilde_eval(q: &MpComplex, j: usize, n: usize, ctx: &PrecisionContext) -> Result<MpComplex> {
    if j >= n {
        return Err(Error::InvalidIndex("need j < n"));
    }
    let p = ctx.work();
    let (head, tail) = split_pochhammer(q, j, n, p);
    let one = MpComplex::one(p);
    Ok(tail.sub(&one, p).div(&head.mul(&tail, p), p))
}

/// `((q;q)_a, Π_{ℓ=a+1}^{b}(1-q^ℓ))`.
fn split_pochhammer(q: &MpComplex, a: usize, b: usize, p: usize) -> (MpComplex, MpComplex) {
    let one = MpComplex::one(p);
    let mut head = one.clone();
    let mut tail = one.clone();
    let mut q_pow = q.clone();
    for ell in 1..=b {
        let f = one.sub(&q_pow, p);
        if ell <= a {
            head = head.mul(&f, p);
        } else {
            tail = tail.mul(&f, p);
        }
        q_pow = q_pow.mul(q, p);
    }
    (head, tail)
}

/// Horner evaluation of a truncated series (no tail estimate).
pub fn eval_qseries(s: &QSeries, q: &MpComplex, ctx: &PrecisionContext) -> MpComplex {
    let p = ctx.work();
    let mut acc = MpComplex::zero(p);
    for c in s.coeffs().iter().rev() {
        let c = crate::interval::Interval::from_bigint(c, p);
        acc = acc.mul(q, p).add(&MpComplex::from_real(c.lo().clone(), p), p);
    }
    acc.round(ctx.mantissa_bits)
}

/// `|q|^{-n-1/2}`, the radius of the `n`-th counting disk.
pub fn theorem_radius(q: &MpComplex, n: usize, ctx: &PrecisionContext) -> BigFloat {
    let p = ctx.work();
    let a = q.abs(p);
    let scale = a.powi(n, p, RM).mul(&a.sqrt(p, RM), p, RM);
    mp::real(1.0, p).div(&scale, p, RM)
}

/// Equispaced points `ω_k = e^{2πik/K}`.
#[derive(Clone, Debug)]
pub struct UnitCircle {
    roots: Vec<MpComplex>,
}

impl UnitCircle {
    pub fn new(points: usize, ctx: &PrecisionContext) -> Self {
        let p = ctx.work();
        let mut cc = Consts::new().expect("constant cache");
        let one = mp::real(1.0, p);
        let roots = (0..points)
            .map(|k| MpComplex::root_of_unity_scaled(&one, k, points, p, &mut cc))
            .collect();
        UnitCircle { roots }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn point(&self, k: usize) -> &MpComplex {
        &self.roots[k]
    }
}

/// Outcome of an argument-principle count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCount {
    pub count: i64,
    pub radius: f64,
    /// Quadrature points of the accepted estimate.
    pub points: usize,
    /// Distance of the quadrature value from `count`.
    pub residual: f64,
    pub integral: Complex64,
    /// `min |θ| / max |θ|` over the final sample set.
    pub min_to_max: f64,
    pub precision_bits: usize,
}

/// Number of zeros of `θ(q, ·)` in `|z| < radius`.
pub fn count_zeros(q: Complex64, radius: f64, ctx: &PrecisionContext) -> Result<ZeroCount> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfDomain {
            name: "radius",
            value: radius,
            domain: "(0, inf)",
        });
    }
    let qm = MpComplex::from_c64(q, ctx.work());
    count_zeros_mp(&qm, &mp::real(radius, ctx.work()), ctx)
}

/// Number of zeros of `θ(q, ·)` in `|z| < |q|^{-n-1/2}`.
pub fn count_zeros_in_theorem_disk(q: Complex64, n: usize, ctx: &PrecisionContext) -> Result<ZeroCount> {
    let qm = MpComplex::from_c64(q, ctx.work());
    check_punctured_disk(&qm)?;
    count_zeros_mp(&qm, &theorem_radius(&qm, n, ctx), ctx)
}

/// `(1/2πi)∮ θ′/θ dz` by the trapezoidal rule on `K = 256, 512, …` points.
///
/// Each doubling reuses the previous samples. The count is accepted once
/// two successive estimates round to the same integer and the newer one
/// lies within `1e-3` of it.
pub fn count_zeros_mp(q: &MpComplex, radius: &BigFloat, ctx: &PrecisionContext) -> Result<ZeroCount> {
    check_punctured_disk(q)?;
    let mut ctx = *ctx;
    'precision: loop {
        let mut acc = Quadrature::new(q, radius, ctx);
        let mut points = FIRST_QUADRATURE;
        let mut previous: Option<i64> = None;
        for k in 0..points {
            acc.sample(k, points);
        }
        loop {
            let spread = acc.min_log - acc.max_log;
            if spread < NEAR_CONTOUR_LOG2 {
                return Err(Error::ZeroNearContour {
                    radius: mp::to_f64(radius),
                    ratio: libm::exp2(spread),
                });
            }
            if acc.worst_loss > (ctx.mantissa_bits as f64) - 64.0 {
                if let Some(next) = ctx.escalated() {
                    ctx = next;
                    continue 'precision;
                }
            }
            let p = ctx.work();
            let integral = acc.sum.scale(&mp::real(1.0 / points as f64, p), p).to_c64();
            let count = libm::round(integral.re) as i64;
            let residual = (integral - Complex64::new(count as f64, 0.0)).norm();
            if previous == Some(count) && residual < INTEGER_TOLERANCE {
                return Ok(ZeroCount {
                    count,
                    radius: mp::to_f64(radius),
                    points,
                    residual,
                    integral,
                    min_to_max: libm::exp2(spread),
                    precision_bits: ctx.mantissa_bits,
                });
            }
            previous = Some(count);
            if points * 2 > MAX_QUADRATURE {
                return Err(Error::NoConvergence { points });
            }
            for k in (1..2 * points).step_by(2) {
                acc.sample(k, 2 * points);
            }
            points *= 2;
        }
    }
}

struct Quadrature<'a> {
    q: &'a MpComplex,
    radius: &'a BigFloat,
    ctx: PrecisionContext,
    cc: Consts,
    sum: MpComplex,
    min_log: f64,
    max_log: f64,
    worst_loss: f64,
}

impl<'a> Quadrature<'a> {
    fn new(q: &'a MpComplex, radius: &'a BigFloat, ctx: PrecisionContext) -> Self {
        Quadrature {
            q,
            radius,
            ctx,
            cc: Consts::new().expect("constant cache"),
            sum: MpComplex::zero(ctx.work()),
            min_log: f64::INFINITY,
            max_log: f64::NEG_INFINITY,
            worst_loss: 0.0,
        }
    }

    /// Adds `z θ′(z)/θ(z)` at `z = r·e^{2πik/K}`.
    fn sample(&mut self, k: usize, total: usize) {
        let p = self.ctx.work();
        let z = MpComplex::root_of_unity_scaled(self.radius, k, total, p, &mut self.cc);
        let e = theta_series(self.q, &z, &self.ctx, true);
        let lv = e.value.log2_abs_approx();
        self.min_log = self.min_log.min(lv);
        self.max_log = self.max_log.max(lv);
        self.worst_loss = self.worst_loss.max(e.max_term_log2 - lv);
        if !e.value.is_zero() {
            self.sum = self.sum.add(&z.mul(&e.derivative, p).div(&e.value, p), p);
        }
    }
}

/// One zero of `θ(q, ·)` in a [`ZeroReport`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroEntry {
    /// Seed index `ℓ` (the zero started near `-q^{-ℓ}`). Only canonical for
    /// `|q| ≤ 0.108`; beyond that it is the label carried along the path.
    pub index: usize,
    pub location: Complex64,
    pub multiplicity: usize,
    /// `|θ(q, z)|` at the polished location.
    pub residual: f64,
    /// Residual divided by the largest term of the series at `z`.
    pub scaled_residual: f64,
    #[serde(skip)]
    pub precise: Option<MpComplex>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZeroReport {
    pub q: Complex64,
    pub requested: usize,
    /// `|q|^{-L-1/2}` for `L` requested zeros.
    pub disk_radius: f64,
    pub zeros: Vec<ZeroEntry>,
    /// Sum of multiplicities of the zeros inside the disk.
    pub inside_disk: usize,
    pub contour_count: Option<i64>,
    pub contour_error: Option<String>,
    pub quadrature_points: usize,
    /// `inside_disk == contour_count`.
    pub cross_check: bool,
    pub continuation_steps: usize,
    pub precision_bits: usize,
}

impl ZeroReport {
    /// Every residual is below the tolerance relative to the local term size.
    pub fn residuals_within(&self, tolerance: f64) -> bool {
        self.zeros.iter().all(|z| z.scaled_residual < tolerance)
    }

    /// Sum of multiplicities of the zeros with `|z| < radius`.
    pub fn count_inside(&self, radius: f64) -> usize {
        self.zeros
            .iter()
            .filter(|z| z.location.norm() < radius)
            .map(|z| z.multiplicity)
            .sum()
    }
}

const NEWTON_MAX_ITER: usize = 200;
const CONTINUATION_MAX_ITER: usize = 50;
const DUPLICATE_RELATIVE: f64 = 1e-10;
const CONTINUATION_START: f64 = 0.1;
const CONTINUATION_STEP: f64 = 0.01;
const CONTINUATION_MIN_STEP: f64 = 1e-4;

fn newton(q: &MpComplex, seed: &MpComplex, ctx: &PrecisionContext, max_iter: usize) -> Option<MpComplex> {
    let p = ctx.work();
    let stop = -((ctx.mantissa_bits as f64) - 16.0);
    let mut z = seed.clone();
    for _ in 0..max_iter {
        let e = theta_series(q, &z, ctx, true);
        if e.value.is_zero() {
            return Some(z);
        }
        if e.derivative.is_zero() {
            return None;
        }
        let dz = e.value.div(&e.derivative, p);
        z = z.sub(&dz, p);
        let rel = dz.log2_abs_approx() - z.log2_abs_approx();
        if rel.is_nan() {
            return None;
        }
        if rel < stop {
            return Some(z);
        }
    }
    None
}

fn seeds(q: &MpComplex, count: usize, ctx: &PrecisionContext) -> Vec<MpComplex> {
    let p = ctx.work();
    let inv = q.recip(p);
    (1..=count as u64).map(|ell| inv.powi(ell, p).neg()).collect()
}

fn relative_distance(a: &MpComplex, b: &MpComplex, p: usize) -> f64 {
    libm::exp2(a.sub(b, p).log2_abs_approx() - a.log2_abs_approx())
}

/// Newton from every seed; `None` if any run fails, jumps away from its
/// predictor or lands on a zero already claimed.
fn polish_all(q: &MpComplex, predictors: &[MpComplex], ctx: &PrecisionContext, max_iter: usize) -> Option<Vec<MpComplex>> {
    let p = ctx.work();
    let mut out: Vec<MpComplex> = Vec::with_capacity(predictors.len());
    for pred in predictors {
        let z = newton(q, pred, ctx, max_iter)?;
        if relative_distance(pred, &z, p) > 0.5 {
            return None;
        }
        if out.iter().any(|o| relative_distance(o, &z, p) < 1e-6) {
            return None;
        }
        out.push(z);
    }
    Some(out)
}

/// The first `count` zeros of `θ(q, ·)`.
///
/// For `|q| ≤ 0.108` Newton starts from `-q^{-ℓ}`. Otherwise zeros are found
/// at `0.1·q/|q|` and carried along the ray to `q` in steps of `0.01` in
/// `|q|`, halved when a step fails, down to `1e-4`. Every zero is finally
/// checked against an argument-principle count on `|z| = |q|^{-L-1/2}`.
pub fn find_zeros(q: Complex64, count: usize, ctx: &PrecisionContext) -> Result<ZeroReport> {
    if count == 0 {
        return Err(Error::InvalidIndex("need at least one zero"));
    }
    let p = ctx.work();
    let qm = MpComplex::from_c64(q, p);
    check_punctured_disk(&qm)?;
    let modulus = q.norm();
    let mut steps = 0;
    let zeros = if modulus <= SEEDING_REGIME {
        let start = seeds(&qm, count, ctx);
        let mut found = Vec::with_capacity(count);
        for (i, s) in start.iter().enumerate() {
            found.push(newton(&qm, s, ctx, NEWTON_MAX_ITER).ok_or(Error::NewtonDiverged { seed: i + 1 })?);
        }
        found
    } else {
        let dir = q / modulus;
        let mut s = CONTINUATION_START;
        let mut q_cur = MpComplex::from_c64(dir * s, p);
        let mut zeros = Vec::with_capacity(count);
        for (i, seed) in seeds(&q_cur, count, ctx).iter().enumerate() {
            zeros.push(newton(&q_cur, seed, ctx, NEWTON_MAX_ITER).ok_or(Error::NewtonDiverged { seed: i + 1 })?);
        }
        let mut h = CONTINUATION_STEP;
        while s < modulus {
            let s_next = (s + h).min(modulus);
            let q_next = if s_next == modulus {
                MpComplex::from_c64(q, p)
            } else {
                MpComplex::from_c64(dir * s_next, p)
            };
            // leading-order motion z_ℓ ∝ |q|^{-ℓ}
            let ratio = q_cur.abs(p).div(&q_next.abs(p), p, RM);
            let predictors: Vec<MpComplex> = zeros
                .iter()
                .enumerate()
                .map(|(i, z)| z.scale(&ratio.powi(i + 1, p, RM), p))
                .collect();
            match polish_all(&q_next, &predictors, ctx, CONTINUATION_MAX_ITER) {
                Some(next) => {
                    zeros = next;
                    s = s_next;
                    q_cur = q_next;
                    steps += 1;
                    h = (h * 2.0).min(CONTINUATION_STEP);
                }
                None => {
                    h /= 2.0;
                    if h < CONTINUATION_MIN_STEP {
                        return Err(Error::ContinuationStalled { modulus: s });
                    }
                }
            }
        }
        zeros
    };

    let mut entries: Vec<ZeroEntry> = Vec::with_capacity(zeros.len());
    for (i, z) in zeros.into_iter().enumerate() {
        if let Some(e) = entries
            .iter_mut()
            .find(|e| relative_distance(e.precise.as_ref().expect("kept"), &z, p) < DUPLICATE_RELATIVE)
        {
            e.multiplicity += 1;
            continue;
        }
        let e = theta_series(&qm, &z, ctx, false);
        let lr = e.value.log2_abs_approx();
        entries.push(ZeroEntry {
            index: i + 1,
            location: z.to_c64(),
            multiplicity: 1,
            residual: libm::exp2(lr),
            scaled_residual: libm::exp2(lr - e.max_term_log2),
            precise: Some(z),
        });
    }

    let radius = theorem_radius(&qm, count, ctx);
    let radius_f = mp::to_f64(&radius);
    let inside = entries
        .iter()
        .filter(|e| {
            let z = e.precise.as_ref().expect("kept");
            z.abs(p).cmp(&radius).is_some_and(|c| c < 0)
        })
        .map(|e| e.multiplicity)
        .sum();
    let (contour_count, contour_error, quadrature_points) = match count_zeros_mp(&qm, &radius, ctx) {
        Ok(c) => (Some(c.count), None, c.points),
        Err(e) => (None, Some(e.to_string()), 0),
    };
    Ok(ZeroReport {
        q,
        requested: count,
        disk_radius: radius_f,
        cross_check: contour_count == Some(inside as i64),
        zeros: entries,
        inside_disk: inside,
        contour_count,
        contour_error,
        quadrature_points,
        continuation_steps: steps,
        precision_bits: ctx.mantissa_bits,
    })
}

/// Smallest sampled `|u(q, z)|` on `|z| = |q|^{-n-1/2}`.
#[derive(Clone, Debug)]
pub struct CircleMin {
    pub value: BigFloat,
    /// Sample index `k` of the minimizer (angle `2πk/K`).
    pub argmin: usize,
    pub samples: usize,
    /// Bound on the relative error of `value`.
    pub rel_error: f64,
}

impl CircleMin {
    pub fn value_f64(&self) -> f64 {
        mp::to_f64(&self.value)
    }
}

pub fn circle_min_modulus_u(q: Complex64, n: usize, samples: usize, ctx: &PrecisionContext) -> Result<CircleMin> {
    let circle = UnitCircle::new(samples.max(16), ctx);
    circle_min_modulus_u_on(q, n, &circle, ctx)
}

/// As [`circle_min_modulus_u`] with precomputed sample directions.
pub fn circle_min_modulus_u_on(q: Complex64, n: usize, circle: &UnitCircle, ctx: &PrecisionContext) -> Result<CircleMin> {
    if n == 0 {
        return Err(Error::InvalidIndex("need n >= 1"));
    }
    if circle.len() < 16 {
        return Err(Error::InvalidIndex("need at least 16 samples"));
    }
    let p = ctx.work();
    let qm = MpComplex::from_c64(q, p);
    check_punctured_disk(&qm)?;
    let radius = theorem_radius(&qm, n, ctx);
    let mut best: Option<(BigFloat, usize)> = None;
    let mut max_factors = 0;
    for k in 0..circle.len() {
        let z = circle.point(k).scale(&radius, p);
        let (u, factors) = u_product(&qm, &z, ctx);
        max_factors = max_factors.max(factors);
        let m = u.abs(p);
        if best.as_ref().is_none_or(|(b, _)| m.cmp(b).is_some_and(|c| c < 0)) {
            best = Some((m, k));
        }
    }
    let (value, argmin) = best.expect("at least 16 samples");
    let rounding = (max_factors as f64 + 8.0) * libm::exp2(-(ctx.mantissa_bits as f64));
    Ok(CircleMin {
        value,
        argmin,
        samples: circle.len(),
        rel_error: 2.0 * ctx.eval_tolerance + rounding,
    })
}

/// `|u - θ/(q;q)_n| / |u|` at every sample of `|z| = |q|^{-n-1/2}`.
pub(crate) fn rouche_ratios(q: Complex64, n: usize, circle: &UnitCircle, ctx: &PrecisionContext) -> Result<Vec<f64>> {
    let p = ctx.work();
    let qm = MpComplex::from_c64(q, p);
    check_punctured_disk(&qm)?;
    let radius = theorem_radius(&qm, n, ctx);
    let poch = pochhammer_num(&qm, Extent::Finite(n), ctx);
    let mut out = Vec::with_capacity(circle.len());
    for k in 0..circle.len() {
        let z = circle.point(k).scale(&radius, p);
        let (u, _) = u_product(&qm, &z, ctx);
        let theta = theta_series(&qm, &z, ctx, false);
        let lu = u.log2_abs_approx();
        if lu == f64::NEG_INFINITY || lu < theta.max_term_log2 - (ctx.mantissa_bits as f64) + 16.0 {
            return Err(Error::Degenerate);
        }
        let diff = u.sub(&theta.value.div(&poch, p), p);
        out.push(libm::exp2(diff.log2_abs_approx() - lu).min(f64::MAX));
        let _ = &diff;
    }
    Ok(out)
}
