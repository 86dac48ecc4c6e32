//! Certified evaluation of the bound functions `P_k`, `U`, `R`, `T`, `M`
//! and the threshold `n₀(δ₀, δ)` beyond which `θ(q, ·)` has exactly `n`
//! zeros in `|z| < |q|^{-n-1/2}` for every `q` in the annulus.
//!
//! Everything here runs on [`Interval`]s. A certificate inequality counts as
//! satisfied only when the enclosures are separated by more than twice their
//! combined width; otherwise the precision is doubled, up to 4096 bits.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, PrecisionContext, UnitCircle};
use crate::interval::Interval;
use crate::mp::{self, MpComplex};
use crate::qseries;
use crate::{Error, Extent, Result};

pub const DEFAULT_BITS: usize = 256;
const PRECISION_LADDER: [usize; 5] = [256, 512, 1024, 2048, 4096];
/// Largest coefficient order used on the series route to `U`.
pub const MAX_U_ORDER: usize = 1000;
/// Largest `n` scanned by [`certify_threshold`].
pub const THRESHOLD_CAP: usize = 1_000_000;
/// Window `n₀..=n₀+MONOTONE_WINDOW` on which monotonicity in `n` is checked.
pub const MONOTONE_WINDOW: usize = 10;

/// The closed annulus `δ₀ ≤ |q| ≤ δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusSpec {
    pub delta0: f64,
    pub delta: f64,
}

impl AnnulusSpec {
    pub fn new(delta0: f64, delta: f64) -> Result<Self> {
        if !(0.0 < delta0 && delta0 < delta && delta < 1.0) {
            return Err(Error::InvalidAnnulus { delta0, delta });
        }
        Ok(AnnulusSpec { delta0, delta })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.delta0, self.delta).map(|_| ())
    }
}

/// An enclosure `[lo, hi]` with its midpoint and half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub value: f64,
    /// `max(value - lo, hi - value)`.
    pub error: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl From<&Interval> for Enclosure {
    fn from(iv: &Interval) -> Self {
        let (lo, hi, value) = (iv.lo_f64(), iv.hi_f64(), iv.mid_f64());
        Enclosure {
            value,
            error: (value - lo).max(hi - value),
            lo,
            hi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSuite {
    pub x: f64,
    /// `P_∞(x) = Π_{ℓ≥0}(1 - x^{ℓ+1/2})`.
    pub p_inf: Enclosure,
    /// `U(x) = (Π_{ℓ≥1}(1+x^ℓ) - 1)/(x;x)_∞`.
    pub u_val: Enclosure,
    /// `R(x) = Σ_{s≥1} x^{s²/2}`.
    pub r_val: Enclosure,
    /// `T(x) = (Π_{ℓ≥1}(1+x^ℓ) + 1)/(x;x)_∞`.
    pub t_val: Enclosure,
    /// `M(x) = 1/(x;x)_∞`.
    pub m_val: Enclosure,
    /// Coefficient order used on the series route to `U`.
    pub u_order: usize,
    pub precision_bits: usize,
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain {
            name,
            value: x,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

fn one(prec: usize) -> Interval {
    Interval::point(1.0, prec)
}

/// Terms below this are dropped and covered by an explicit tail bound.
fn negligible(prec: usize) -> Interval {
    Interval::exact(mp::pow2(-(prec as i32) - 8, prec), prec)
}

/// `[0, hi]`.
fn zero_to(hi: &Interval) -> Interval {
    Interval::from_bounds(mp::real(0.0, hi.prec()), hi.hi().clone(), hi.prec())
}

fn p_iv(x: &Interval, k: Extent) -> Interval {
    let prec = x.prec();
    let eps = negligible(prec);
    let mut term = x.sqrt();
    let mut prod = one(prec);
    let mut ell = 0usize;
    loop {
        match k {
            Extent::Finite(k) if ell > k => return prod,
            Extent::Infinite if term.certainly_lt(&eps) => break,
            _ => {}
        }
        prod = prod.mul(&one(prec).sub(&term));
        term = term.mul(x);
        ell += 1;
    }
    // Π(1 - a_i) ≥ 1 - Σ a_i
    let tail = term.div(&one(prec).sub(x));
    prod.mul(&one(prec).sub(&zero_to(&tail)))
}

/// `(x;x)_∞`.
fn poch_iv(x: &Interval) -> Interval {
    let prec = x.prec();
    let eps = negligible(prec);
    let mut term = x.clone();
    let mut prod = one(prec);
    while !term.certainly_lt(&eps) {
        prod = prod.mul(&one(prec).sub(&term));
        term = term.mul(x);
    }
    let tail = term.div(&one(prec).sub(x));
    prod.mul(&one(prec).sub(&zero_to(&tail)))
}

/// `Π_{ℓ≥1}(1 + x^ℓ)`.
fn plus_iv(x: &Interval) -> Interval {
    let prec = x.prec();
    let eps = negligible(prec);
    let mut term = x.clone();
    let mut prod = one(prec);
    while !term.certainly_lt(&eps) {
        prod = prod.mul(&one(prec).add(&term));
        term = term.mul(x);
    }
    // Π(1 + a_i) ≤ 1/Π(1 - a_i) ≤ 1/(1 - Σ a_i)
    let tail = term.div(&one(prec).sub(x));
    let cap = one(prec).div(&one(prec).sub(&tail));
    prod.mul(&Interval::from_bounds(mp::real(1.0, prec), cap.hi().clone(), prec))
}

/// `Σ_{s≥m} x^{s²/2}` for `m ≥ 1`; consecutive terms have ratio `x^{s+1/2}`.
fn r_tail_iv(x: &Interval, m: usize) -> Interval {
    let prec = x.prec();
    let eps = negligible(prec);
    let sx = x.sqrt();
    let mut s = m.max(1);
    let mut term = sx.powi((s * s) as u64);
    let mut sum = Interval::point(0.0, prec);
    while !term.certainly_lt(&eps) {
        sum = sum.add(&term);
        term = term.mul(&x.powi(s as u64)).mul(&sx);
        s += 1;
    }
    // later ratios are at most x^{s+1/2}
    let ratio = x.powi(s as u64).mul(&sx);
    let tail = term.div(&one(prec).sub(&ratio));
    sum.add(&zero_to(&tail))
}

/// `Σ_{s=1}^{k} x^{s²/2}`, exact sum of enclosed terms.
fn r_head_iv(x: &Interval, k: usize) -> Interval {
    let prec = x.prec();
    let sx = x.sqrt();
    let mut sum = Interval::point(0.0, prec);
    let mut term = sx.clone();
    for s in 1..=k {
        sum = sum.add(&term);
        term = term.mul(&x.powi(s as u64)).mul(&sx);
    }
    sum
}

fn t_iv(x: &Interval) -> Interval {
    plus_iv(x).add(&one(x.prec())).div(&poch_iv(x))
}

fn u_product_iv(x: &Interval) -> Interval {
    plus_iv(x).sub(&one(x.prec())).div(&poch_iv(x))
}

/// `Σ_{ν≤N} u_ν x^ν` plus a tail bound. Since `u_ν y^ν ≤ U(y)` for
/// `y = √x`, the tail is at most `U(√x)·√x^{N+1}/(1 - √x)`.
fn u_series_iv(x: &Interval) -> (Interval, usize) {
    let prec = x.prec();
    let sx = x.sqrt();
    let per_term = -libm::log2(sx.hi_f64());
    let order = (libm::ceil(prec as f64 / per_term) as usize).clamp(1, MAX_U_ORDER);
    let coeffs = qseries::series_u(order);
    let mut acc = Interval::point(0.0, prec);
    for c in coeffs.coeffs().iter().rev() {
        acc = acc.mul(x).add(&Interval::from_bigint(c, prec));
    }
    let tail = u_product_iv(&sx).mul(&sx.powi(order as u64 + 1)).div(&one(prec).sub(&sx));
    (acc.widen_up(tail.hi()), order)
}

struct SuiteIv {
    p_inf: Interval,
    u: Interval,
    r: Interval,
    t: Interval,
    m: Interval,
    u_order: usize,
}

fn suite_iv(x: f64, prec: usize) -> SuiteIv {
    let xi = Interval::point(x, prec);
    let (series, u_order) = u_series_iv(&xi);
    let product = u_product_iv(&xi);
    let u = series.intersect(&product).expect("series and product enclosures of U are disjoint");
    SuiteIv {
        p_inf: p_iv(&xi, Extent::Infinite),
        u,
        r: r_tail_iv(&xi, 1),
        t: t_iv(&xi),
        m: one(prec).div(&poch_iv(&xi)),
        u_order,
    }
}

impl SuiteIv {
    fn view(&self, x: f64, prec: usize) -> BoundSuite {
        BoundSuite {
            x,
            p_inf: (&self.p_inf).into(),
            u_val: (&self.u).into(),
            r_val: (&self.r).into(),
            t_val: (&self.t).into(),
            m_val: (&self.m).into(),
            u_order: self.u_order,
            precision_bits: prec,
        }
    }
}

/// `P_k(x) = Π_{ℓ=0}^{k}(1 - x^{ℓ+1/2})`, or the infinite product.
pub fn eval_p(x: f64, k: Extent) -> Result<Enclosure> {
    eval_p_at(x, k, DEFAULT_BITS)
}

pub fn eval_p_at(x: f64, k: Extent, prec: usize) -> Result<Enclosure> {
    check_unit("x", x)?;
    Ok((&p_iv(&Interval::point(x, prec), k)).into())
}

pub fn eval_bound_suite(x: f64) -> Result<BoundSuite> {
    eval_bound_suite_at(x, DEFAULT_BITS)
}

pub fn eval_bound_suite_at(x: f64, prec: usize) -> Result<BoundSuite> {
    check_unit("x", x)?;
    Ok(suite_iv(x, prec).view(x, prec))
}

/// `U(x)` from the integer coefficients alone (no intersection).
pub fn u_series_route(x: f64) -> Result<(Enclosure, usize)> {
    check_unit("x", x)?;
    let (iv, order) = u_series_iv(&Interval::point(x, DEFAULT_BITS));
    Ok(((&iv).into(), order))
}

/// `U(x)` from the defining products.
pub fn u_product_route(x: f64) -> Result<Enclosure> {
    check_unit("x", x)?;
    Ok((&u_product_iv(&Interval::point(x, DEFAULT_BITS))).into())
}

/// `Σ_{s≥m} δ^{s²/2}`.
pub fn r_tail(delta: f64, m: usize) -> Result<Enclosure> {
    check_unit("delta", delta)?;
    if m == 0 {
        return Err(Error::InvalidIndex("need m >= 1"));
    }
    Ok((&r_tail_iv(&Interval::point(delta, DEFAULT_BITS), m)).into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Holds,
    Fails,
    Ambiguous,
}

/// `lhs < rhs` (or `≤` when `strict` is false), demanding a gap of twice
/// the combined widths for a strict pass.
fn compare(lhs: &Interval, rhs: &Interval, strict: bool) -> Verdict {
    let prec = lhs.prec().max(rhs.prec());
    let gap = rhs.lo().sub(lhs.hi(), prec, mp::RM);
    let slack = mp::ldexp(&lhs.width().add(&rhs.width(), prec, mp::RM), 1);
    let separated = gap.cmp(&slack).is_some_and(|c| c > 0);
    if strict && separated || !strict && lhs.certainly_le(rhs) {
        Verdict::Holds
    } else if rhs.certainly_le(lhs) && (strict || rhs.certainly_lt(lhs)) {
        Verdict::Fails
    } else {
        Verdict::Ambiguous
    }
}

fn target_iv(delta: &Interval) -> Interval {
    let p = p_iv(delta, Extent::Infinite);
    p.mul(&p).ldexp(-2)
}

fn z2_iv(delta: &Interval, m: usize) -> Interval {
    t_iv(delta).mul(&r_tail_iv(delta, m))
}

fn choose_m_at(delta: &Interval) -> Option<usize> {
    let target = target_iv(delta);
    let t = t_iv(delta);
    let mut m = 1;
    loop {
        match compare(&t.mul(&r_tail_iv(delta, m)), &target, false) {
            Verdict::Holds => return Some(m),
            Verdict::Fails => m += 1,
            Verdict::Ambiguous => return None,
        }
    }
}

/// Smallest `m ≥ 1` with `T(δ)·Σ_{s≥m} δ^{s²/2} ≤ P_∞(δ)²/4`.
pub fn choose_m(delta: f64) -> Result<usize> {
    check_unit("delta", delta)?;
    for prec in PRECISION_LADDER {
        if let Some(m) = choose_m_at(&Interval::point(delta, prec)) {
            return Ok(m);
        }
    }
    Err(Error::Inseparable {
        what: "tail split condition",
        bits: PRECISION_LADDER[PRECISION_LADDER.len() - 1],
    })
}

/// Enclosures of the three normalized remainder bounds at a given `(m, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTerms {
    pub m: usize,
    pub n: usize,
    /// `δⁿ·U(δ)·R(δ)`.
    pub z1: Enclosure,
    /// `T(δ)·Σ_{s≥m} δ^{s²/2}`.
    pub z2: Enclosure,
    /// `M·((1 + δⁿ/δ₀^{max(0,m-2)})^{m-1} - 1)·Σ_{s=1}^{m-1} δ^{s²/2}`.
    pub z3: Enclosure,
    /// `P_∞(δ)²/4`.
    pub target: Enclosure,
}

struct Fixed {
    delta_n: Interval,
    u_r: Interval,
    m_val: Interval,
    head: Interval,
    shift: Interval,
}

impl Fixed {
    fn new(a: &AnnulusSpec, m: usize, suite: &SuiteIv, prec: usize) -> Self {
        let delta = Interval::point(a.delta, prec);
        let delta0 = Interval::point(a.delta0, prec);
        Fixed {
            delta_n: one(prec),
            u_r: suite.u.mul(&suite.r),
            m_val: suite.m.clone(),
            head: r_head_iv(&delta, m.saturating_sub(1)),
            shift: one(prec).div(&delta0.powi(m.saturating_sub(2) as u64)),
        }
    }

    fn z1(&self) -> Interval {
        self.delta_n.mul(&self.u_r)
    }

    fn z3(&self, m: usize) -> Interval {
        let prec = self.delta_n.prec();
        let base = one(prec).add(&self.delta_n.mul(&self.shift));
        base.powi(m.saturating_sub(1) as u64)
            .sub(&one(prec))
            .mul(&self.m_val)
            .mul(&self.head)
    }
}

/// The three remainder bounds at a given split `m` and degree `n`.
pub fn threshold_terms(annulus: &AnnulusSpec, m: usize, n: usize) -> Result<ThresholdTerms> {
    annulus.validate()?;
    if m == 0 {
        return Err(Error::InvalidIndex("need m >= 1"));
    }
    let prec = DEFAULT_BITS;
    let suite = suite_iv(annulus.delta, prec);
    let mut fixed = Fixed::new(annulus, m, &suite, prec);
    fixed.delta_n = Interval::point(annulus.delta, prec).powi(n as u64);
    let delta = Interval::point(annulus.delta, prec);
    Ok(ThresholdTerms {
        m,
        n,
        z1: (&fixed.z1()).into(),
        z2: (&z2_iv(&delta, m)).into(),
        z3: (&fixed.z3(m)).into(),
        target: (&target_iv(&delta)).into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCertificate {
    pub annulus: AnnulusSpec,
    pub m: usize,
    pub n0: usize,
    pub suite_at_delta: BoundSuite,
    /// Upper bounds at `n = n₀`, normalized by `|q|^{-n²/2}`.
    pub z1_bound: f64,
    pub z2_bound: f64,
    pub z3_bound: f64,
    /// Lower bound of `P_∞(δ)²/4`.
    pub target: f64,
    pub precision_bits: usize,
}

enum Scan {
    Found(usize),
    Ambiguous,
    Capped,
}

fn scan(a: &AnnulusSpec, m: usize, fixed: &mut Fixed, target: &Interval) -> Scan {
    let delta = Interval::point(a.delta, fixed.delta_n.prec());
    for n in 1..=THRESHOLD_CAP {
        fixed.delta_n = fixed.delta_n.mul(&delta);
        let a_cond = compare(&fixed.z1(), target, true);
        let c_cond = compare(&fixed.z3(m), target, true);
        match (a_cond, c_cond) {
            (Verdict::Holds, Verdict::Holds) => return Scan::Found(n),
            (Verdict::Fails, _) | (_, Verdict::Fails) => continue,
            _ => return Scan::Ambiguous,
        }
    }
    Scan::Capped
}

/// Smallest `n₀` such that for all `n ≥ n₀`
/// (a) `δⁿU(δ)R(δ) < P_∞(δ)²/4`,
/// (b) `T(δ)Σ_{s≥m} δ^{s²/2} ≤ P_∞(δ)²/4` (by the choice of `m`),
/// (c) `M((1+δⁿ/δ₀^{max(0,m-2)})^{m-1}-1)Σ_{s=1}^{m-1} δ^{s²/2} < P_∞(δ)²/4`.
///
/// (a) and (c) are scanned from `n = 1` and checked to be nonincreasing on
/// `n₀..=n₀+10`.
pub fn certify_threshold(annulus: &AnnulusSpec) -> Result<ThresholdCertificate> {
    annulus.validate()?;
    let m = choose_m(annulus.delta)?;
    for prec in PRECISION_LADDER {
        let delta = Interval::point(annulus.delta, prec);
        let suite = suite_iv(annulus.delta, prec);
        let target = target_iv(&delta);
        let z2 = z2_iv(&delta, m);
        if compare(&z2, &target, false) != Verdict::Holds {
            continue;
        }
        let mut fixed = Fixed::new(annulus, m, &suite, prec);
        let n0 = match scan(annulus, m, &mut fixed, &target) {
            Scan::Found(n0) => n0,
            Scan::Ambiguous => continue,
            Scan::Capped => return Err(Error::ThresholdCap { cap: THRESHOLD_CAP }),
        };
        let (z1, z3) = (fixed.z1(), fixed.z3(m));
        let mut prev = (z1.clone(), z3.clone());
        for _ in 0..MONOTONE_WINDOW {
            fixed.delta_n = fixed.delta_n.mul(&delta);
            let next = (fixed.z1(), fixed.z3(m));
            let monotone = |a: &Interval, b: &Interval| a.hi().cmp(b.hi()).is_some_and(|c| c <= 0);
            if !monotone(&next.0, &prev.0) || !monotone(&next.1, &prev.1) {
                return Err(Error::Inseparable {
                    what: "monotonicity of the threshold conditions",
                    bits: prec,
                });
            }
            prev = next;
        }
        return Ok(ThresholdCertificate {
            annulus: *annulus,
            m,
            n0,
            suite_at_delta: suite.view(annulus.delta, prec),
            z1_bound: z1.hi_f64(),
            z2_bound: z2.hi_f64(),
            z3_bound: z3.hi_f64(),
            target: target.lo_f64(),
            precision_bits: prec,
        });
    }
    Err(Error::Inseparable {
        what: "threshold conditions",
        bits: PRECISION_LADDER[PRECISION_LADDER.len() - 1],
    })
}

impl ThresholdCertificate {
    /// Re-checks the certificate inequalities on the stored `f64` bounds.
    pub fn conditions_hold(&self) -> bool {
        self.z1_bound < self.target
            && self.z2_bound <= self.target
            && self.z3_bound < self.target
            && self.z1_bound + self.z2_bound + self.z3_bound <= 3.0 * self.target
    }
}

/// Lower bounds for `min |u(q, z)|` on `|z| = |q|^{-n-1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleLowerBound {
    pub n: usize,
    /// `|q|^{-n²/2}·P_{n-1}(|q|)·P_∞(|q|)`.
    pub bound: Enclosure,
    /// `|q|^{-n²/2}·P_∞(|q|)²`.
    pub chained: Enclosure,
}

fn abs_q_iv(q: Complex64, prec: usize) -> Interval {
    let re = Interval::point(q.re, prec);
    let im = Interval::point(q.im, prec);
    re.mul(&re).add(&im.mul(&im)).sqrt()
}

/// `|q|^{-n²/2}` as an interval.
fn circle_scale(x: &Interval, n: usize) -> Interval {
    let sx = x.sqrt();
    sx.powi((n * n) as u64).recip()
}

fn check_q(q: Complex64) -> Result<()> {
    let r = q.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain {
            name: "|q|",
            value: r,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

pub fn u_circle_lower_bound(q: Complex64, n: usize) -> Result<CircleLowerBound> {
    check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidIndex("need n >= 1"));
    }
    let x = abs_q_iv(q, DEFAULT_BITS);
    let scale = circle_scale(&x, n);
    let p_inf = p_iv(&x, Extent::Infinite);
    let bound = scale.mul(&p_iv(&x, Extent::Finite(n - 1))).mul(&p_inf);
    let chained = scale.mul(&p_inf).mul(&p_inf);
    Ok(CircleLowerBound {
        n,
        bound: (&bound).into(),
        chained: (&chained).into(),
    })
}

/// `|q|^{-n²/2}·P_∞(δ)²`, the bound used uniformly over the annulus.
pub fn u_circle_annulus_bound(q: Complex64, n: usize, delta: f64) -> Result<Enclosure> {
    check_q(q)?;
    check_unit("delta", delta)?;
    let x = abs_q_iv(q, DEFAULT_BITS);
    let p = p_iv(&Interval::point(delta, DEFAULT_BITS), Extent::Infinite);
    Ok((&circle_scale(&x, n).mul(&p).mul(&p)).into())
}

/// Largest sampled `|u - θ/(q;q)_n|/|u|` on `|z| = |q|^{-n-1/2}`.
///
/// A witness at the sample points only, not a proof over the circle.
pub fn rouche_margin(q: Complex64, n: usize, samples: usize, ctx: &PrecisionContext) -> Result<f64> {
    if samples < 16 {
        return Err(Error::InvalidIndex("need at least 16 samples"));
    }
    rouche_margin_on(q, n, &UnitCircle::new(samples, ctx), ctx)
}

/// As [`rouche_margin`] with precomputed sample directions; escalates the
/// precision when `|u|` drowns in rounding noise.
pub fn rouche_margin_on(q: Complex64, n: usize, circle: &UnitCircle, ctx: &PrecisionContext) -> Result<f64> {
    check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidIndex("need n >= 1"));
    }
    let mut ctx = *ctx;
    let mut circle = circle.clone();
    loop {
        match analytic::rouche_ratios(q, n, &circle, &ctx) {
            Ok(r) => return Ok(r.into_iter().fold(0.0, f64::max)),
            Err(Error::Degenerate) => {
                ctx = ctx.escalated().ok_or(Error::Degenerate)?;
                circle = UnitCircle::new(circle.len(), &ctx);
            }
            Err(e) => return Err(e),
        }
    }
}

/// Size of the monomial `β_j` of `u - θ/(q;q)_n` on `|z| = |q|^{-n-1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermBound {
    pub j: usize,
    /// `|β_j|·|q|^{n²/2}`; the common factor overflows `f64` quickly.
    pub normalized: f64,
    /// `log2 |q|^{-n²/2}`.
    pub log2_scale: f64,
    /// `|q|^{(j-n)²/2}·T(|q|)` for `j < n`.
    pub envelope: Option<f64>,
}

impl TermBound {
    pub fn magnitude(&self) -> f64 {
        self.normalized * libm::exp2(self.log2_scale)
    }
}

/// `|β_j| = |q|^{-n²/2+(j-n)²/2}·|U_{j,n}(q)|` for `j > n`,
/// `|q|^{-n²/2+(j-n)²/2}·|Ũ_{j,n}(q)|` for `j < n`, and `0` at `j = n`.
pub fn term_bounds_on_circle(q: Complex64, n: usize, j_range: RangeInclusive<usize>, ctx: &PrecisionContext) -> Result<Vec<TermBound>> {
    check_q(q)?;
    if n == 0 {
        return Err(Error::InvalidIndex("need n >= 1"));
    }
    let x = q.norm();
    let qm = MpComplex::from_c64(q, ctx.mantissa_bits + 32);
    let log2_x = libm::log2(x);
    let log2_scale = -((n * n) as f64) / 2.0 * log2_x;
    let t = t_iv(&abs_q_iv(q, DEFAULT_BITS)).hi_f64();
    let mut out = Vec::new();
    for j in j_range {
        let d = j.abs_diff(n) as f64;
        let weight = libm::exp2(d * d / 2.0 * log2_x);
        let (coefficient, envelope) = if j > n {
            (analytic::ujn_eval(&qm, j, n, ctx)?.to_c64().norm(), None)
        } else if j < n {
            (analytic::utilde_eval(&qm, j, n, ctx)?.to_c64().norm(), Some(weight * t))
        } else {
            (0.0, None)
        };
        out.push(TermBound {
            j,
            normalized: weight * coefficient,
            log2_scale,
            envelope,
        });
    }
    Ok(out)
}
