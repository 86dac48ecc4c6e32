//! Closed intervals over [`BigFloat`] with outward rounding.
//!
//! `astro-float` only rounds to nearest, so every inexact endpoint is pushed
//! outward by `8·2^{-p}` relative after the operation; that is several ulps
//! more than the rounding error of one correctly rounded operation.

use core::cmp::Ordering;

use astro_float::BigFloat;
use num_bigint::{BigInt, Sign as BigSign};

use crate::mp::{self, RM};

#[derive(Clone, Debug)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(c) if c < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        Some(_) => Ordering::Greater,
        None => panic!("NaN inside an interval endpoint"),
    }
}

fn min(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b) == Ordering::Greater {
        b
    } else {
        a
    }
}

fn max(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Pushes a rounded value toward `-inf` (`up = false`) or `+inf`.
fn nudge(x: BigFloat, prec: usize, up: bool) -> BigFloat {
    if x.is_zero() {
        return x;
    }
    let slack = mp::ldexp(&mp::abs(&x), 3 - prec as i32);
    if up {
        x.add(&slack, prec, RM)
    } else {
        x.sub(&slack, prec, RM)
    }
}

impl Interval {
    /// Degenerate interval holding an `f64` exactly.
    pub fn point(x: f64, prec: usize) -> Self {
        let v = mp::real(x, prec);
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// Encloses an exactly represented value.
    pub fn exact(v: BigFloat, prec: usize) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    /// Encloses `v`, a value already rounded to nearest at `prec` bits.
    pub fn around(v: BigFloat, prec: usize) -> Self {
        Interval {
            lo: nudge(v.clone(), prec, false),
            hi: nudge(v, prec, true),
            prec,
        }
    }

    /// # Panics
    /// If `lo > hi`.
    pub fn from_bounds(lo: BigFloat, hi: BigFloat, prec: usize) -> Self {
        assert!(cmp(&lo, &hi) != Ordering::Greater, "empty interval");
        Interval { lo, hi, prec }
    }

    pub fn from_bigint(c: &BigInt, prec: usize) -> Self {
        let (sign, digits) = c.to_u64_digits();
        let bits = (digits.len() * 64).max(64) + 64;
        let base = mp::pow2(64, bits);
        let mut acc = mp::real(0.0, bits);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, bits, RM).add(&mp::from_u64(*d, bits), bits, RM);
        }
        if sign == BigSign::Minus {
            acc.inv_sign();
        }
        let mut rounded = acc.clone();
        let _ = rounded.set_precision(prec, RM);
        if cmp(&rounded, &acc) == Ordering::Equal {
            Self::exact(rounded, prec)
        } else {
            Self::around(rounded, prec)
        }
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Largest `f64` not above the lower endpoint.
    pub fn lo_f64(&self) -> f64 {
        mp::to_f64(&self.lo).next_down()
    }

    /// Smallest `f64` not below the upper endpoint.
    pub fn hi_f64(&self) -> f64 {
        mp::to_f64(&self.hi).next_up()
    }

    pub fn mid_f64(&self) -> f64 {
        let two = mp::real(2.0, self.prec);
        mp::to_f64(&self.lo.add(&self.hi, self.prec + 8, RM).div(&two, self.prec, RM))
    }

    /// Upper bound of the width.
    pub fn width(&self) -> BigFloat {
        nudge(self.hi.sub(&self.lo, self.prec, RM), self.prec, true)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive() && !self.lo.is_zero()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        let v = mp::real(x, self.prec);
        cmp(&self.lo, &v) != Ordering::Greater && cmp(&v, &self.hi) != Ordering::Greater
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo) == Ordering::Less
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        cmp(&self.hi, &other.lo) != Ordering::Greater
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = max(self.lo.clone(), other.lo.clone());
        let hi = min(self.hi.clone(), other.hi.clone());
        (cmp(&lo, &hi) != Ordering::Greater).then_some(Interval {
            lo,
            hi,
            prec: self.prec.max(other.prec),
        })
    }

    pub fn add(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval {
            lo: nudge(self.lo.add(&o.lo, p, RM), p, false),
            hi: nudge(self.hi.add(&o.hi, p, RM), p, true),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        Interval {
            lo: nudge(self.lo.sub(&o.hi, p, RM), p, false),
            hi: nudge(self.hi.sub(&o.lo, p, RM), p, true),
            prec: p,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let p = self.prec.max(o.prec);
        let products = [
            self.lo.mul(&o.lo, p, RM),
            self.lo.mul(&o.hi, p, RM),
            self.hi.mul(&o.lo, p, RM),
            self.hi.mul(&o.hi, p, RM),
        ];
        let lo = products.iter().cloned().reduce(min).expect("four products");
        let hi = products.into_iter().reduce(max).expect("four products");
        Interval {
            lo: nudge(lo, p, false),
            hi: nudge(hi, p, true),
            prec: p,
        }
    }

    /// # Panics
    /// If the divisor contains zero.
    pub fn div(&self, o: &Interval) -> Interval {
        assert!(o.is_positive() || o.hi.is_negative(), "divisor interval straddles zero");
        let p = self.prec.max(o.prec);
        let quotients = [
            self.lo.div(&o.lo, p, RM),
            self.lo.div(&o.hi, p, RM),
            self.hi.div(&o.lo, p, RM),
            self.hi.div(&o.hi, p, RM),
        ];
        let lo = quotients.iter().cloned().reduce(min).expect("four quotients");
        let hi = quotients.into_iter().reduce(max).expect("four quotients");
        Interval {
            lo: nudge(lo, p, false),
            hi: nudge(hi, p, true),
            prec: p,
        }
    }

    pub fn recip(&self) -> Interval {
        Interval::point(1.0, self.prec).div(self)
    }

    /// # Panics
    /// If the interval has a negative lower endpoint.
    pub fn sqrt(&self) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of a negative interval");
        let p = self.prec;
        Interval {
            lo: nudge(self.lo.sqrt(p, RM), p, false),
            hi: nudge(self.hi.sqrt(p, RM), p, true),
            prec: p,
        }
    }

    /// `self^n` for a nonnegative interval, by repeated squaring.
    pub fn powi(&self, mut n: u64) -> Interval {
        debug_assert!(!self.lo.is_negative());
        let mut acc = Interval::point(1.0, self.prec);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `2^k`, exactly.
    pub fn ldexp(&self, k: i32) -> Interval {
        Interval {
            lo: mp::ldexp(&self.lo, k),
            hi: mp::ldexp(&self.hi, k),
            prec: self.prec,
        }
    }

    /// Convex hull with `[lo, hi + extra]` style upward padding.
    pub fn widen_up(&self, extra: &BigFloat) -> Interval {
        Interval {
            lo: self.lo.clone(),
            hi: nudge(self.hi.add(extra, self.prec, RM), self.prec, true),
            prec: self.prec,
        }
    }

    /// Hull with `[lo - extra, hi]`.
    pub fn widen_down(&self, extra: &BigFloat) -> Interval {
        Interval {
            lo: nudge(self.lo.sub(extra, self.prec, RM), self.prec, false),
            hi: self.hi.clone(),
            prec: self.prec,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_enclosed() {
        let third = Interval::point(1.0, 128).div(&Interval::point(3.0, 128));
        let back = third.mul(&Interval::point(3.0, 128));
        assert!(back.contains_f64(1.0));
        assert!(third.lo_f64() < 1.0 / 3.0 + 1e-17 && third.hi_f64() > 1.0 / 3.0 - 1e-17);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Interval::point(2.0, 256).sqrt();
        let sq = r.mul(&r);
        assert!(sq.contains_f64(2.0));
        assert!(mp::log2_abs(&sq.width()) < -240.0);
    }

    #[test]
    fn sign_handling() {
        let a = Interval::from_bounds(mp::real(-1.0, 64), mp::real(2.0, 64), 64);
        let b = Interval::from_bounds(mp::real(-3.0, 64), mp::real(0.5, 64), 64);
        let p = a.mul(&b);
        assert!(p.contains_f64(-6.0) && p.contains_f64(3.0));
        assert!(!p.contains_f64(-6.1) && !p.contains_f64(3.1));
        let d = a.sub(&b);
        assert!(d.contains_f64(-1.5) && d.contains_f64(5.0));
    }

    #[test]
    fn bigint_conversion() {
        let big: BigInt = "123456789012345678901234567890123".parse().unwrap();
        let iv = Interval::from_bigint(&big, 256);
        assert!(iv.width().is_zero());
        let small = Interval::from_bigint(&big, 64);
        assert!(small.lo_f64() <= 1.2345678901234568e32 && small.hi_f64() >= 1.2345678901234567e32);
        let neg = Interval::from_bigint(&BigInt::from(-5), 64);
        assert!(neg.contains_f64(-5.0));
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = Interval::point(0.3, 128);
        let p = x.powi(7);
        assert!((p.mid_f64() - 0.3f64.powi(7)).abs() < 1e-18);
        assert!(mp::log2_abs(&p.width()) < -110.0);
        assert!(Interval::point(5.0, 64).powi(0).contains_f64(1.0));
    }

    #[test]
    fn ordering_predicates() {
        let a = Interval::point(1.0, 64);
        let b = Interval::point(2.0, 64);
        assert!(a.certainly_lt(&b) && a.certainly_le(&b) && a.certainly_le(&a));
        assert!(!a.certainly_lt(&a));
        assert!(a.intersect(&b).is_none());
    }
}
