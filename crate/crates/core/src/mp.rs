//! Multiprecision real helpers and a complex type over [`BigFloat`].
//!
//! All operations round to nearest at the requested precision; certified
//! enclosures live in [`crate::interval`].

use alloc::string::{String, ToString};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_complex::Complex64;

/// Rounding used by every non-interval operation.
pub const RM: RoundingMode = RoundingMode::ToEven;

/// Exact conversion (an `f64` fits in any precision ≥ 64 bits).
pub fn real(x: f64, prec: usize) -> BigFloat {
    BigFloat::from_f64(x, prec.max(64))
}

pub fn from_u64(x: u64, prec: usize) -> BigFloat {
    BigFloat::from_u64(x, prec.max(64))
}

/// `2^e`, exact.
pub fn pow2(e: i32, prec: usize) -> BigFloat {
    let mut one = real(1.0, prec);
    one.set_exponent(e + 1);
    one
}

/// Multiplies by `2^k` without rounding.
pub fn ldexp(x: &BigFloat, k: i32) -> BigFloat {
    let mut out = x.clone();
    if let Some(e) = x.exponent() {
        if !x.is_zero() {
            out.set_exponent(e + k);
        }
    }
    out
}

fn top_word(x: &BigFloat) -> Option<(u64, Sign, i32)> {
    let (m, _, s, e, _) = x.as_raw_parts()?;
    let top = *m.last()?;
    Some((top, s, e))
}

/// Nearest `f64` (within one ulp); saturates to `±inf` or flushes to zero
/// outside the `f64` range.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    match top_word(x) {
        None => 0.0,
        Some((top, s, e)) => {
            let mag = libm::scalbn(top as f64, e - 64);
            if s == Sign::Neg {
                -mag
            } else {
                mag
            }
        }
    }
}

/// `log2 |x|`, accurate to about `1e-15`; `-inf` for zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    match top_word(x) {
        None => f64::NEG_INFINITY,
        Some((top, _, e)) => f64::from(e) + libm::log2(top as f64 / 18_446_744_073_709_551_616.0),
    }
}

/// Decimal rendering of the full mantissa, e.g. `1.5e+0`.
pub fn to_decimal(x: &BigFloat) -> String {
    let mut cc = Consts::new().expect("constant cache");
    x.format(Radix::Dec, RM, &mut cc).unwrap_or_else(|_| "NaN".to_string())
}

pub fn abs(x: &BigFloat) -> BigFloat {
    let mut out = x.clone();
    if out.is_negative() {
        out.inv_sign();
    }
    out
}

/// Complex number with multiprecision parts.
#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl PartialEq for MpComplex {
    fn eq(&self, other: &Self) -> bool {
        self.re.cmp(&other.re) == Some(0) && self.im.cmp(&other.im) == Some(0)
    }
}

impl MpComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_f64(0.0, 0.0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        MpComplex {
            re: real(re, prec),
            im: real(im, prec),
        }
    }

    pub fn from_c64(c: Complex64, prec: usize) -> Self {
        Self::from_f64(c.re, c.im, prec)
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        MpComplex { re, im: real(0.0, prec) }
    }

    /// `r·(cos φ + i sin φ)` with `φ = 2π·k/K` computed at full precision.
    pub fn root_of_unity_scaled(r: &BigFloat, k: usize, points: usize, prec: usize, cc: &mut Consts) -> Self {
        let w = prec + 32;
        let two_pi = ldexp(&cc.pi(w, RM), 1);
        let phi = two_pi.mul(&from_u64(k as u64, w), w, RM).div(&from_u64(points as u64, w), w, RM);
        MpComplex {
            re: phi.cos(w, RM, cc).mul(r, prec, RM),
            im: phi.sin(w, RM, cc).mul(r, prec, RM),
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, prec: usize) -> Self {
        MpComplex {
            re: self.re.add(&o.re, prec, RM),
            im: self.im.add(&o.im, prec, RM),
        }
    }

    pub fn sub(&self, o: &Self, prec: usize) -> Self {
        MpComplex {
            re: self.re.sub(&o.re, prec, RM),
            im: self.im.sub(&o.im, prec, RM),
        }
    }

    pub fn mul(&self, o: &Self, prec: usize) -> Self {
        let w = prec + 16;
        let rr = self.re.mul(&o.re, w, RM);
        let ii = self.im.mul(&o.im, w, RM);
        let ri = self.re.mul(&o.im, w, RM);
        let ir = self.im.mul(&o.re, w, RM);
        MpComplex {
            re: rr.sub(&ii, prec, RM),
            im: ri.add(&ir, prec, RM),
        }
    }

    pub fn scale(&self, s: &BigFloat, prec: usize) -> Self {
        MpComplex {
            re: self.re.mul(s, prec, RM),
            im: self.im.mul(s, prec, RM),
        }
    }

    pub fn neg(&self) -> Self {
        MpComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> Self {
        MpComplex {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn norm_sqr(&self, prec: usize) -> BigFloat {
        let w = prec + 16;
        self.re.mul(&self.re, w, RM).add(&self.im.mul(&self.im, w, RM), prec, RM)
    }

    pub fn abs(&self, prec: usize) -> BigFloat {
        self.norm_sqr(prec + 16).sqrt(prec, RM)
    }

    /// `log2 |self|` from the larger component, accurate to about half a bit.
    pub fn log2_abs_approx(&self) -> f64 {
        let a = log2_abs(&self.re);
        let b = log2_abs(&self.im);
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * libm::log2(1.0 + libm::exp2(2.0 * (lo - hi)))
    }

    pub fn div(&self, o: &Self, prec: usize) -> Self {
        let w = prec + 32;
        let den = o.norm_sqr(w);
        let num = self.mul(&o.conj(), w);
        MpComplex {
            re: num.re.div(&den, prec, RM),
            im: num.im.div(&den, prec, RM),
        }
    }

    pub fn recip(&self, prec: usize) -> Self {
        Self::one(prec).div(self, prec)
    }

    pub fn powi(&self, mut n: u64, prec: usize) -> Self {
        let w = prec + 32;
        let mut base = self.clone();
        let mut acc = Self::one(w);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, w);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, w);
            }
        }
        acc.round(prec)
    }

    /// Rounds both parts to `prec` bits.
    pub fn round(mut self, prec: usize) -> Self {
        let _ = self.re.set_precision(prec.max(64), RM);
        let _ = self.im.set_precision(prec.max(64), RM);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        for v in [1.0, -0.3, 2.5e-200, 7.0e250, 0.0, -123456.789] {
            assert_eq!(to_f64(&real(v, 128)), v);
        }
    }

    #[test]
    fn log2_of_powers() {
        assert_eq!(log2_abs(&real(8.0, 64)), 3.0);
        assert!((log2_abs(&real(-0.3, 64)) - libm::log2(0.3)).abs() < 1e-14);
        assert_eq!(log2_abs(&real(0.0, 64)), f64::NEG_INFINITY);
        assert_eq!(to_f64(&pow2(-3, 64)), 0.125);
        assert_eq!(to_f64(&ldexp(&real(3.0, 64), 4)), 48.0);
    }

    #[test]
    fn complex_arithmetic() {
        let p = 128;
        let a = MpComplex::from_f64(1.0, 2.0, p);
        let b = MpComplex::from_f64(-3.0, 0.5, p);
        assert_eq!(a.mul(&b, p).to_c64(), Complex64::new(-4.0, -5.5));
        let back = a.mul(&b, p).div(&b, p).to_c64();
        assert!((back - Complex64::new(1.0, 2.0)).norm() < 1e-30);
        assert_eq!(a.powi(3, p).to_c64(), Complex64::new(1.0, 2.0).powi(3));
        assert!((to_f64(&a.abs(p)) - libm::sqrt(5.0)).abs() < 1e-15);
        assert!((a.log2_abs_approx() - libm::log2(libm::sqrt(5.0))).abs() < 1e-12);
    }

    #[test]
    fn decimal_strings() {
        let s = to_decimal(&real(0.375, 64));
        assert!(s.starts_with("3.75") && s.ends_with("e-1"), "{s}");
        assert!(to_decimal(&real(-2.0, 64)).starts_with("-2"));
    }

    #[test]
    fn roots_of_unity() {
        let mut cc = Consts::new().unwrap();
        let r = real(2.0, 128);
        let w = MpComplex::root_of_unity_scaled(&r, 1, 4, 128, &mut cc).to_c64();
        assert!((w - Complex64::new(0.0, 2.0)).norm() < 1e-30);
        let w = MpComplex::root_of_unity_scaled(&r, 3, 6, 128, &mut cc).to_c64();
        assert!((w - Complex64::new(-2.0, 0.0)).norm() < 1e-30);
    }
}
