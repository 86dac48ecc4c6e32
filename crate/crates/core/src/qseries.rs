//! Truncated power series in `q` with exact integer coefficients.
//!
//! Every infinite product `Π_{ℓ≥p}(1 ± q^ℓ)` is computed by dropping the
//! factors with `ℓ > N`: each of them is `1 + O(q^{N+1})`, so the
//! truncation is exact through order `N`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Extent, Result};

/// Power series `Σ_{ν=0}^{N} c_ν q^ν`; coefficients past `N` are unknown.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c·q^k` truncated at `order` (zero when `k > order`).
    pub fn monomial(c: BigInt, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Series whose order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        QSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^ν`, or `None` past the truncation order.
    pub fn coeff(&self, nu: usize) -> Option<&BigInt> {
        self.coeffs.get(nu)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Keeps coefficients up to `order` (which must not exceed the current one).
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Multiplies by `q^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for nu in k..=n {
            out.coeffs[nu] = self.coeffs[nu - k].clone();
        }
        out
    }

    /// Exact product; the result order is the smaller of the two.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let n = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + k] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Multiplicative inverse of a series with constant term exactly 1.
    pub fn invert_unit(&self) -> Result<QSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::NonUnitConstant(self.coeffs[0].to_string()));
        }
        let n = self.order();
        let mut inv: Vec<BigInt> = Vec::with_capacity(n + 1);
        inv.push(BigInt::one());
        for nu in 1..=n {
            let mut acc = BigInt::zero();
            for k in 1..=nu {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc -= a * &inv[nu - k];
                }
            }
            inv.push(acc);
        }
        Ok(QSeries { coeffs: inv })
    }

    /// In-place multiplication by `(1 + sign·q^ℓ)`.
    pub fn mul_binomial(&mut self, ell: usize, sign: FactorSign) {
        let n = self.order();
        if ell == 0 || ell > n {
            if ell == 0 {
                // (1 ± 1): doubling or annihilation
                match sign {
                    FactorSign::Plus => self.coeffs.iter_mut().for_each(|c| *c *= 2),
                    FactorSign::Minus => self.coeffs.iter_mut().for_each(|c| c.set_zero()),
                }
            }
            return;
        }
        for nu in (ell..=n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(nu);
            match sign {
                FactorSign::Plus => hi[0] += &lo[nu - ell],
                FactorSign::Minus => hi[0] -= &lo[nu - ell],
            }
        }
    }

    /// True when every coefficient with index in `range` is strictly positive.
    pub fn is_positive_on(&self, range: core::ops::RangeInclusive<usize>) -> bool {
        range.into_iter().all(|nu| self.coeffs.get(nu).is_some_and(|c| c.is_positive()))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSign {
    Plus,
    Minus,
}

/// `(q;q)_j = (1−q)(1−q²)···(1−q^j)` to order `N`.
pub fn pochhammer(j: Extent, order: usize) -> QSeries {
    let mut s = QSeries::one(order);
    for ell in 1..=j.clip(order) {
        s.mul_binomial(ell, FactorSign::Minus);
    }
    s
}

/// `Π_{ℓ=p}^{r}(1 + sign·q^ℓ)` to order `N`.
pub fn product_one_pm(p: usize, r: Extent, sign: FactorSign, order: usize) -> Result<QSeries> {
    if p == 0 {
        return Err(Error::InvalidIndex("product start index must be at least 1"));
    }
    if let Extent::Finite(r) = r {
        if r < p {
            return Err(Error::InvalidIndex("product end index must be at least the start"));
        }
    }
    let mut s = QSeries::one(order);
    for ell in p..=r.clip(order) {
        s.mul_binomial(ell, sign);
    }
    Ok(s)
}

fn inverse_pochhammer(j: Extent, order: usize) -> QSeries {
    pochhammer(j, order).invert_unit().expect("(q;q)_j has constant term 1")
}

/// `U = (Π_{ℓ≥1}(1+q^ℓ) − 1)/(q;q)_∞`.
pub fn series_u(order: usize) -> QSeries {
    let plus = product_one_pm(1, Extent::Infinite, FactorSign::Plus, order).expect("valid range");
    let numerator = &plus - &QSeries::one(order);
    numerator.mul(&inverse_pochhammer(Extent::Infinite, order))
}

fn check_above(j: Extent, n: usize) -> Result<()> {
    match j {
        Extent::Finite(j) if j <= n => Err(Error::InvalidIndex("need j > n")),
        _ => Ok(()),
    }
}

/// `U_{j,n} = (1 − Π_{ℓ=n+1}^{j}(1−q^ℓ))/(q;q)_j`, for `j > n ≥ 0`.
pub fn series_ujn(j: Extent, n: usize, order: usize) -> Result<QSeries> {
    check_above(j, n)?;
    let prod = product_one_pm(n + 1, j, FactorSign::Minus, order)?;
    let numerator = &QSeries::one(order) - &prod;
    Ok(numerator.mul(&inverse_pochhammer(j, order)))
}

/// `V_{j,n} = (Π_{ℓ=n+1}^{j}(1+q^ℓ) − 1)/(q;q)_j`, for `j > n ≥ 0`.
pub fn series_vjn(j: Extent, n: usize, order: usize) -> Result<QSeries> {
    check_above(j, n)?;
    let prod = product_one_pm(n + 1, j, FactorSign::Plus, order)?;
    let numerator = &prod - &QSeries::one(order);
    Ok(numerator.mul(&inverse_pochhammer(j, order)))
}

/// `S_r = Π_{ℓ≥r+1}(1+q^ℓ) − 1`.
pub fn series_sr(r: usize, order: usize) -> QSeries {
    let prod = product_one_pm(r + 1, Extent::Infinite, FactorSign::Plus, order).expect("r + 1 >= 1");
    &prod - &QSeries::one(order)
}

/// `Ũ_{j,n} = (Π_{ℓ=j+1}^{n}(1−q^ℓ) − 1)/(q;q)_n`, for `0 ≤ j < n`.
pub fn series_utilde(j: usize, n: usize, order: usize) -> Result<QSeries> {
    if j >= n {
        return Err(Error::InvalidIndex("need j < n"));
    }
    let prod = product_one_pm(j + 1, Extent::Finite(n), FactorSign::Minus, order)?;
    let numerator = &prod - &QSeries::one(order);
    Ok(numerator.mul(&inverse_pochhammer(Extent::Finite(n), order)))
}

/// Number of ways to write `nu` as a sum of distinct integers `≥ min_part`
/// (the empty sum counts once for `nu = 0`). Plain recursive enumeration;
/// it shares no code with the product expansions it is used to check.
pub fn count_distinct_partitions(nu: usize, min_part: usize) -> u64 {
    fn go(rest: usize, smallest: usize) -> u64 {
        if rest == 0 {
            return 1;
        }
        let mut total = 0;
        let mut part = smallest;
        // the next part must leave room for a strictly larger one, or close the sum
        while part <= rest {
            let left = rest - part;
            if left == 0 || left > part {
                total += go(left, part + 1);
            }
            part += 1;
        }
        total
    }
    go(nu, min_part.max(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaViolation {
    pub nu: usize,
    pub gamma_plus: String,
    pub gamma_minus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaReport {
    pub p: usize,
    pub r: usize,
    pub order: usize,
    pub checked: usize,
    pub passed: bool,
    /// Coefficients where the two products agree in absolute value.
    pub equalities: usize,
    pub first_violation: Option<GammaViolation>,
}

/// Checks `|γ²_ν| ≤ γ¹_ν` for `Π_{ℓ=p}^{r}(1+q^ℓ) − 1 = Σ γ¹_ν q^ν` and
/// `Π_{ℓ=p}^{r}(1−q^ℓ) − 1 = Σ γ²_ν q^ν` through order `N`.
pub fn verify_gamma_domination(p: usize, r: usize, order: usize) -> Result<GammaReport> {
    if p == 0 || r < p {
        return Err(Error::InvalidIndex("need 1 <= p <= r"));
    }
    let one = QSeries::one(order);
    let plus = &product_one_pm(p, Extent::Finite(r), FactorSign::Plus, order)? - &one;
    let minus = &product_one_pm(p, Extent::Finite(r), FactorSign::Minus, order)? - &one;
    let mut first_violation = None;
    let mut equalities = 0;
    for nu in 0..=order {
        let (g1, g2) = (&plus.coeffs[nu], &minus.coeffs[nu]);
        if g2.abs() > *g1 {
            first_violation.get_or_insert_with(|| GammaViolation {
                nu,
                gamma_plus: g1.to_string(),
                gamma_minus: g2.to_string(),
            });
        } else if g2.abs() == *g1 {
            equalities += 1;
        }
    }
    Ok(GammaReport {
        p,
        r,
        order,
        checked: order + 1,
        passed: first_violation.is_none(),
        equalities,
        first_violation,
    })
}

/// Which inequality of the majorization chain a violation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaRelation {
    /// `|u_{j,n;n+ν}| ≤ u_ν`
    Majorant,
    /// `|u_{j,n;ν}| ≤ v_{j,n;ν}`
    SignedBelowUnsigned,
    /// `v_{j,n;ν} ≤ v_{∞,n;ν}`
    FiniteBelowInfinite,
    /// `v_{∞,n;n+ν} ≤ v_{∞,0;ν}`
    ShiftedBelowBase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub relation: LemmaRelation,
    pub j: Extent,
    pub n: usize,
    pub nu: usize,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n_max: usize,
    pub j_max: Extent,
    pub nu_max: usize,
    /// Working q-order `n_max + nu_max`.
    pub order: usize,
    /// Number of `(j, n, ν)` triples tested against the majorant.
    pub checked: u64,
    /// Number of chain inequalities tested in total.
    pub chain_checks: u64,
    pub violations: Vec<LemmaViolation>,
    pub success: bool,
}

/// Exhaustive check of `|u_{j,n;n+ν}| ≤ u_ν` together with the chain
/// `|u_{j,n;ν}| ≤ v_{j,n;ν} ≤ v_{∞,n;ν}` and `v_{∞,n;n+ν} ≤ v_{∞,0;ν}`.
///
/// `j` runs over `n < j ≤ j_max` and always includes `j = ∞`; with
/// `j_max = Infinite` the finite range stops at the working order, past
/// which every `U_{j,n}` coincides with `U_{∞,n}`.
pub fn verify_lemma1(n_max: usize, j_max: Extent, nu_max: usize) -> Result<LemmaReport> {
    if nu_max == 0 || j_max == Extent::Finite(0) {
        return Err(Error::InvalidIndex("lemma bounds must be at least 1"));
    }
    let order = n_max + nu_max;
    let u = series_u(order);
    let v_inf_base = series_vjn(Extent::Infinite, 0, order)?;
    let mut violations = Vec::new();
    let mut checked = 0u64;
    let mut chain_checks = 0u64;
    let mut record = |relation, j, n, nu, lhs: &BigInt, rhs: &BigInt| {
        violations.push(LemmaViolation {
            relation,
            j,
            n,
            nu,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        })
    };

    for n in 0..=n_max {
        let v_inf = series_vjn(Extent::Infinite, n, order)?;
        for nu in 1..=nu_max {
            chain_checks += 1;
            if v_inf.coeffs[n + nu] > v_inf_base.coeffs[nu] {
                record(
                    LemmaRelation::ShiftedBelowBase,
                    Extent::Infinite,
                    n,
                    nu,
                    &v_inf.coeffs[n + nu],
                    &v_inf_base.coeffs[nu],
                );
            }
        }
        let last = j_max.clip(order);
        let js = (n + 1..=last).map(Extent::Finite).chain(core::iter::once(Extent::Infinite));
        for j in js {
            let ujn = series_ujn(j, n, order)?;
            let vjn = series_vjn(j, n, order)?;
            for nu in 0..=order {
                chain_checks += 2;
                let a = ujn.coeffs[nu].abs();
                if a > vjn.coeffs[nu] {
                    record(LemmaRelation::SignedBelowUnsigned, j, n, nu, &a, &vjn.coeffs[nu]);
                }
                if vjn.coeffs[nu] > v_inf.coeffs[nu] {
                    record(LemmaRelation::FiniteBelowInfinite, j, n, nu, &vjn.coeffs[nu], &v_inf.coeffs[nu]);
                }
            }
            for nu in 1..=nu_max {
                checked += 1;
                let a = ujn.coeffs[n + nu].abs();
                if a > u.coeffs[nu] {
                    record(LemmaRelation::Majorant, j, n, nu, &a, &u.coeffs[nu]);
                }
            }
        }
    }
    let success = violations.is_empty();
    Ok(LemmaReport {
        n_max,
        j_max,
        nu_max,
        order,
        checked,
        chain_checks,
        violations,
        success,
    })
}

/// Power series in `z` whose coefficients are `q`-series of one common order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateSeries {
    z_coeffs: Vec<QSeries>,
}

impl BivariateSeries {
    pub fn one(z_order: usize, q_order: usize) -> Self {
        let mut z_coeffs = vec![QSeries::zero(q_order); z_order + 1];
        z_coeffs[0] = QSeries::one(q_order);
        BivariateSeries { z_coeffs }
    }

    /// # Panics
    /// If the entries are empty or do not share one q-order.
    pub fn from_z_coeffs(z_coeffs: Vec<QSeries>) -> Self {
        let q_order = z_coeffs.first().expect("at least one z-coefficient").order();
        assert!(z_coeffs.iter().all(|c| c.order() == q_order), "mixed q-orders");
        BivariateSeries { z_coeffs }
    }

    pub fn z_order(&self) -> usize {
        self.z_coeffs.len() - 1
    }

    pub fn q_order(&self) -> usize {
        self.z_coeffs[0].order()
    }

    pub fn z_coeff(&self, j: usize) -> Option<&QSeries> {
        self.z_coeffs.get(j)
    }

    /// In-place multiplication by `1 + q^ν z`.
    pub fn mul_linear_factor(&mut self, nu: usize) {
        for j in (1..=self.z_order()).rev() {
            let shifted = self.z_coeffs[j - 1].shift(nu);
            self.z_coeffs[j] = &self.z_coeffs[j] + &shifted;
        }
    }
}

/// `u(q,z) = Π_{ν≥1}(1 + q^ν z)` expanded to z-degree `J` and q-order `N`.
pub fn u_product_expansion(z_order: usize, q_order: usize) -> BivariateSeries {
    let mut b = BivariateSeries::one(z_order, q_order);
    for nu in 1..=q_order {
        b.mul_linear_factor(nu);
    }
    b
}

/// `Σ_j q^{j(j+1)/2} z^j/(q;q)_j` to z-degree `J` and q-order `N`.
pub fn u_series_expansion(z_order: usize, q_order: usize) -> BivariateSeries {
    let z_coeffs = (0..=z_order)
        .map(|j| inverse_pochhammer(Extent::Finite(j), q_order).shift(j * (j + 1) / 2))
        .collect();
    BivariateSeries { z_coeffs }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityMismatch {
    pub j: usize,
    pub nu: usize,
    pub product: String,
    pub series: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub z_order: usize,
    pub q_order: usize,
    pub checked: usize,
    pub mismatches: Vec<IdentityMismatch>,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Coefficient-by-coefficient comparison of the product and series sides of
/// `Π_{ν≥1}(1 + q^ν z) = Σ_j q^{j(j+1)/2} z^j/(q;q)_j`.
pub fn verify_product_identity(z_order: usize, q_order: usize) -> Result<IdentityReport> {
    if z_order == 0 {
        return Err(Error::InvalidIndex("z-order must be at least 1"));
    }
    let product = u_product_expansion(z_order, q_order);
    let series = u_series_expansion(z_order, q_order);
    let mut mismatches = Vec::new();
    for j in 0..=z_order {
        let (a, b) = (&product.z_coeffs[j], &series.z_coeffs[j]);
        for nu in 0..=q_order {
            if a.coeffs[nu] != b.coeffs[nu] {
                mismatches.push(IdentityMismatch {
                    j,
                    nu,
                    product: a.coeffs[nu].to_string(),
                    series: b.coeffs[nu].to_string(),
                });
            }
        }
    }
    Ok(IdentityReport {
        z_order,
        q_order,
        checked: (z_order + 1) * (q_order + 1),
        matched: mismatches.is_empty(),
        mismatches,
    })
}
