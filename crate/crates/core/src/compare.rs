//! Products of rational powers `coef * prod b_i^{e_i}` and their exact or
//! interval comparison.
//!
//! Exact decision: with `L` the lcm of all exponent denominators, `x <= y`
//! iff `x^L <= y^L`, and `x^L` is rational. When that would exceed the bit
//! budget, comparison falls back to outward-rounded dyadic intervals at 256,
//! 512 and 1024 bits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{format_rational, Rational};
use crate::polytope::MeasureValue;

/// Precisions (bits) tried in turn before giving up on an interval decision.
pub const INTERVAL_ROUNDS: [u64; 3] = [256, 512, 1024];
/// Upper bound on the bit size of the integer powers formed by an exact comparison.
pub const EXACT_BIT_BUDGET: u64 = 1 << 22;
/// Significant digits of reported decimal interval endpoints.
pub const REPORT_DIGITS: usize = 40;
/// Relative gap below which an undecided comparison counts as equal within tolerance.
pub const RELATIVE_TOLERANCE_EXP10: i32 = -30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerProduct {
    coef: Rational,
    factors: Vec<(Rational, Rational)>,
}

fn bits(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

fn pow_int(base: &Rational, e: &BigInt) -> Rational {
    let k = e.to_i32().expect("exponent fits in i32 under the bit budget");
    if k >= 0 {
        num_traits::pow(base.clone(), k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

/// Exact `q`-th root of a non-negative rational when it is rational.
fn exact_root(r: &Rational, q: u32) -> Option<Rational> {
    let n = r.numer().nth_root(q);
    let d = r.denom().nth_root(q);
    (Rational::new(n.pow(q), d.pow(q)) == *r).then(|| Rational::new(n, d))
}

impl PowerProduct {
    pub fn rational(r: Rational) -> Self {
        assert!(!r.is_negative(), "power products are non-negative");
        Self {
            coef: r,
            factors: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// `q * g^{1/2}`.
    pub fn measure(m: &MeasureValue) -> Self {
        Self {
            coef: m.q().clone(),
            factors: vec![(m.g().clone(), Rational::new(1.into(), 2.into()))],
        }
        .normalized()
    }

    /// `base^exp` for `base >= 0`.
    pub fn power(base: Rational, exp: Rational) -> Self {
        Self {
            coef: Rational::one(),
            factors: vec![(base, exp)],
        }
        .normalized()
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self {
            coef: &self.coef * &other.coef,
            factors,
        }
        .normalized()
    }

    pub fn pow(&self, e: &Rational) -> PowerProduct {
        let mut factors: Vec<(Rational, Rational)> =
            self.factors.iter().map(|(b, x)| (b.clone(), x * e)).collect();
        factors.push((self.coef.clone(), e.clone()));
        Self {
            coef: Rational::one(),
            factors,
        }
        .normalized()
    }

    pub fn recip(&self) -> Result<PowerProduct> {
        if self.is_zero() {
            return Err(Error::Invalid("reciprocal of zero".into()));
        }
        Ok(Self {
            coef: self.coef.recip(),
            factors: self.factors.iter().map(|(b, x)| (b.clone(), -x)).collect(),
        }
        .normalized())
    }

    pub fn is_zero(&self) -> bool {
        self.coef.is_zero()
    }

    /// Folds integer exponents and rational roots into the coefficient and
    /// merges equal bases.
    fn normalized(mut self) -> Self {
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (b, e) in std::mem::take(&mut self.factors) {
            if e.is_zero() || b.is_one() {
                continue;
            }
            if b.is_zero() {
                if e.is_positive() {
                    return Self::rational(Rational::zero());
                }
                panic!("zero raised to a non-positive power");
            }
            match merged.iter_mut().find(|(mb, _)| *mb == b) {
                Some((_, me)) => *me += e,
                None => merged.push((b, e)),
            }
        }
        let mut coef = self.coef;
        let mut factors = Vec::new();
        for (b, e) in merged {
            if e.is_zero() {
                continue;
            }
            let whole = e.numer().div_floor(e.denom());
            let frac = &e - Rational::from_integer(whole.clone());
            if !whole.is_zero() && whole.bits() < 16 {
                coef *= pow_int(&b, &whole);
            } else if !whole.is_zero() {
                factors.push((b, e));
                continue;
            }
            if frac.is_zero() {
                continue;
            }
            let q = frac.denom().to_u32();
            match q.and_then(|q| exact_root(&b, q)) {
                Some(root) => coef *= pow_int(&root, frac.numer()),
                None => factors.push((b, frac)),
            }
        }
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        if coef.is_zero() {
            factors.clear();
        }
        Self { coef, factors }
    }

    /// The exact value when it is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        self.factors.is_empty().then(|| self.coef.clone())
    }

    fn exponent_lcm(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()))
    }

    /// `self^L` exactly, when its estimated size stays under the budget.
    fn integer_power(&self, l: &BigInt) -> Option<Rational> {
        let l_small = l.to_u64()?;
        let mut cost = bits(&self.coef).saturating_mul(l_small);
        for (b, e) in &self.factors {
            let k = (e * Rational::from_integer(l.clone())).to_integer();
            cost = cost.saturating_add(bits(b).saturating_mul(k.abs().to_u64()?));
        }
        if cost > EXACT_BIT_BUDGET {
            return None;
        }
        let mut v = pow_int(&self.coef, l);
        for (b, e) in &self.factors {
            let k = (e * Rational::from_integer(l.clone())).to_integer();
            v *= pow_int(b, &k);
        }
        Some(v)
    }

    /// Exact ordering when affordable.
    pub fn cmp_exact(&self, other: &PowerProduct) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(Ordering::Equal),
            (true, false) => return Some(Ordering::Less),
            (false, true) => return Some(Ordering::Greater),
            _ => {}
        }
        let ratio = self.mul(&other.recip().ok()?);
        let l = ratio.exponent_lcm();
        let v = ratio.integer_power(&l)?;
        Some(v.cmp(&Rational::one()))
    }

    /// Enclosure at `prec` bits of relative precision.
    pub fn interval(&self, prec: u64) -> Interval {
        let mut acc = Interval::point(self.coef.clone());
        for (b, e) in &self.factors {
            acc = acc.mul(&Interval::rational_power(b, e, prec)).rounded(prec);
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.interval(64).midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.coef))?;
        for (b, e) in &self.factors {
            write!(f, " * ({})^({})", format_rational(b), format_rational(e))?;
        }
        Ok(())
    }
}

/// A closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Floor of log2 of a positive rational, approximately (within one).
fn log2_estimate(r: &Rational) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64
}

fn ceil_root(n: &BigInt, q: u32) -> BigInt {
    let r = n.nth_root(q);
    if &r.pow(q) < n {
        r + 1
    } else {
        r
    }
}

fn round_dyadic(r: &Rational, prec: u64, up: bool) -> Rational {
    if r.is_zero() {
        return r.clone();
    }
    let shift = prec as i64 + 8 - log2_estimate(&r.abs());
    let scaled = if shift >= 0 {
        r * Rational::from_integer(pow2(shift as u64))
    } else {
        r / Rational::from_integer(pow2((-shift) as u64))
    };
    let m = if up { scaled.ceil() } else { scaled.floor() };
    if shift >= 0 {
        m / Rational::from_integer(pow2(shift as u64))
    } else {
        m * Rational::from_integer(pow2((-shift) as u64))
    }
}

impl Interval {
    pub fn point(r: Rational) -> Self {
        Self { lo: r.clone(), hi: r }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Product of non-negative intervals.
    pub fn mul(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Quotient of non-negative intervals, the divisor bounded away from zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        other
            .lo
            .is_positive()
            .then(|| Interval::new(&self.lo / &other.hi, &self.hi / &other.lo))
    }

    pub fn rounded(&self, prec: u64) -> Interval {
        Interval::new(round_dyadic(&self.lo, prec, false), round_dyadic(&self.hi, prec, true))
    }

    /// Enclosure of `b^e` for `b > 0`.
    pub fn rational_power(b: &Rational, e: &Rational, prec: u64) -> Interval {
        let q = e.denom().to_u32().expect("exponent denominator fits in u32");
        let p = e.numer();
        let y = pow_int(b, p);
        if q == 1 {
            return Interval::point(y);
        }
        // y^{1/q} with k fractional bits, k chosen so the root has about prec significant bits.
        let k = (prec as i64 + 8 - log2_estimate(&y) / q as i64).max(0) as u64;
        let scaled = &y * Rational::from_integer(pow2(k * q as u64));
        let lo = scaled.floor().to_integer().nth_root(q);
        let hi = ceil_root(&scaled.ceil().to_integer(), q);
        let den = Rational::from_integer(pow2(k));
        Interval::new(Rational::from_integer(lo) / &den, Rational::from_integer(hi) / den)
    }

    /// Position relative to a point, when decided.
    pub fn cmp_point(&self, x: &Rational) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else if self.is_point() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Outward rounding to `digits` significant decimal digits.
    pub fn to_decimal(&self, digits: usize) -> Interval {
        Interval::new(round_decimal(&self.lo, digits, false), round_decimal(&self.hi, digits, true))
    }
}

fn round_decimal(r: &Rational, digits: usize, up: bool) -> Rational {
    if r.is_zero() {
        return r.clone();
    }
    let ten = BigInt::from(10);
    // Choose k with 10^(digits-1) <= |r| 10^k < 10^digits (approximately).
    let mag = (log2_estimate(&r.abs()) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let k = digits as i64 - 1 - mag;
    let factor = if k >= 0 {
        Rational::from_integer(ten.pow(k as u32))
    } else {
        Rational::from_integer(ten.pow((-k) as u32)).recip()
    };
    let scaled = r * &factor;
    let m = if up { scaled.ceil() } else { scaled.floor() };
    m / factor
}

/// Plain decimal string of a rational with a power-of-ten (or 2^a 5^b) denominator.
pub fn format_decimal(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let mut places = 0u32;
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while d.is_multiple_of(&two) || d.is_multiple_of(&five) {
        if d.is_multiple_of(&two) {
            d /= &two;
        } else {
            d /= &five;
        }
        places += 1;
    }
    if !d.is_one() {
        return format_rational(r);
    }
    let scaled = (r * Rational::from_integer(BigInt::from(10).pow(places))).to_integer();
    let (sign, digits) = (scaled.sign(), scaled.abs().to_string());
    let body = if places == 0 {
        digits
    } else {
        let width = places as usize + 1;
        let padded = format!("{digits:0>width$}");
        let (int_part, frac) = padded.split_at(padded.len() - places as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac}")
        }
    };
    if sign == Sign::Minus {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal interval as reported: `["lo", "hi"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct DecimalInterval(pub Interval);

impl TryFrom<[String; 2]> for DecimalInterval {
    type Error = Error;
    fn try_from(v: [String; 2]) -> Result<Self> {
        let lo = crate::linalg::parse_rational(&v[0])?;
        let hi = crate::linalg::parse_rational(&v[1])?;
        if lo > hi {
            return Err(Error::Invalid("interval endpoints out of order".into()));
        }
        Ok(DecimalInterval(Interval::new(lo, hi)))
    }
}

impl From<DecimalInterval> for [String; 2] {
    fn from(d: DecimalInterval) -> Self {
        [format_decimal(&d.0.lo), format_decimal(&d.0.hi)]
    }
}

impl DecimalInterval {
    pub fn enclosing(i: &Interval) -> Self {
        DecimalInterval(i.to_decimal(REPORT_DIGITS))
    }
}

/// How an equality question was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityChannel {
    ExactYes,
    ExactNo,
    WithinTolerance,
    UndecidedInterval,
}

/// Result of comparing two non-negative quantities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    /// `lhs` versus `rhs`, when proven.
    pub ordering: Option<Ordering>,
    pub channel: EqualityChannel,
    /// `lhs / rhs`, absent when `rhs = 0`.
    pub ratio: Option<Interval>,
    /// Bits used by the deciding interval round, zero for the exact path.
    pub precision: u64,
}

fn within_tolerance(ratio: &Interval) -> bool {
    let tol = Rational::new(BigInt::one(), BigInt::from(10).pow((-RELATIVE_TOLERANCE_EXP10) as u32));
    (ratio.midpoint() - Rational::one()).abs() <= tol
}

/// Decides `lhs` versus `rhs` for two enclosure producers. `exact` is tried
/// first; the enclosures are refined through [`INTERVAL_ROUNDS`].
pub fn compare_with<F>(exact: Option<Ordering>, mut enclose: F) -> Comparison
where
    F: FnMut(u64) -> (Interval, Interval),
{
    let ratio_at = |l: &Interval, r: &Interval| l.div(r);
    if let Some(ord) = exact {
        let (l, r) = enclose(INTERVAL_ROUNDS[0]);
        return Comparison {
            ordering: Some(ord),
            channel: if ord == Ordering::Equal {
                EqualityChannel::ExactYes
            } else {
                EqualityChannel::ExactNo
            },
            ratio: ratio_at(&l, &r),
            precision: 0,
        };
    }
    let mut last = None;
    for &prec in &INTERVAL_ROUNDS {
        let (l, r) = enclose(prec);
        let ordering = if l.hi < r.lo {
            Some(Ordering::Less)
        } else if l.lo > r.hi {
            Some(Ordering::Greater)
        } else {
            None
        };
        let ratio = ratio_at(&l, &r);
        if ordering.is_some() {
            return Comparison {
                ordering,
                channel: EqualityChannel::ExactNo,
                ratio,
                precision: prec,
            };
        }
        last = Some((ratio, prec));
    }
    let (ratio, precision) = last.expect("at least one round");
    let channel = match &ratio {
        Some(q) if within_tolerance(q) => EqualityChannel::WithinTolerance,
        _ => EqualityChannel::UndecidedInterval,
    };
    Comparison {
        ordering: None,
        channel,
        ratio,
        precision,
    }
}

pub fn compare(lhs: &PowerProduct, rhs: &PowerProduct) -> Comparison {
    compare_with(lhs.cmp_exact(rhs), |p| (lhs.interval(p), rhs.interval(p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn normalization_folds_roots() {
        let p = PowerProduct::power(int(8), rat(2, 3));
        assert_eq!(p.as_rational(), Some(int(4)));
        let p = PowerProduct::power(int(2), rat(1, 2)).mul(&PowerProduct::power(int(2), rat(1, 2)));
        assert_eq!(p.as_rational(), Some(int(2)));
        let p = PowerProduct::power(int(2), rat(3, 2));
        assert_eq!(p.to_string(), "2 * (2)^(1/2)");
        let m = MeasureValue::new(int(3), int(2)).unwrap();
        assert_eq!(PowerProduct::measure(&m).pow(&int(2)).as_rational(), Some(int(18)));
        assert!(PowerProduct::power(int(0), rat(1, 2)).is_zero());
    }

    #[test]
    fn exact_comparisons() {
        // 2^{1/2} vs 3^{1/3}: 2^3 = 8 < 9 = 3^2
        let a = PowerProduct::power(int(2), rat(1, 2));
        let b = PowerProduct::power(int(3), rat(1, 3));
        assert_eq!(a.cmp_exact(&b), Some(Ordering::Less));
        let c = compare(&a, &b);
        assert_eq!(c.channel, EqualityChannel::ExactNo);
        assert_eq!(c.ordering, Some(Ordering::Less));
        // (4/3) vs (8/6) * 2^{3/2} / 2^{3/2}
        let x = PowerProduct::rational(rat(4, 3));
        let y = PowerProduct::rational(rat(8, 6))
            .mul(&PowerProduct::power(int(2), rat(3, 2)))
            .mul(&PowerProduct::power(int(2), rat(-3, 2)));
        assert_eq!(compare(&x, &y).channel, EqualityChannel::ExactYes);
    }

    #[test]
    fn interval_fallback_decides() {
        let a = PowerProduct::power(int(2), rat(1, 2));
        let b = PowerProduct::rational(rat(141_421_356, 100_000_000));
        let c = compare_with(None, |p| (a.interval(p), b.interval(p)));
        assert_eq!(c.ordering, Some(Ordering::Greater));
        assert_eq!(c.precision, 256);
        let c = compare_with(None, |p| (a.interval(p), a.interval(p)));
        assert_eq!(c.ordering, None);
        assert_eq!(c.channel, EqualityChannel::WithinTolerance);
    }

    #[test]
    fn decimal_reporting() {
        let i = PowerProduct::power(int(2), rat(1, 2)).interval(256);
        let d = DecimalInterval::enclosing(&i);
        let [lo, hi]: [String; 2] = d.clone().into();
        assert!(lo.starts_with("1.41421356237309504880168872420969807"));
        assert!(hi.starts_with("1.41421356237309504880168872420969807"));
        assert!(d.0.lo <= i.lo && i.hi <= d.0.hi);
        let back = DecimalInterval::try_from([lo, hi]).unwrap();
        assert_eq!(back, d);
        assert_eq!(format_decimal(&rat(-1, 8)), "-0.125");
        assert_eq!(format_decimal(&int(12)), "12");
        assert_eq!(format_decimal(&rat(1, 3)), "1/3");
    }

    proptest! {
        #[test]
        fn root_enclosures_are_valid(a in 1i64..10_000, b in 1i64..1000, q in 2u32..7) {
            let base = rat(a, b);
            let e = Rational::new(1.into(), q.into());
            let i = Interval::rational_power(&base, &e, 256);
            let lo_q = num_traits::pow(i.lo.clone(), q as usize);
            let hi_q = num_traits::pow(i.hi.clone(), q as usize);
            prop_assert!(lo_q <= base && base <= hi_q);
            let rel = i.width() / &i.lo;
            prop_assert!(rel < Rational::new(1.into(), pow2(240)));
        }

        #[test]
        fn exact_and_float_orders_agree(a in 1i64..500, b in 1i64..500, p in 1i64..5, q in 1i64..5) {
            let x = PowerProduct::power(int(a), rat(1, q));
            let y = PowerProduct::power(int(b), rat(1, p));
            let fx = (a as f64).powf(1.0 / q as f64);
            let fy = (b as f64).powf(1.0 / p as f64);
            if (fx - fy).abs() > 1e-9 * fx.max(fy) {
                prop_assert_eq!(x.cmp_exact(&y), fx.partial_cmp(&fy));
            }
        }
    }
}
