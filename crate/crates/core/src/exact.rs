//! Exact rational helpers and certified rational enclosures.
//!
//! Every quantity that is not exactly rational (roots, radicals, PSD interval
//! endpoints) is carried as an [`Enclosure`]: a closed rational interval that
//! is guaranteed to contain the true value.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_bigint(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `base^exp` for a possibly negative exponent.
pub fn pow_i(base: i64, exp: i64) -> Rational {
    let b = BigInt::from(base);
    if exp >= 0 {
        Rational::from_integer(num_traits::pow(b, exp as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(b, (-exp) as usize))
    }
}

pub fn pow2(exp: i64) -> Rational {
    pow_i(2, exp)
}

pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// Renders `p/q` with an explicit denominator, also for integers.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, a bare integer, or a finite decimal literal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(mag, den);
        return Ok(if negative { -r } else { r });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(v))
}

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let negative = r.is_negative() && !rounded.is_zero();
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back on a scaled division for values whose parts overflow f64.
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = r / pow2(shift);
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Largest `k` with `2^k <= |r|`, for nonzero `r`.
pub fn floor_log2_abs(r: &Rational) -> i64 {
    debug_assert!(!r.is_zero());
    let a = r.abs();
    let mut k = a.numer().bits() as i64 - a.denom().bits() as i64;
    while pow2(k) > a {
        k -= 1;
    }
    while pow2(k + 1) <= a {
        k += 1;
    }
    k
}

/// Floor of `x * 2^bits` divided back, i.e. truncation to a dyadic grid.
fn floor_dyadic(x: &Rational, bits: u32) -> BigInt {
    (x * pow2(bits as i64)).floor().to_integer()
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A closed rational interval `[lo, hi]` certified to contain some real quantity.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
    /// Requested width exponent: a freshly computed enclosure has `hi - lo <= 2^-prec`.
    /// Derived enclosures (sums, quotients) keep the smallest input `prec` but
    /// their width is whatever interval arithmetic produced.
    pub prec: u32,
}

/// The certified-bound name used throughout the reports.
pub type AlgebraicBound = Enclosure;

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} , {}]",
            to_decimal(&self.lo, 20),
            to_decimal(&self.hi, 20)
        )
    }
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational, prec: u32) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Enclosure { lo, hi, prec }
    }

    pub fn exact(v: Rational, prec: u32) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.mid())
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// True when every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    /// True unless `self` is certainly strictly greater than `other`.
    pub fn possibly_le(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn width_at_most_bits(&self, bits: u32) -> bool {
        self.width() <= pow2(-(bits as i64))
    }

    fn prec_with(&self, other: &Enclosure) -> u32 {
        self.prec.min(other.prec)
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi, self.prec_with(other))
    }

    pub fn sub(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo - &other.hi, &self.hi - &other.lo, self.prec_with(other))
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure::new(-&self.hi, -&self.lo, self.prec)
    }

    pub fn scale(&self, k: &Rational) -> Enclosure {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Enclosure::new(a, b, self.prec)
        } else {
            Enclosure::new(b, a, self.prec)
        }
    }

    pub fn mul(&self, other: &Enclosure) -> Enclosure {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Enclosure::new(lo, hi, self.prec_with(other))
    }

    /// Reciprocal; `None` when the enclosure touches zero.
    pub fn recip(&self) -> Option<Enclosure> {
        if self.lo.is_positive() || self.hi.is_negative() {
            Some(Enclosure::new(self.hi.recip(), self.lo.recip(), self.prec))
        } else {
            None
        }
    }

    pub fn div(&self, other: &Enclosure) -> Option<Enclosure> {
        other.recip().map(|r| self.mul(&r))
    }

    /// Exact range of `c2*t^2 + c1*t + c0` for `t` in the enclosure.
    pub fn eval_quadratic(&self, c2: &Rational, c1: &Rational, c0: &Rational) -> Enclosure {
        let f = |t: &Rational| c2 * t * t + c1 * t + c0;
        let mut values = vec![f(&self.lo), f(&self.hi)];
        if !c2.is_zero() {
            let vertex = -c1 / (int(2) * c2);
            if self.contains(&vertex) {
                values.push(f(&vertex));
            }
        }
        let lo = values.iter().min().unwrap().clone();
        let hi = values.iter().max().unwrap().clone();
        Enclosure::new(lo, hi, self.prec)
    }

    /// Enclosure of `sqrt(x)` for a nonnegative rational, of width at most `2^-bits`.
    ///
    /// The lower end is `floor(sqrt(x) * 2^bits) / 2^bits`, so raising `bits`
    /// yields nested enclosures.
    pub fn sqrt(x: &Rational, bits: u32) -> Enclosure {
        assert!(!x.is_negative(), "square root of a negative rational");
        let scale = pow2(2 * bits as i64);
        let scaled = floor_dyadic(&(x * &scale), 0);
        let mut s = scaled.sqrt();
        // `scaled` is floor(x * 4^bits); refine so that s^2 <= x*4^bits < (s+1)^2.
        let target = x * &scale;
        while Rational::from_integer(&s * &s) > target {
            s -= 1;
        }
        while Rational::from_integer((&s + 1) * (&s + 1)) <= target {
            s += 1;
        }
        let lo = Rational::new(s.clone(), num_traits::pow(BigInt::from(2), bits as usize));
        let exact = Rational::from_integer(&s * &s) == target;
        let hi = if exact {
            lo.clone()
        } else {
            Rational::new(s + 1, num_traits::pow(BigInt::from(2), bits as usize))
        };
        Enclosure::new(lo, hi, bits)
    }

    pub fn cmp_mid(&self, other: &Enclosure) -> Ordering {
        self.mid().cmp(&other.mid())
    }
}

/// Sign of a big integer as -1/0/1.
pub fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&int(5)), "5/1");
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&ratio(-1, 1000), 2), "0.00");
        assert_eq!(to_decimal(&int(12), 0), "12");
    }

    #[test]
    fn sqrt_enclosures_nest() {
        let two = int(2);
        let coarse = Enclosure::sqrt(&two, 20);
        let fine = Enclosure::sqrt(&two, 40);
        assert!(coarse.contains_enclosure(&fine));
        assert!(fine.width_at_most_bits(40));
        assert!(&fine.lo * &fine.lo <= two && &fine.hi * &fine.hi >= two);
        let four = Enclosure::sqrt(&int(4), 8);
        assert!(four.is_exact());
        assert_eq!(four.lo, int(2));
    }

    #[test]
    fn quadratic_range_includes_vertex() {
        let e = Enclosure::new(int(-1), int(1), 8);
        let r = e.eval_quadratic(&int(1), &int(0), &int(0));
        assert_eq!(r.lo, int(0));
        assert_eq!(r.hi, int(1));
    }

    #[test]
    fn log2_floor() {
        assert_eq!(floor_log2_abs(&int(1)), 0);
        assert_eq!(floor_log2_abs(&int(7)), 2);
        assert_eq!(floor_log2_abs(&int(8)), 3);
        assert_eq!(floor_log2_abs(&ratio(-3, 16)), -3);
    }

    #[test]
    fn large_values_convert_to_f64() {
        let big = pow2(2000) / pow2(1990);
        assert_eq!(to_f64(&big), 1024.0);
    }
}
