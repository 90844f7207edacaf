//! Arbitrary-precision rationals and the decimal formatting used in reports.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps the
//! canonical form we rely on (gcd 1, positive denominator).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat_i64(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"p/q"` or a decimal literal such as `"0.3"` / `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::config("empty rational"));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad numerator in `{s}`")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad denominator in `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Config(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_digits = if int_part.is_empty() || int_part == "-" {
            "0".to_string()
        } else {
            int_part.trim_start_matches('+').to_string()
        };
        let i: BigInt = int_digits
            .parse()
            .map_err(|_| Error::Config(format!("bad integer part in `{s}`")))?;
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Config(format!("bad fractional digits in `{s}`")));
        }
        let f: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part
                .parse()
                .map_err(|_| Error::Config(format!("bad fractional part in `{s}`")))?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mag = i.abs() * &den + f;
        let signed = if neg { -mag } else { mag };
        return Ok(Rational::new(signed, den));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Config(format!("bad rational `{s}`")))?;
    Ok(Rational::from_integer(n))
}

/// Renders `p/q` (or just `p` for integers); inverse of `parse_rational`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats a rational in decimal with `sig` significant digits, round half
/// to even. All report decimals go through this so output is byte-stable.
pub fn decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();

    // Find exponent e with 10^(e-1) <= num/den < 10^e.
    let mut e: i64 = 0;
    let ten = BigUint::from(10u32);
    let mut scaled_num = num.clone();
    let mut scaled_den = den.clone();
    while scaled_num >= scaled_den {
        scaled_den *= &ten;
        e += 1;
    }
    while &scaled_num * &ten < scaled_den {
        scaled_num *= &ten;
        e -= 1;
    }

    // digits = round(num/den * 10^(sig - e)) with sig digits.
    let shift = sig as i64 - e;
    let (mut n2, d2) = if shift >= 0 {
        (num * ten.pow(shift as u32), den)
    } else {
        (num, den * ten.pow((-shift) as u32))
    };
    let q = &n2 / &d2;
    let rem2 = (&n2 - &q * &d2) * 2u32;
    n2 = if rem2 > d2 || (rem2 == d2 && (&q % 2u32) == BigUint::one()) {
        q + 1u32
    } else {
        q
    };
    let mut digits = n2.to_string();
    if digits.len() > sig {
        // rounding carried into a new leading digit
        e += 1;
        digits.truncate(sig);
    }
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }

    let mantissa_len = digits.len() as i64;
    let body = if e <= 0 {
        format!("0.{}{}", "0".repeat((-e) as usize), digits)
    } else if e >= mantissa_len {
        format!("{}{}", digits, "0".repeat((e - mantissa_len) as usize))
    } else {
        format!("{}.{}", &digits[..e as usize], &digits[e as usize..])
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Rational p/q from a dyadic pair `m / 2^f`.
pub fn dyadic(m: BigInt, f: u32) -> Rational {
    Rational::new(m, BigInt::one() << f)
}

/// serde adapter: rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// serde adapter: generator-coefficient maps with `"p/q"` values.
pub mod serde_rat_map {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, format_rational(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| Ok((k, parse_rational(&v).map_err(de::Error::custom)?)))
            .collect()
    }
}

/// Least `v` in the Stern-Brocot sense: the rational with smallest
/// denominator inside the closed interval `[lo, hi]`.
pub fn simplest_rational_in(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo <= hi);
    if lo == hi {
        return lo.clone();
    }
    if lo.is_negative() && !hi.is_negative() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_rational_in(&-hi.clone(), &-lo.clone());
    }
    simplest_nonneg(lo, hi)
}

fn simplest_nonneg(lo: &Rational, hi: &Rational) -> Rational {
    // Walk the continued-fraction expansion shared by both endpoints.
    let fl = lo.floor();
    if &fl == lo {
        return lo.clone();
    }
    if hi.floor() > fl {
        // an integer lies inside [lo, hi]
        return Rational::from_integer(fl.to_integer() + 1);
    }
    // Same integer part; recurse on reciprocals of the fractional parts.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    let inner = simplest_nonneg(&hi_frac.recip(), &lo_frac.recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), rat_i64(7));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(decimal_string(&rat(1, 2), 20), "0.5");
        assert_eq!(decimal_string(&rat(1, 3), 5), "0.33333");
        assert_eq!(decimal_string(&rat(2, 3), 5), "0.66667");
        assert_eq!(decimal_string(&rat(-1, 8), 20), "-0.125");
        assert_eq!(decimal_string(&rat_i64(1000), 3), "1000");
        assert_eq!(decimal_string(&rat_i64(0), 20), "0");
        // round-half-even on an exact tie
        assert_eq!(decimal_string(&rat(15, 100), 1), "0.2");
        assert_eq!(decimal_string(&rat(25, 100), 1), "0.2");
    }

    #[test]
    fn simplest_rational() {
        // smallest-denominator representative of an interval
        let r = simplest_rational_in(&rat(31, 100), &rat(35, 100));
        assert_eq!(r, rat(1, 3));
        let r = simplest_rational_in(&rat(49, 100), &rat(51, 100));
        assert_eq!(r, rat(1, 2));
        let r = simplest_rational_in(&rat(-1, 100), &rat(1, 100));
        assert_eq!(r, rat_i64(0));
        let r = simplest_rational_in(&rat(7, 10), &rat(7, 10));
        assert_eq!(r, rat(7, 10));
    }
}
