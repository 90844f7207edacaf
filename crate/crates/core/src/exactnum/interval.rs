//! Validated fixed-point intervals.
//!
//! A `FixedInterval` stores `midpoint * 2^-scale_bits` with a radius in the
//! same units; the true value it encloses is guaranteed to lie within
//! `[midpoint - radius, midpoint + radius] * 2^-scale_bits`. All rounding is
//! outward: every operation widens the radius enough to keep the guarantee.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::rational::{dyadic, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedInterval {
    pub scale_bits: u32,
    pub midpoint: BigInt,
    pub radius: BigUint,
}

impl FixedInterval {
    pub fn exact(midpoint: BigInt, scale_bits: u32) -> Self {
        FixedInterval {
            scale_bits,
            midpoint,
            radius: BigUint::zero(),
        }
    }

    pub fn zero(scale_bits: u32) -> Self {
        Self::exact(BigInt::zero(), scale_bits)
    }

    /// Exact dyadic enclosure of a rational: outward rounding costs one ulp
    /// unless the denominator is a power of two.
    pub fn from_rational(r: &Rational, scale_bits: u32) -> Self {
        let num = r.numer() << scale_bits;
        let (q, rem) = num_integer::Integer::div_rem(&num, r.denom());
        if rem.is_zero() {
            Self::exact(q, scale_bits)
        } else {
            FixedInterval {
                scale_bits,
                midpoint: q,
                radius: BigUint::one(),
            }
        }
    }

    pub fn lower(&self) -> BigInt {
        &self.midpoint - BigInt::from(self.radius.clone())
    }

    pub fn upper(&self) -> BigInt {
        &self.midpoint + BigInt::from(self.radius.clone())
    }

    pub fn lower_rational(&self) -> Rational {
        dyadic(self.lower(), self.scale_bits)
    }

    pub fn upper_rational(&self) -> Rational {
        dyadic(self.upper(), self.scale_bits)
    }

    pub fn midpoint_rational(&self) -> Rational {
        dyadic(self.midpoint.clone(), self.scale_bits)
    }

    /// Width as a rational (2 * radius * 2^-scale).
    pub fn width(&self) -> Rational {
        dyadic(BigInt::from(self.radius.clone()) << 1, self.scale_bits)
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        &self.lower_rational() <= r && r <= &self.upper_rational()
    }

    /// True if `radius * 2^-scale <= 2^-bits`.
    pub fn radius_at_most(&self, bits: u32) -> bool {
        if self.scale_bits >= bits {
            self.radius.bits() <= u64::from(self.scale_bits - bits)
        } else {
            self.radius.is_zero()
        }
    }

    pub fn add(&self, other: &FixedInterval) -> FixedInterval {
        let (a, b) = align(self, other);
        FixedInterval {
            scale_bits: a.scale_bits,
            midpoint: a.midpoint + b.midpoint,
            radius: a.radius + b.radius,
        }
    }

    pub fn sub(&self, other: &FixedInterval) -> FixedInterval {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FixedInterval {
        FixedInterval {
            scale_bits: self.scale_bits,
            midpoint: -self.midpoint.clone(),
            radius: self.radius.clone(),
        }
    }

    /// Multiplication by an exact integer.
    pub fn mul_int(&self, k: &BigInt) -> FixedInterval {
        FixedInterval {
            scale_bits: self.scale_bits,
            midpoint: &self.midpoint * k,
            radius: &self.radius * k.magnitude(),
        }
    }

    /// Multiplication by an exact rational, staying at the same scale; one
    /// ulp of outward rounding when the division is inexact.
    pub fn mul_rational(&self, r: &Rational) -> FixedInterval {
        if r.is_zero() {
            return FixedInterval::zero(self.scale_bits);
        }
        let num = r.numer();
        let den = r.denom();
        let mid_num = &self.midpoint * num;
        let (q, rem) = num_integer::Integer::div_rem(&mid_num, den);
        let mut radius = num_integer::Integer::div_ceil(
            &(&self.radius * num.magnitude()),
            den.magnitude(),
        );
        if !rem.is_zero() {
            radius += BigUint::one();
        }
        FixedInterval {
            scale_bits: self.scale_bits,
            midpoint: q,
            radius,
        }
    }

    /// Full interval product, result at the max of the two scales.
    pub fn mul(&self, other: &FixedInterval) -> FixedInterval {
        let (a, b) = align(self, other);
        let f = a.scale_bits;
        // (m1 +- r1)(m2 +- r2) 2^-2f -> rescale by 2^-f
        let mid_full = &a.midpoint * &b.midpoint;
        let rad_full = a.midpoint.magnitude() * &b.radius
            + b.midpoint.magnitude() * &a.radius
            + &a.radius * &b.radius;
        let (q, rem) = shift_round(&mid_full, f);
        let mut radius = num_integer::Integer::div_ceil(&rad_full, &(BigUint::one() << f));
        if rem {
            radius += BigUint::one();
        }
        FixedInterval {
            scale_bits: f,
            midpoint: q,
            radius,
        }
    }

    /// Divide by a positive integer.
    pub fn div_uint(&self, k: &BigUint) -> FixedInterval {
        assert!(!k.is_zero());
        let kk = BigInt::from(k.clone());
        let (q, rem) = num_integer::Integer::div_rem(&self.midpoint, &kk);
        let mut radius = num_integer::Integer::div_ceil(&self.radius, k);
        if !rem.is_zero() {
            radius += BigUint::one();
        }
        FixedInterval {
            scale_bits: self.scale_bits,
            midpoint: q,
            radius,
        }
    }

    /// Rescale to `bits`, outward rounding.
    pub fn to_scale(&self, bits: u32) -> FixedInterval {
        if bits == self.scale_bits {
            return self.clone();
        }
        if bits > self.scale_bits {
            let shift = bits - self.scale_bits;
            return FixedInterval {
                scale_bits: bits,
                midpoint: &self.midpoint << shift,
                radius: &self.radius << shift,
            };
        }
        let shift = self.scale_bits - bits;
        let (q, rem) = shift_round(&self.midpoint, shift);
        let mut radius = num_integer::Integer::div_ceil(&self.radius, &(BigUint::one() << shift));
        if rem {
            radius += BigUint::one();
        }
        FixedInterval {
            scale_bits: bits,
            midpoint: q,
            radius,
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &FixedInterval) -> FixedInterval {
        let (a, b) = align(self, other);
        let lo = a.lower().min(b.lower());
        let hi = a.upper().max(b.upper());
        from_bounds(lo, hi, a.scale_bits)
    }

    /// |self| as an interval.
    pub fn abs(&self) -> FixedInterval {
        let lo = self.lower();
        let hi = self.upper();
        if !lo.is_negative() {
            self.clone()
        } else if !hi.is_positive() {
            self.neg()
        } else {
            from_bounds(BigInt::zero(), lo.magnitude().max(hi.magnitude()).clone().into(), self.scale_bits)
        }
    }

    /// Enclosure of sqrt(self); requires a nonnegative lower bound.
    pub fn sqrt(&self) -> FixedInterval {
        let f = self.scale_bits;
        let lo = self.lower().max(BigInt::zero());
        let hi = self.upper();
        assert!(!hi.is_negative(), "sqrt of a negative interval");
        // sqrt(v * 2^-f) * 2^f = sqrt(v * 2^f)
        let lo_s = (lo.magnitude() << f).sqrt();
        let hi_s = (hi.magnitude() << f).sqrt() + BigUint::one();
        from_bounds(BigInt::from(lo_s), BigInt::from(hi_s), f)
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.midpoint_rational();
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    }
}

fn from_bounds(lo: BigInt, hi: BigInt, scale_bits: u32) -> FixedInterval {
    debug_assert!(lo <= hi);
    let two = BigInt::from(2);
    let mid = num_integer::Integer::div_floor(&(&lo + &hi), &two);
    // radius covers both endpoints after the floor midpoint
    let r1 = (&hi - &mid).magnitude().clone();
    let r2 = (&mid - &lo).magnitude().clone();
    FixedInterval {
        scale_bits,
        midpoint: mid,
        radius: r1.max(r2),
    }
}

fn align(a: &FixedInterval, b: &FixedInterval) -> (FixedInterval, FixedInterval) {
    let f = a.scale_bits.max(b.scale_bits);
    (a.to_scale(f), b.to_scale(f))
}

/// Round-to-nearest shift right; the bool reports inexactness.
fn shift_round(v: &BigInt, shift: u32) -> (BigInt, bool) {
    if shift == 0 {
        return (v.clone(), false);
    }
    let mask = (BigUint::one() << shift) - BigUint::one();
    let inexact = !(v.magnitude() & &mask).is_zero();
    let half = BigInt::one() << (shift - 1);
    let shifted = (v + half) >> shift;
    (shifted, inexact)
}

/// A value reduced mod 1. When `wrap` is set the enclosure straddled an
/// integer and `value` holds the torus distance to 0 (the side is unknown);
/// otherwise `value` encloses the fractional part inside [0,1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mod1 {
    pub value: FixedInterval,
    pub wrap: bool,
}

impl Mod1 {
    pub fn new(value: FixedInterval, wrap: bool) -> Self {
        Mod1 { value, wrap }
    }

    /// An interval on the real line containing a representative of the
    /// value: the stored enclosure, or for wrapped values the symmetric
    /// ball around 0 (the lift differs by an integer, which callers that
    /// only use it 1-periodically or mod 1 may ignore).
    pub fn representative(&self) -> FixedInterval {
        if self.wrap {
            FixedInterval {
                scale_bits: self.value.scale_bits,
                midpoint: BigInt::zero(),
                radius: self.value.midpoint.magnitude() + &self.value.radius,
            }
        } else {
            self.value.clone()
        }
    }

    pub fn exact_rational(r: &Rational, scale_bits: u32) -> Self {
        let reduced = r - r.floor();
        Mod1 {
            value: FixedInterval::from_rational(&reduced, scale_bits),
            wrap: false,
        }
    }

    /// Midpoint as a rational in [0,1).
    pub fn position(&self) -> Rational {
        self.value.midpoint_rational()
    }

    /// Upper bound on the torus distance to the rational point `t`.
    pub fn torus_distance_upper(&self, t: &Rational) -> Rational {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let dist = |p: &Rational| -> Rational {
            let d = p - t;
            let d = &d - &d.floor();
            if d > half {
                Rational::one() - d
            } else {
                d
            }
        };
        let p = self.position();
        // a wrapped value sits at +p or -p on the circle
        let base = if self.wrap {
            dist(&p).max(dist(&-p))
        } else {
            dist(&p)
        };
        base + dyadic(BigInt::from(self.value.radius.clone()), self.value.scale_bits)
    }
}

/// Reduce an enclosure of a real number mod 1. If it straddles an integer
/// the result is wrapped (torus distance to 0), otherwise it is the
/// fractional-part enclosure inside [0,1).
pub fn reduce_mod1(lift: &FixedInterval) -> Mod1 {
    let w = lift.scale_bits;
    let unit = BigInt::one() << w;
    let fl = num_integer::Integer::div_floor(&lift.midpoint, &unit);
    let reduced = FixedInterval {
        scale_bits: w,
        midpoint: &lift.midpoint - fl * &unit,
        radius: lift.radius.clone(),
    };
    if reduced.lower().is_negative() || reduced.upper() >= unit {
        Mod1::new(torus_distance_to_integer(&reduced), true)
    } else {
        Mod1::new(reduced, false)
    }
}

/// Torus distance to the nearest integer, as an interval at the same scale.
pub fn torus_distance_to_integer(v: &FixedInterval) -> FixedInterval {
    let f = v.scale_bits;
    let unit = BigInt::one() << f;
    let half = BigInt::one() << (f - 1);
    // reduce the midpoint to [-1/2, 1/2)
    let m = num_integer::Integer::mod_floor(&(&v.midpoint + &half), &unit) - &half;
    let dist_mid = m.magnitude().clone();
    // distance function is 1-Lipschitz, so the radius carries over; clamp to [0, 1/2]
    let lo = BigInt::from(dist_mid.clone()) - BigInt::from(v.radius.clone());
    let hi = BigInt::from(dist_mid) + BigInt::from(v.radius.clone());
    let lo = lo.max(BigInt::zero());
    let hi = hi.min(half);
    from_bounds(lo, hi, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn iv(mid: i64, rad: u64, f: u32) -> FixedInterval {
        FixedInterval {
            scale_bits: f,
            midpoint: BigInt::from(mid),
            radius: BigUint::from(rad),
        }
    }

    #[test]
    fn rational_roundtrip() {
        let half = FixedInterval::from_rational(&rat(1, 2), 8);
        assert_eq!(half.midpoint, BigInt::from(128));
        assert!(half.radius.is_zero());
        let third = FixedInterval::from_rational(&rat(1, 3), 8);
        assert!(third.contains_rational(&rat(1, 3)));
        assert!(third.radius <= BigUint::from(1u32));
    }

    #[test]
    fn arithmetic_encloses() {
        let a = FixedInterval::from_rational(&rat(1, 3), 64);
        let b = FixedInterval::from_rational(&rat(1, 7), 64);
        let s = a.add(&b);
        assert!(s.contains_rational(&rat(10, 21)));
        let p = a.mul(&b);
        assert!(p.contains_rational(&rat(1, 21)));
        let m = a.mul_rational(&rat(21, 1));
        assert!(m.contains_rational(&rat(7, 1)));
    }

    #[test]
    fn sqrt_encloses() {
        let two = FixedInterval::from_rational(&rat(2, 1), 96);
        let s = two.sqrt();
        // 2 must lie in s*s
        let sq = s.mul(&s);
        assert!(sq.contains_rational(&rat(2, 1)));
        assert!(s.radius <= BigUint::from(4u32));
    }

    #[test]
    fn rescaling_is_outward() {
        let a = iv(1000, 3, 16);
        let b = a.to_scale(8);
        assert!(b.lower_rational() <= a.lower_rational());
        assert!(b.upper_rational() >= a.upper_rational());
        let c = a.to_scale(24);
        assert_eq!(c.lower_rational(), a.lower_rational());
    }

    #[test]
    fn torus_distance() {
        // 5.0 exactly: distance 0
        let v = iv(5 << 16, 0, 16);
        let d = torus_distance_to_integer(&v);
        assert!(d.midpoint.is_zero() && d.radius.is_zero());
        // 4.75: distance 1/4
        let v = iv((4 << 16) + (3 << 14), 2, 16);
        let d = torus_distance_to_integer(&v);
        assert!(d.contains_rational(&rat(1, 4)));
        // -0.125: distance 1/8
        let v = iv(-(1 << 13), 0, 16);
        let d = torus_distance_to_integer(&v);
        assert!(d.contains_rational(&rat(1, 8)));
    }
}
