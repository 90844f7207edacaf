//! Interval evaluation of symbolic reals at adaptive working precision.
//!
//! Working precision is raised until the requested output width is certain;
//! if a decimal-literal generator cannot supply the bits, evaluation fails
//! loudly instead of degrading.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::basis::{Basis, GeneratorKind};
use crate::exactnum::interval::{torus_distance_to_integer, FixedInterval};
use crate::exactnum::rational::{parse_rational, Rational};
use crate::exactnum::symbolic::SymbolicReal;

static MAX_BITS: AtomicU32 = AtomicU32::new(4096);

/// Cap on working precision (the CLI wires EQUIDIST_MAX_BITS here).
pub fn set_max_working_bits(bits: u32) {
    MAX_BITS.store(bits.max(64), Ordering::Relaxed);
}

pub fn max_working_bits() -> u32 {
    MAX_BITS.load(Ordering::Relaxed)
}

fn check_cap(needed: u32) -> Result<()> {
    let cap = max_working_bits();
    if needed > cap {
        Err(Error::PrecisionCapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

/// Enclosure of sqrt(radicand) at `bits`, radius at most 2 ulp.
pub fn sqrt_interval(radicand: &Rational, bits: u32) -> FixedInterval {
    assert!(radicand.is_positive());
    let num = radicand.numer().magnitude();
    let den = radicand.denom().magnitude();
    // floor(sqrt(num * 4^bits / den))
    let m = (num << (2 * bits as u64)) / den;
    let s = m.sqrt();
    FixedInterval {
        scale_bits: bits,
        midpoint: BigInt::from(s) + BigInt::one(),
        radius: BigUint::one(),
    }
}

fn arctan_inv_scaled(x: u64, bits: u32) -> (BigUint, u64) {
    // arctan(1/x) * 2^bits by the alternating series; returns (value, error_ulps)
    let one = BigUint::one() << bits;
    let x2 = BigUint::from(x) * BigUint::from(x);
    let mut power = BigUint::from(x);
    let mut k: u64 = 0;
    let mut acc = BigInt::zero();
    let mut terms: u64 = 0;
    loop {
        let denom = &power * BigUint::from(2 * k + 1);
        if denom > one {
            break;
        }
        let term = BigInt::from(&one / denom);
        if k.is_multiple_of(2) {
            acc += term;
        } else {
            acc -= term;
        }
        power *= &x2;
        k += 1;
        terms += 1;
    }
    // each floor costs <= 1 ulp, truncation <= first omitted term <= 1 ulp
    (acc.magnitude().clone(), terms + 1)
}

/// Machin's formula: pi = 16 arctan(1/5) - 4 arctan(1/239).
fn compute_pi(bits: u32) -> FixedInterval {
    let guard = 24;
    let w = bits + guard;
    let (a, ea) = arctan_inv_scaled(5, w);
    let (b, eb) = arctan_inv_scaled(239, w);
    let mid = BigInt::from(a) * 16 - BigInt::from(b) * 4;
    let rad = BigUint::from(16 * ea + 4 * eb);
    FixedInterval {
        scale_bits: w,
        midpoint: mid,
        radius: rad,
    }
    .to_scale(bits)
}

static PI_CACHE: Mutex<Option<(u32, FixedInterval)>> = Mutex::new(None);

/// Enclosure of pi at `bits`, radius at most 2 ulp; cached at the widest
/// precision requested so far.
pub fn pi_interval(bits: u32) -> FixedInterval {
    let mut cache = PI_CACHE.lock().unwrap();
    match &*cache {
        Some((have, iv)) if *have >= bits => iv.to_scale(bits),
        _ => {
            let iv = compute_pi(bits);
            *cache = Some((bits, iv.clone()));
            iv
        }
    }
}

/// Evaluation context over one basis; caches generator enclosures per
/// working precision. Cheap to construct, not shared across threads.
pub struct Evaluator<'a> {
    basis: &'a Basis,
    cache: RefCell<HashMap<(usize, u32), FixedInterval>>,
    decimals: RefCell<HashMap<usize, Rational>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(basis: &'a Basis) -> Self {
        Evaluator {
            basis,
            cache: RefCell::new(HashMap::new()),
            decimals: RefCell::new(HashMap::new()),
        }
    }

    pub fn basis(&self) -> &'a Basis {
        self.basis
    }

    fn generator_interval(&self, index: usize, bits: u32) -> Result<FixedInterval> {
        if let Some(iv) = self.cache.borrow().get(&(index, bits)) {
            return Ok(iv.clone());
        }
        let gen = &self.basis.generators()[index];
        let iv = match &gen.kind {
            GeneratorKind::Sqrt { of } => {
                let r = parse_rational(of)?;
                sqrt_interval(&r, bits)
            }
            GeneratorKind::Pi => pi_interval(bits),
            GeneratorKind::Decimal { digits, bits: declared } => {
                if *declared < bits {
                    return Err(Error::PrecisionUnavailable {
                        generator: gen.name.clone(),
                        declared: *declared,
                        needed: bits,
                    });
                }
                let r = {
                    let mut cache = self.decimals.borrow_mut();
                    cache
                        .entry(index)
                        .or_insert_with(|| parse_rational(digits).expect("validated digits"))
                        .clone()
                };
                let mut iv = FixedInterval::from_rational(&r, bits);
                // the literal itself is only trusted to `declared` >= bits,
                // i.e. to within one ulp here
                iv.radius += BigUint::one();
                iv
            }
        };
        self.cache.borrow_mut().insert((index, bits), iv.clone());
        Ok(iv)
    }

    /// Working precision that comfortably certifies width 2^-(target+3)
    /// for this value.
    fn working_bits(&self, x: &SymbolicReal, target: u32) -> u32 {
        let mut coeff_bits: u64 = 0;
        for c in x.terms.values() {
            let b = c.numer().magnitude().bits().saturating_sub(c.denom().magnitude().bits() - 1);
            coeff_bits = coeff_bits.max(b);
        }
        let n_terms = x.terms.len().max(1) as u64;
        target + 12 + coeff_bits as u32 + (64 - n_terms.leading_zeros())
    }

    /// Checks every decimal generator used by `x` can deliver absolute
    /// accuracy 2^-(target+8) through its coefficient.
    fn check_decimals(&self, x: &SymbolicReal, target: u32) -> Result<()> {
        for (name, coeff) in &x.terms {
            let gen = self.basis.require(name)?;
            if let GeneratorKind::Decimal { bits: declared, .. } = &gen.kind {
                let cb = coeff
                    .numer()
                    .magnitude()
                    .bits()
                    .saturating_sub(coeff.denom().magnitude().bits().saturating_sub(1))
                    as u32;
                let needed = target + 8 + cb;
                if *declared < needed {
                    return Err(Error::PrecisionUnavailable {
                        generator: name.clone(),
                        declared: *declared,
                        needed,
                    });
                }
            }
        }
        Ok(())
    }

    /// Raw evaluation at a fixed working precision.
    pub fn eval_at(&self, x: &SymbolicReal, bits: u32) -> Result<FixedInterval> {
        let mut acc = FixedInterval::from_rational(&x.rational_part, bits);
        for (name, coeff) in &x.terms {
            let idx = self
                .basis
                .index_of(name)
                .ok_or_else(|| Error::Config(format!("generator `{name}` is not declared in the basis")))?;
            let g = self.generator_interval(idx, bits)?;
            acc = acc.add(&g.mul_rational(coeff));
        }
        Ok(acc)
    }

    /// Enclosure of `x` with width at most 2^-target (radius well below it).
    pub fn eval(&self, x: &SymbolicReal, target: u32) -> Result<FixedInterval> {
        self.check_decimals(x, target)?;
        let mut w = self.working_bits(x, target);
        for _ in 0..3 {
            check_cap(w)?;
            match self.eval_at(x, w) {
                Ok(iv) => {
                    if iv.radius_at_most(target + 3) {
                        return Ok(iv);
                    }
                    w += 64;
                }
                Err(e @ Error::PrecisionUnavailable { .. }) => return Err(e),
                Err(e) => return Err(e),
            }
        }
        Err(Error::PrecisionCapExceeded {
            needed: w,
            cap: max_working_bits(),
        })
    }

    /// Fractional part of `x`: an enclosure of width <= 2^-target reported at
    /// scale target+8. The flag is set when the enclosure straddles an
    /// integer, in which case the value is the torus distance to 0.
    pub fn frac(&self, x: &SymbolicReal, target: u32) -> Result<(FixedInterval, bool)> {
        let iv = self.eval(x, target)?;
        let w = iv.scale_bits;
        let unit = BigInt::one() << w;
        let floor = num_integer::Integer::div_floor(&iv.midpoint, &unit);
        let reduced = FixedInterval {
            scale_bits: w,
            midpoint: &iv.midpoint - floor * &unit,
            radius: iv.radius.clone(),
        };
        let out_scale = target + 8;
        if reduced.lower().is_negative() || reduced.upper() >= unit {
            let d = torus_distance_to_integer(&reduced);
            Ok((d.to_scale(out_scale), true))
        } else {
            Ok((reduced.to_scale(out_scale), false))
        }
    }

    /// Fractional part of m*x.
    pub fn frac_scaled(&self, x: &SymbolicReal, m: &BigInt, target: u32) -> Result<(FixedInterval, bool)> {
        let scaled = x.scale(&Rational::from_integer(m.clone()));
        self.frac(&scaled, target)
    }
}

/// One-call form of `Evaluator::eval`.
pub fn eval_interval(basis: &Basis, x: &SymbolicReal, target: u32) -> Result<FixedInterval> {
    Evaluator::new(basis).eval(x, target)
}

/// Enclosure of cos(2*pi*t). Any finite `t` is accepted; the argument is
/// reduced with j = round(2t) so the Taylor series runs on |theta| <= pi/2.
pub fn cos2pi(t: &FixedInterval) -> FixedInterval {
    let (c, _s) = cos_sin_2pi(t, true, false);
    c.unwrap()
}

/// Enclosure of sin(2*pi*t).
pub fn sin2pi(t: &FixedInterval) -> FixedInterval {
    let (_c, s) = cos_sin_2pi(t, false, true);
    s.unwrap()
}

/// Both at once (shared argument reduction), for the exponential sums.
pub fn cos_sin_2pi(
    t: &FixedInterval,
    want_cos: bool,
    want_sin: bool,
) -> (Option<FixedInterval>, Option<FixedInterval>) {
    let w = t.scale_bits;
    // j = nearest integer to 2t; r = t - j/2 has |r| <= 1/4 + radius
    let doubled = &t.midpoint << 1u32;
    let unit = BigInt::one() << w;
    let j = num_integer::Integer::div_floor(&(&doubled + (BigInt::one() << (w - 1))), &unit);
    let r = FixedInterval {
        scale_bits: w,
        midpoint: &t.midpoint - &j * (BigInt::one() << (w - 1)),
        radius: t.radius.clone(),
    };
    // theta = 2 pi r
    let pi = pi_interval(w);
    let theta = pi.mul(&r).mul_int(&BigInt::from(2));
    let theta2 = theta.mul(&theta);
    let negate = num_integer::Integer::mod_floor(&j, &BigInt::from(2)).is_one();

    let sign = |v: FixedInterval| if negate { v.neg() } else { v };

    let cos = if want_cos {
        Some(sign(taylor_alternating(&theta2, w, false)))
    } else {
        None
    };
    let sin = if want_sin {
        let base = taylor_alternating(&theta2, w, true);
        Some(sign(theta.mul(&base)))
    } else {
        None
    };
    (cos, sin)
}

/// cos and sin of a plain radian argument; reduction by half turns via the
/// pi enclosure keeps the Taylor argument below pi/2 in magnitude.
pub fn cos_sin_rad(x: &FixedInterval) -> (FixedInterval, FixedInterval) {
    let w = x.scale_bits;
    let pi = pi_interval(w);
    let half = &pi.midpoint >> 1u32;
    let j = num_integer::Integer::div_floor(&(&x.midpoint + half), &pi.midpoint);
    let r = x.sub(&pi.mul_int(&j));
    let r2 = r.mul(&r);
    let negate = num_integer::Integer::mod_floor(&j, &BigInt::from(2)).is_one();
    let sign = |v: FixedInterval| if negate { v.neg() } else { v };
    let c = sign(taylor_alternating(&r2, w, false));
    let s = sign(r.mul(&taylor_alternating(&r2, w, true)));
    (c, s)
}

/// sum_k (-1)^k x^k / (2k)!  (cos form) or / (2k+1)! (sin/theta form),
/// with the truncation absorbed into the radius.
fn taylor_alternating(x: &FixedInterval, w: u32, odd: bool) -> FixedInterval {
    let mut term = FixedInterval::exact(BigInt::one() << w, w);
    let mut acc = term.clone();
    let mut k: u64 = 1;
    loop {
        let d = if odd { (2 * k) * (2 * k + 1) } else { (2 * k - 1) * (2 * k) };
        term = term.mul(x).div_uint(&BigUint::from(d));
        if k % 2 == 1 {
            acc = acc.sub(&term);
        } else {
            acc = acc.add(&term);
        }
        let small = term.abs().upper().magnitude() <= &BigUint::from(4u32);
        if small || k > u64::from(w) {
            // alternating series: truncation bounded by the next term
            acc.radius += term.abs().upper().magnitude() + BigUint::from(4u32);
            break;
        }
        k += 1;
    }
    acc
}
