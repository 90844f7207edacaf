//! Periodic perturbations: trigonometric sums and piecewise-linear functions.
//!
//! Bodies are stored in unit-period coordinates; the declared period only
//! enters through the rescaling g(x) = f(period * x).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::basis::Basis;
use crate::exactnum::eval::{cos_sin_2pi, cos_sin_rad, Evaluator};
use crate::exactnum::interval::FixedInterval;
use crate::exactnum::rational::{parse_rational, serde_rat, Rational};
use crate::exactnum::symbolic::SymbolicReal;

/// amp * cos(2*pi*harmonic*x + phase*pi + phase_rad), x in unit coords.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrigTerm {
    #[serde(with = "serde_rat")]
    pub amp: Rational,
    pub harmonic: i64,
    /// Phase as a rational multiple of pi.
    #[serde(rename = "phase", with = "serde_rat", skip_serializing_if = "num_traits::Zero::is_zero")]
    pub phase_pi: Rational,
    /// Additional phase in plain radians.
    #[serde(with = "serde_rat", skip_serializing_if = "num_traits::Zero::is_zero")]
    pub phase_rad: Rational,
}

impl<'de> Deserialize<'de> for TrigTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            amp: String,
            harmonic: i64,
            #[serde(default, alias = "phase_pi")]
            phase: Option<String>,
            #[serde(default)]
            phase_rad: Option<String>,
        }
        let r = Repr::deserialize(d)?;
        let parse = |s: Option<String>| -> std::result::Result<Rational, D::Error> {
            s.map_or(Ok(Rational::zero()), |s| {
                parse_rational(&s).map_err(de::Error::custom)
            })
        };
        Ok(TrigTerm {
            amp: parse_rational(&r.amp).map_err(de::Error::custom)?,
            harmonic: r.harmonic,
            phase_pi: parse(r.phase)?,
            phase_rad: parse(r.phase_rad)?,
        })
    }
}

/// Continuous 1-periodic piecewise-linear function given by breakpoints
/// (position, value) with positions strictly increasing in [0,1) starting
/// at 0; the closing segment returns to the value at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pwl {
    points: Vec<(Rational, Rational)>,
}

impl Serialize for Pwl {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::exactnum::rational::format_rational;
        s.collect_seq(
            self.points
                .iter()
                .map(|(p, v)| [format_rational(p), format_rational(v)]),
        )
    }
}

impl<'de> Deserialize<'de> for Pwl {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<(String, String)>::deserialize(d)?;
        let points = raw
            .into_iter()
            .map(|(p, v)| {
                Ok((
                    parse_rational(&p).map_err(de::Error::custom)?,
                    parse_rational(&v).map_err(de::Error::custom)?,
                ))
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        Pwl::new(points).map_err(de::Error::custom)
    }
}

impl Pwl {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::config("piecewise-linear body needs at least one point"));
        }
        if !points[0].0.is_zero() {
            return Err(Error::config("piecewise-linear breakpoints must start at 0"));
        }
        let one = Rational::one();
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::config("piecewise-linear breakpoints must be strictly increasing"));
            }
        }
        if points.last().unwrap().0 >= one {
            return Err(Error::config("piecewise-linear breakpoints must lie in [0,1)"));
        }
        Ok(Pwl { points })
    }

    pub fn constant(v: Rational) -> Self {
        Pwl { points: vec![(Rational::zero(), v)] }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// Exact value at a rational point (reduced mod 1).
    pub fn value_at(&self, t: &Rational) -> Rational {
        let t = t - t.floor();
        let n = self.points.len();
        // segment containing t: last breakpoint <= t
        let mut i = match self
            .points
            .binary_search_by(|(p, _)| p.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if i >= n {
            i = n - 1;
        }
        let (x0, y0) = &self.points[i];
        let (x1, y1) = if i + 1 < n {
            self.points[i + 1].clone()
        } else {
            (Rational::one(), self.points[0].1.clone())
        };
        if &x1 == x0 {
            return y0.clone();
        }
        y0 + (&y1 - y0) * (&t - x0) / (&x1 - x0)
    }

    /// Exact range of values over [a, b] within one period, 0 <= a <= b <= 1.
    fn range_on(&self, a: &Rational, b: &Rational) -> (Rational, Rational) {
        let mut lo = self.value_at(a);
        let mut hi = lo.clone();
        let vb = self.value_at(&if b == &Rational::one() { Rational::zero() } else { b.clone() });
        if vb < lo {
            lo = vb.clone();
        }
        if vb > hi {
            hi = vb;
        }
        // breakpoints interior to (a, b), located by binary search
        let start = self.points.partition_point(|(p, _)| p <= a);
        for (p, v) in &self.points[start..] {
            if p >= b {
                break;
            }
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        (lo, hi)
    }

    /// Validated enclosure over an interval argument (1-periodic reduction,
    /// hull over any straddled breakpoints).
    pub fn eval_interval(&self, u: &FixedInterval) -> FixedInterval {
        let w = u.scale_bits;
        let unit = BigInt::one() << w;
        // shift the midpoint into [0, 1): exact, radius unchanged
        let shift = Integer::div_floor(&u.midpoint, &unit);
        let mid = &u.midpoint - &shift * &unit;
        let rad = BigInt::from(u.radius.clone());
        let lo = Rational::new(&mid - &rad, unit.clone());
        let hi = Rational::new(&mid + &rad, unit.clone());
        let one = Rational::one();
        let (vlo, vhi) = if lo < Rational::zero() {
            // straddles the seam from below
            let (l1, h1) = self.range_on(&(&lo + &one), &one);
            let (l2, h2) = self.range_on(&Rational::zero(), &hi.min(one));
            (l1.min(l2), h1.max(h2))
        } else if hi > one {
            let (l1, h1) = self.range_on(&lo, &one);
            let (l2, h2) = self.range_on(&Rational::zero(), &(&hi - &one));
            (l1.min(l2), h1.max(h2))
        } else {
            self.range_on(&lo, &hi)
        };
        rational_bounds_to_interval(&vlo, &vhi, w)
    }

    /// Largest |value| over the period.
    pub fn sup_norm(&self) -> Rational {
        self.points
            .iter()
            .map(|(_, v)| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

/// Exact rational bounds, outward-rounded into a dyadic interval.
pub fn rational_bounds_to_interval(lo: &Rational, hi: &Rational, bits: u32) -> FixedInterval {
    debug_assert!(lo <= hi);
    let unit = BigInt::one() << bits;
    let lo_i = Integer::div_floor(&(lo.numer() * &unit), lo.denom());
    let hi_i = Integer::div_ceil(&(hi.numer() * &unit), hi.denom());
    let two = BigInt::from(2);
    let mid = Integer::div_floor(&(&lo_i + &hi_i), &two);
    let r1 = (&hi_i - &mid).magnitude().clone();
    let r2 = (&mid - &lo_i).magnitude().clone();
    FixedInterval {
        scale_bits: bits,
        midpoint: mid,
        radius: r1.max(r2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PeriodicBody {
    Trig { terms: Vec<TrigTerm> },
    Pwl { points: Pwl },
}

impl PeriodicBody {
    /// Enclosure of the body at unit-coordinate argument `u`.
    pub fn eval_interval(&self, u: &FixedInterval) -> FixedInterval {
        match self {
            PeriodicBody::Pwl { points } => points.eval_interval(u),
            PeriodicBody::Trig { terms } => {
                let w = u.scale_bits;
                let mut acc = FixedInterval::zero(w);
                for term in terms {
                    acc = acc.add(&eval_trig_term(term, u));
                }
                acc
            }
        }
    }

    /// Upper bound for |body|.
    pub fn sup_norm(&self) -> Rational {
        match self {
            PeriodicBody::Pwl { points } => points.sup_norm(),
            PeriodicBody::Trig { terms } => terms.iter().map(|t| t.amp.abs()).sum(),
        }
    }
}

fn eval_trig_term(term: &TrigTerm, u: &FixedInterval) -> FixedInterval {
    let w = u.scale_bits;
    // a = harmonic*u + phase_pi/2, so the angle is 2*pi*a + phase_rad
    let a = u
        .mul_int(&BigInt::from(term.harmonic))
        .add(&FixedInterval::from_rational(&(&term.phase_pi / Rational::from_integer(2.into())), w));
    if term.phase_rad.is_zero() {
        let (c, _) = cos_sin_2pi(&a, true, false);
        return c.unwrap().mul_rational(&term.amp);
    }
    let (c, s) = cos_sin_2pi(&a, true, true);
    let (cr, sr) = cos_sin_rad(&FixedInterval::from_rational(&term.phase_rad, w));
    let v = c.unwrap().mul(&cr).sub(&s.unwrap().mul(&sr));
    v.mul_rational(&term.amp)
}

/// A periodic perturbation: a body in unit coordinates plus its true period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicFunction {
    #[serde(default = "default_period")]
    pub period: SymbolicReal,
    #[serde(flatten)]
    pub body: PeriodicBody,
}

fn default_period() -> SymbolicReal {
    SymbolicReal::from_rational(Rational::one())
}

impl PeriodicFunction {
    pub fn unit_period(body: PeriodicBody) -> Self {
        PeriodicFunction {
            period: SymbolicReal::from_rational(Rational::one()),
            body,
        }
    }

    pub fn has_unit_period(&self) -> bool {
        self.period.as_rational().is_some_and(|r| r.is_one())
    }

    /// The sawtooth h0: -x on [0,1/2], rising back to 0 at 3/4, then 0.
    pub fn h0() -> Pwl {
        Pwl::new(vec![
            (Rational::zero(), Rational::zero()),
            (Rational::new(1.into(), 2.into()), Rational::new((-1).into(), 2.into())),
            (Rational::new(3.into(), 4.into()), Rational::zero()),
        ])
        .unwrap()
    }
}

/// g(x) = f(period * x) has period 1; also returns gamma = 1/period.
pub fn reduce_to_unit_period(
    basis: &Basis,
    f: &PeriodicFunction,
) -> Result<(PeriodicFunction, SymbolicReal)> {
    let gamma = f.period.try_invert(basis)?;
    Ok((PeriodicFunction::unit_period(f.body.clone()), gamma))
}

/// Enclosure of f at the raw argument `x` (not unit-reduced): evaluates the
/// body at x/period.
pub fn eval_periodic(basis: &Basis, f: &PeriodicFunction, x: &FixedInterval) -> Result<FixedInterval> {
    if f.has_unit_period() {
        return Ok(f.body.eval_interval(x));
    }
    let (g, gamma) = reduce_to_unit_period(basis, f)?;
    let ev = Evaluator::new(basis);
    // enough gamma precision to keep the product width near the input's
    let xbits = x.midpoint.magnitude().bits() as u32;
    let target = x.scale_bits.saturating_sub(8) + xbits.saturating_sub(x.scale_bits) + 8;
    let giv = ev.eval(&gamma, target)?.to_scale(x.scale_bits.max(target + 8));
    let u = giv.mul(&x.to_scale(giv.scale_bits));
    Ok(g.body.eval_interval(&u))
}
