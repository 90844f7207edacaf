//! Continuous self-maps of the torus with explicit winding integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::interval::{reduce_mod1, FixedInterval, Mod1};
use crate::exactnum::rational::Rational;
use crate::model::periodic::{rational_bounds_to_interval, PeriodicBody, Pwl};

/// amp * cos(2*pi*(sum_j harmonics[j]*x_j) + phase*pi + phase_rad).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossTrigTerm {
    pub harmonics: Vec<i64>,
    #[serde(with = "crate::exactnum::rational::serde_rat")]
    pub amp: Rational,
    #[serde(
        rename = "phase",
        with = "crate::exactnum::rational::serde_rat",
        skip_serializing_if = "num_traits::Zero::is_zero"
    )]
    pub phase_pi: Rational,
    #[serde(
        with = "crate::exactnum::rational::serde_rat",
        skip_serializing_if = "num_traits::Zero::is_zero"
    )]
    pub phase_rad: Rational,
}

impl<'de> serde::Deserialize<'de> for CrossTrigTerm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use crate::exactnum::rational::parse_rational;
        use serde::de;
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            harmonics: Vec<i64>,
            amp: String,
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
        Ok(CrossTrigTerm {
            harmonics: r.harmonics,
            amp: parse_rational(&r.amp).map_err(de::Error::custom)?,
            phase_pi: parse(r.phase)?,
            phase_rad: parse(r.phase_rad)?,
        })
    }
}

/// (x_1..x_nu) -> sum_j winding_j x_j + residual (mod 1), where the residual
/// is 1-periodic in every variable (winding 0 per variable).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusMap {
    pub arity: usize,
    pub winding: Vec<i64>,
    /// (variable index, 1-periodic body) summands.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_var: Vec<(usize, PeriodicBody)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", alias = "cross")]
    pub cross_terms: Vec<CrossTrigTerm>,
}

impl TorusMap {
    pub fn validate(&self) -> Result<()> {
        if self.winding.len() != self.arity {
            return Err(Error::config("winding list must match arity"));
        }
        for (v, _) in &self.per_var {
            if *v >= self.arity {
                return Err(Error::config("per-variable body index out of range"));
            }
        }
        for t in &self.cross_terms {
            if t.harmonics.len() != self.arity {
                return Err(Error::config("cross-term harmonics must match arity"));
            }
        }
        Ok(())
    }

    /// x -> m x.
    pub fn linear(m: i64) -> Self {
        TorusMap {
            arity: 1,
            winding: vec![m],
            per_var: Vec::new(),
            cross_terms: Vec::new(),
        }
    }

    /// x -> x + body(x), the single-variable perturbed rotation shape.
    pub fn perturbed_identity(body: PeriodicBody) -> Self {
        TorusMap {
            arity: 1,
            winding: vec![1],
            per_var: vec![(0, body)],
            cross_terms: Vec::new(),
        }
    }

    /// The structural rotation numbers.
    pub fn rotation_numbers(&self) -> Vec<i64> {
        self.winding.clone()
    }

    /// Exact single-variable piecewise-linear shape, if this map has one.
    fn as_lifted_pwl(&self) -> Option<(&Pwl, i64)> {
        if self.arity != 1 || !self.cross_terms.is_empty() || self.per_var.len() != 1 {
            return None;
        }
        match &self.per_var[0].1 {
            PeriodicBody::Pwl { points } => Some((points, self.winding[0])),
            _ => None,
        }
    }

    /// Enclosure of G at reduced arguments. Wrapped arguments are handled by
    /// re-centering at 0: the lift changes by an integer, which the final
    /// reduction forgets.
    pub fn eval(&self, args: &[Mod1]) -> Result<Mod1> {
        if args.len() != self.arity {
            return Err(Error::config("argument count does not match map arity"));
        }
        if let Some((pwl, w0)) = self.as_lifted_pwl() {
            return Ok(eval_lifted_pwl(pwl, w0, &args[0]));
        }
        let bits = args
            .iter()
            .map(|a| a.value.scale_bits)
            .max()
            .unwrap_or(96);
        let reps: Vec<FixedInterval> = args
            .iter()
            .map(|a| a.representative().to_scale(bits))
            .collect();
        let mut lift = FixedInterval::zero(bits);
        for (j, w) in self.winding.iter().enumerate() {
            if *w != 0 {
                lift = lift.add(&reps[j].mul_int(&BigInt::from(*w)));
            }
        }
        for (v, body) in &self.per_var {
            lift = lift.add(&body.eval_interval(&reps[*v]));
        }
        for t in &self.cross_terms {
            let mut a = FixedInterval::from_rational(
                &(&t.phase_pi / Rational::from_integer(2.into())),
                bits,
            );
            for (j, h) in t.harmonics.iter().enumerate() {
                if *h != 0 {
                    a = a.add(&reps[j].mul_int(&BigInt::from(*h)));
                }
            }
            let v = if t.phase_rad.is_zero() {
                crate::exactnum::eval::cos2pi(&a)
            } else {
                let (c, s) = crate::exactnum::eval::cos_sin_2pi(&a, true, true);
                let (cr, sr) =
                    crate::exactnum::eval::cos_sin_rad(&FixedInterval::from_rational(&t.phase_rad, bits));
                c.unwrap().mul(&cr).sub(&s.unwrap().mul(&sr))
            };
            lift = lift.add(&v.mul_rational(&t.amp));
        }
        Ok(reduce_mod1(&lift))
    }
}

/// Exact evaluation of {w0*x + pwl(x)}: rational bounds all the way, so
/// exact cancellations (e.g. slope -1 against winding 1) survive.
fn eval_lifted_pwl(pwl: &Pwl, w0: i64, arg: &Mod1) -> Mod1 {
    let bits = arg.value.scale_bits;
    let unit = BigInt::one() << bits;
    let rad = BigInt::from(arg.value.radius.clone());
    let one = Rational::one();

    let (ranges, out_bits) = if arg.wrap {
        // within distance d of 0: [0, d] and [1-d, 1)
        let d = Rational::new(arg.value.midpoint.clone().max(BigInt::zero()) + &rad, unit.clone());
        let d = d.min(one.clone());
        let r1 = lift_range(pwl, w0, &Rational::zero(), &d);
        let r2 = lift_range(pwl, w0, &(&one - &d), &one);
        // shift the upper piece down by the winding so the two pieces meet
        let shift = Rational::from_integer(BigInt::from(w0));
        (vec![r1, (r2.0 - &shift, r2.1 - &shift)], bits)
    } else {
        let mid = &arg.value.midpoint;
        let lo = Rational::new(mid - &rad, unit.clone());
        let hi = Rational::new(mid + &rad, unit.clone());
        let lo = lo.max(Rational::zero());
        let hi = hi.min(one);
        (vec![lift_range(pwl, w0, &lo, &hi)], bits)
    };
    let vlo = ranges.iter().map(|r| r.0.clone()).min().unwrap();
    let vhi = ranges.iter().map(|r| r.1.clone()).max().unwrap();

    // reduce the exact rational range mod 1
    let fl = vlo.floor();
    let rlo = &vlo - &fl;
    let rhi = &vhi - &fl;
    if rhi < Rational::one() {
        Mod1::new(
            rational_bounds_to_interval(&rlo, &rhi, out_bits),
            false,
        )
    } else {
        // straddles an integer: distance to it from either side
        let next = Rational::one();
        let d1 = &next - &rlo;
        let d2 = &rhi - &next;
        let d = d1.max(d2).max(Rational::zero());
        Mod1::new(
            rational_bounds_to_interval(&Rational::zero(), &d, out_bits),
            true,
        )
    }
}

/// Exact range of w0*t + pwl(t) for t in [a,b], 0 <= a <= b <= 1.
fn lift_range(pwl: &Pwl, w0: i64, a: &Rational, b: &Rational) -> (Rational, Rational) {
    let wr = Rational::from_integer(BigInt::from(w0));
    let val = |t: &Rational| -> Rational {
        let body = if t == &Rational::one() {
            pwl.value_at(&Rational::zero())
        } else {
            pwl.value_at(t)
        };
        // lift of the body at 1 is body(0); the winding carries the +w0
        &wr * t + body
    };
    let mut lo = val(a);
    let mut hi = lo.clone();
    let vb = val(b);
    if vb < lo {
        lo = vb.clone();
    }
    if vb > hi {
        hi = vb;
    }
    let points = pwl.points();
    let start = points.partition_point(|(p, _)| p <= a);
    for (p, v) in &points[start..] {
        if p >= b {
            break;
        }
        let cand = &wr * p + v;
        if cand < lo {
            lo = cand.clone();
        }
        if cand > hi {
            hi = cand;
        }
    }
    (lo, hi)
}

/// Winding number from samples of a circle map along a closed loop, by
/// continuous tracking of lifted increments. Consecutive true increments
/// must stay below 1/4 in absolute value.
pub fn numeric_winding(samples: &[Mod1]) -> Result<i64> {
    if samples.len() < 2 {
        return Err(Error::config("need at least two samples"));
    }
    let n = samples.len();
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let mut total = Rational::zero();
    for i in 0..n {
        let p0 = samples[i].position();
        let p1 = samples[(i + 1) % n].position();
        let d = &p1 - &p0;
        // representative in (-1/2, 1/2]
        let k = (&d + &half).floor();
        let dred = &d - &k;
        if dred.abs() >= quarter {
            return Err(Error::GridTooCoarse {
                index: i,
                increment: crate::exactnum::rational::decimal_string(&dred.abs(), 6),
            });
        }
        total += dred;
    }
    let w = (&total + &half).floor().to_integer();
    let err = (&total - Rational::from_integer(w.clone())).abs();
    if err > Rational::new(BigInt::one(), BigInt::from(8)) {
        return Err(Error::GridTooCoarse {
            index: n,
            increment: crate::exactnum::rational::decimal_string(&err, 6),
        });
    }
    i64::try_from(&w).map_err(|_| Error::config("winding out of i64 range"))
}

/// Samples of the section x_var -> G(..., x_var, ...) with the other
/// variables pinned at 0, on the grid i/m.
pub fn section_samples(map: &TorusMap, var: usize, m: usize, bits: u32) -> Result<Vec<Mod1>> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let args: Vec<Mod1> = (0..map.arity)
            .map(|j| {
                if j == var {
                    Mod1::exact_rational(&Rational::new(BigInt::from(i), BigInt::from(m)), bits)
                } else {
                    Mod1::exact_rational(&Rational::zero(), bits)
                }
            })
            .collect();
        out.push(map.eval(&args)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, rat_i64};
    use crate::model::periodic::{PeriodicFunction, TrigTerm};

    #[test]
    fn structural_rotation_numbers() {
        assert_eq!(TorusMap::linear(3).rotation_numbers(), vec![3]);
        assert_eq!(TorusMap::linear(1).rotation_numbers(), vec![1]);
        let lift = TorusMap {
            arity: 3,
            winding: vec![1, 0, 0],
            per_var: vec![(1, PeriodicBody::Pwl { points: PeriodicFunction::h0() })],
            cross_terms: Vec::new(),
        };
        assert_eq!(lift.rotation_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn numeric_winding_matches_structural() {
        for m in [1i64, 2, 3, 5, -1] {
            let map = TorusMap::linear(m);
            let samples = section_samples(&map, 0, 64, 80).unwrap();
            assert_eq!(numeric_winding(&samples).unwrap(), m, "m={m}");
        }
    }

    #[test]
    fn coarse_grid_detected() {
        let map = TorusMap::linear(5);
        let samples = section_samples(&map, 0, 4, 80).unwrap();
        assert!(matches!(
            numeric_winding(&samples),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn winding_with_trig_residual() {
        // x + 0.1 sin-like term: rotation number 1
        let map = TorusMap::perturbed_identity(PeriodicBody::Trig {
            terms: vec![TrigTerm {
                amp: rat(1, 10),
                harmonic: 1,
                phase_pi: rat(1, 2), // cos(t + pi/2) = -sin t
                phase_rad: rat_i64(0),
            }],
        });
        let samples = section_samples(&map, 0, 64, 96).unwrap();
        assert_eq!(numeric_winding(&samples).unwrap(), 1);
    }

    #[test]
    fn winding_additivity() {
        // pointwise sum of maps with windings 2 and 3 has winding 5
        let m2 = TorusMap::linear(2);
        let m3 = TorusMap::linear(3);
        let s2 = section_samples(&m2, 0, 64, 80).unwrap();
        let s3 = section_samples(&m3, 0, 64, 80).unwrap();
        let sum: Vec<Mod1> = s2
            .iter()
            .zip(&s3)
            .map(|(a, b)| reduce_mod1(&a.value.add(&b.value)))
            .collect();
        assert_eq!(numeric_winding(&sum).unwrap(), 5);
    }

    #[test]
    fn exact_pwl_zero_segment() {
        // G(x) = x + h0(x) is exactly 0 on [0, 1/2]
        let map = TorusMap::perturbed_identity(PeriodicBody::Pwl {
            points: PeriodicFunction::h0(),
        });
        let arg = Mod1::exact_rational(&rat(1, 3), 96);
        let out = map.eval(&[arg]).unwrap();
        assert!(!out.wrap);
        assert!(out.value.midpoint.is_zero() && out.value.radius.is_zero());
        // and equals x on (3/4, 1)
        let arg = Mod1::exact_rational(&rat(7, 8), 96);
        let out = map.eval(&[arg]).unwrap();
        assert!(out.value.contains_rational(&rat(7, 8)));
        // an interval argument inside [0,1/2] still gives exactly 0
        let arg = Mod1::new(
            FixedInterval {
                scale_bits: 96,
                midpoint: BigInt::one() << 94, // 1/4
                radius: num_bigint::BigUint::from(1u32) << 20,
            },
            false,
        );
        let out = map.eval(&[arg]).unwrap();
        assert!(out.value.midpoint.is_zero() && out.value.radius.is_zero());
    }

    #[test]
    fn cross_term_evaluation() {
        // G(x1,x2) = x1 + (1/10) cos(2 pi (x1 + x2))
        let map = TorusMap {
            arity: 2,
            winding: vec![1, 0],
            per_var: vec![],
            cross_terms: vec![CrossTrigTerm {
                harmonics: vec![1, 1],
                amp: rat(1, 10),
                phase_pi: rat_i64(0),
                phase_rad: rat_i64(0),
            }],
        };
        map.validate().unwrap();
        // at (1/4, 1/4): 1/4 + (1/10) cos(pi) = 1/4 - 1/10 = 3/20
        let out = map
            .eval(&[
                Mod1::exact_rational(&rat(1, 4), 96),
                Mod1::exact_rational(&rat(1, 4), 96),
            ])
            .unwrap();
        assert!(out.value.contains_rational(&rat(3, 20)));
        // the cross term is 1-periodic in each variable: section windings
        for (var, expect) in [(0usize, 1i64), (1, 0)] {
            let samples = section_samples(&map, var, 64, 96).unwrap();
            assert_eq!(numeric_winding(&samples).unwrap(), expect);
        }
    }

    #[test]
    fn multi_term_trig_body() {
        let body = PeriodicBody::Trig {
            terms: vec![
                TrigTerm {
                    amp: rat(1, 4),
                    harmonic: 1,
                    phase_pi: rat_i64(0),
                    phase_rad: rat_i64(0),
                },
                TrigTerm {
                    amp: rat(1, 8),
                    harmonic: 3,
                    phase_pi: rat_i64(0),
                    phase_rad: rat_i64(0),
                },
            ],
        };
        // at 0: 1/4 + 1/8
        let v = body.eval_interval(&crate::exactnum::interval::FixedInterval::zero(96));
        assert!(v.contains_rational(&rat(3, 8)));
    }

    #[test]
    fn linear_map_example() {
        // G(x) = 2x at {1/4} -> 1/2
        let map = TorusMap::linear(2);
        let out = map.eval(&[Mod1::exact_rational(&rat(1, 4), 80)]).unwrap();
        assert_eq!(out.value.midpoint_rational(), rat(1, 2));
    }
}
