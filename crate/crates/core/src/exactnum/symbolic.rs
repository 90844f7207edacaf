//! Rational linear combinations over the declared basis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{de, Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::basis::{Basis, GeneratorKind};
use crate::exactnum::rational::{format_rational, parse_rational, serde_rat, serde_rat_map, Rational};

/// A value of the form `r + sum_g c_g * g` with r, c_g rational and g
/// ranging over declared generators. Coefficients stored are nonzero and the
/// map keeps generators in a canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolicReal {
    #[serde(with = "serde_rat", skip_serializing_if = "num_traits::Zero::is_zero")]
    pub rational_part: Rational,
    #[serde(with = "serde_rat_map", skip_serializing_if = "BTreeMap::is_empty")]
    pub terms: BTreeMap<String, Rational>,
}

impl Default for SymbolicReal {
    fn default() -> Self {
        SymbolicReal {
            rational_part: Rational::zero(),
            terms: BTreeMap::new(),
        }
    }
}

impl<'de> Deserialize<'de> for SymbolicReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Obj {
                #[serde(default)]
                rational_part: Option<String>,
                #[serde(default)]
                rat: Option<String>,
                #[serde(default)]
                gen: Option<String>,
                #[serde(default)]
                coef: Option<String>,
                #[serde(default)]
                terms: Option<BTreeMap<String, String>>,
            },
        }
        let repr = Repr::deserialize(d)?;
        let mut out = SymbolicReal::zero();
        match repr {
            Repr::Str(s) => {
                out.rational_part = parse_rational(&s).map_err(de::Error::custom)?;
            }
            Repr::Obj {
                rational_part,
                rat,
                gen,
                coef,
                terms,
            } => {
                for src in [rational_part, rat].into_iter().flatten() {
                    out.rational_part += parse_rational(&src).map_err(de::Error::custom)?;
                }
                if let Some(name) = gen {
                    let c = match coef {
                        Some(c) => parse_rational(&c).map_err(de::Error::custom)?,
                        None => Rational::from_integer(1.into()),
                    };
                    out.add_term(&name, c);
                } else if coef.is_some() {
                    return Err(de::Error::custom("`coef` without `gen`"));
                }
                for (name, c) in terms.unwrap_or_default() {
                    out.add_term(&name, parse_rational(&c).map_err(de::Error::custom)?);
                }
            }
        }
        Ok(out)
    }
}

impl SymbolicReal {
    pub fn zero() -> Self {
        SymbolicReal::default()
    }

    pub fn from_rational(r: Rational) -> Self {
        SymbolicReal {
            rational_part: r,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), Rational::from_integer(1.into()));
        SymbolicReal {
            rational_part: Rational::zero(),
            terms,
        }
    }

    pub fn generator_scaled(name: &str, coeff: Rational) -> Self {
        let mut s = SymbolicReal::zero();
        s.add_term(name, coeff);
        s
    }

    pub fn add_term(&mut self, name: &str, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(name.to_string()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.terms.is_empty()
    }

    /// Rational iff no generator terms survive.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.rational_part)
        } else {
            None
        }
    }

    pub fn coeff_of(&self, name: &str) -> Rational {
        self.terms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    /// All generators must be declared in `basis`.
    pub fn check_over(&self, basis: &Basis) -> Result<()> {
        for name in self.terms.keys() {
            basis.require(name)?;
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> SymbolicReal {
        if c.is_zero() {
            return SymbolicReal::zero();
        }
        SymbolicReal {
            rational_part: &self.rational_part * c,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Product, defined only when at least one factor is rational: the model
    /// has no symbolic multiplication of generators.
    pub fn try_mul(&self, other: &SymbolicReal) -> Result<SymbolicReal> {
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        Err(Error::ProductNotRepresentable {
            lhs: self.to_string(),
            rhs: other.to_string(),
        })
    }

    /// 1/self, when expressible over `basis`:
    /// rationals invert exactly, and a pure multiple of a sqrt generator
    /// inverts because 1/sqrt(r) = (1/r) sqrt(r).
    pub fn try_invert(&self, basis: &Basis) -> Result<SymbolicReal> {
        if self.is_zero() {
            return Err(Error::InverseNotRepresentable {
                period: self.to_string(),
            });
        }
        if let Some(r) = self.as_rational() {
            return Ok(SymbolicReal::from_rational(r.recip()));
        }
        if self.rational_part.is_zero() && self.terms.len() == 1 {
            let (name, coeff) = self.terms.iter().next().unwrap();
            let gen = basis.require(name)?;
            if let GeneratorKind::Sqrt { .. } = gen.kind {
                let payload = gen.sqrt_payload().expect("validated sqrt payload");
                // self = c*sqrt(p); |1/self| = sqrt(1/(c^2 p)), re-expressed
                // over whatever sqrt generator covers that radicand.
                let target = payload.recip() / (coeff * coeff);
                if let Some((g, t)) = basis.express_sqrt(&target) {
                    let signed = if coeff < &Rational::zero() { -t } else { t };
                    return Ok(SymbolicReal::generator_scaled(&g, signed));
                }
            }
        }
        Err(Error::InverseNotRepresentable {
            period: self.to_string(),
        })
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.rational_part.is_zero() || self.terms.is_empty() {
            parts.push(format_rational(&self.rational_part));
        }
        for (name, coeff) in &self.terms {
            parts.push(format!("({})*{}", format_rational(coeff), name));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out.rational_part += &rhs.rational_part;
        for (k, v) in &rhs.terms {
            out.add_term(k, v.clone());
        }
        out
    }
}

impl Sub for &SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: &SymbolicReal) -> SymbolicReal {
        let mut out = self.clone();
        out.rational_part -= &rhs.rational_part;
        for (k, v) in &rhs.terms {
            out.add_term(k, -v.clone());
        }
        out
    }
}

impl Neg for &SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        SymbolicReal {
            rational_part: -self.rational_part.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect(),
        }
    }
}

impl Mul<&Rational> for &SymbolicReal {
    type Output = SymbolicReal;
    fn mul(self, rhs: &Rational) -> SymbolicReal {
        self.scale(rhs)
    }
}
