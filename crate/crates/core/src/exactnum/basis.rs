//! The declared irrational basis.
//!
//! Every exact verdict in this library is relative to a finite, named set of
//! irrational constants that the user declares and asserts to be rationally
//! independent together with 1. Nothing here proves that independence; it is
//! the documented working assumption.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, parse_rational, Rational};

/// One named irrational constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrationalGenerator {
    pub name: String,
    #[serde(flatten)]
    pub kind: GeneratorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorKind {
    /// sqrt(of) for a positive rational `of` that is not a rational square.
    Sqrt { of: String },
    /// The circle constant.
    Pi,
    /// A decimal digit string trusted to `bits` bits.
    Decimal { digits: String, bits: u32 },
}

impl IrrationalGenerator {
    pub fn sqrt_of(name: &str, of: Rational) -> Self {
        IrrationalGenerator {
            name: name.to_string(),
            kind: GeneratorKind::Sqrt {
                of: format_rational(&of),
            },
        }
    }

    pub fn pi(name: &str) -> Self {
        IrrationalGenerator {
            name: name.to_string(),
            kind: GeneratorKind::Pi,
        }
    }

    pub fn decimal(name: &str, digits: &str, bits: u32) -> Self {
        IrrationalGenerator {
            name: name.to_string(),
            kind: GeneratorKind::Decimal {
                digits: digits.to_string(),
                bits,
            },
        }
    }

    /// The radicand, for sqrt generators.
    pub fn sqrt_payload(&self) -> Option<Rational> {
        match &self.kind {
            GeneratorKind::Sqrt { of } => parse_rational(of).ok(),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::config("generator name must be nonempty"));
        }
        match &self.kind {
            GeneratorKind::Sqrt { of } => {
                let r = parse_rational(of)?;
                if !r.is_positive() {
                    return Err(Error::Config(format!(
                        "sqrt generator `{}` needs a positive radicand",
                        self.name
                    )));
                }
                if rational_sqrt(&r).is_some() {
                    return Err(Error::Config(format!(
                        "sqrt generator `{}`: {} is a perfect rational square",
                        self.name, of
                    )));
                }
            }
            GeneratorKind::Pi => {}
            GeneratorKind::Decimal { digits, bits } => {
                if *bits < 64 {
                    return Err(Error::Config(format!(
                        "decimal generator `{}` declares {} bits; at least 64 required",
                        self.name, bits
                    )));
                }
                parse_rational(digits)?;
            }
        }
        Ok(())
    }
}

/// Exact square root of a rational, if it is one.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// An ordered set of generators with unique names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
#[serde(transparent)]
pub struct Basis {
    generators: Vec<IrrationalGenerator>,
}

impl<'de> Deserialize<'de> for Basis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let gens = Vec::<IrrationalGenerator>::deserialize(d)?;
        Basis::new(gens).map_err(serde::de::Error::custom)
    }
}

impl Basis {
    pub fn new(generators: Vec<IrrationalGenerator>) -> Result<Self> {
        for g in &generators {
            g.validate()?;
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Config(format!("duplicate generator name `{}`", g.name)));
            }
        }
        Ok(Basis { generators })
    }

    pub fn empty() -> Self {
        Basis { generators: Vec::new() }
    }

    pub fn generators(&self) -> &[IrrationalGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&IrrationalGenerator> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&IrrationalGenerator> {
        self.get(name)
            .ok_or_else(|| Error::Config(format!("generator `{name}` is not declared in the basis")))
    }

    /// Finds a declared sqrt generator g and rational t with t*g = sqrt(r).
    pub fn express_sqrt(&self, r: &Rational) -> Option<(String, Rational)> {
        if !r.is_positive() {
            return None;
        }
        for g in &self.generators {
            if let Some(s) = g.sqrt_payload() {
                // t^2 * s = r must have a rational t
                if let Some(t) = rational_sqrt(&(r / &s)) {
                    return Some((g.name.clone(), t));
                }
            }
        }
        None
    }
}

/// Convenience used throughout the tests: sqrt2 / sqrt3 / pi.
pub fn standard_basis() -> Basis {
    Basis::new(vec![
        IrrationalGenerator::sqrt_of("sqrt2", Rational::from_integer(BigInt::from(2))),
        IrrationalGenerator::sqrt_of("sqrt3", Rational::from_integer(BigInt::from(3))),
        IrrationalGenerator::pi("pi"),
    ])
    .unwrap()
}
