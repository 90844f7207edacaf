//! Polynomials without constant term over symbolic-real coefficients.

use num_bigint::BigInt;
use num_traits::One;
use serde::{de, Deserialize, Deserializer, Serialize};

use crate::error::Result;
use crate::exactnum::rational::{parse_rational, Rational};
use crate::exactnum::symbolic::SymbolicReal;

/// coefficients[k] multiplies x^(k+1); the constant term does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
#[serde(transparent)]
pub struct PolynomialSR {
    coefficients: Vec<SymbolicReal>,
}

impl<'de> Deserialize<'de> for PolynomialSR {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        // One coefficient: a symbolic real in any accepted form, a single
        // [name, rational] pair, or a list of such pairs ("1" names the
        // rational part).
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum CoeffRepr {
            Sym(SymbolicReal),
            Pair((String, String)),
            Pairs(Vec<(String, String)>),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            List(Vec<CoeffRepr>),
            Obj {
                coeffs: Vec<CoeffRepr>,
                #[serde(default)]
                degree: Option<usize>,
            },
        }

        fn build<E: de::Error>(c: CoeffRepr) -> std::result::Result<SymbolicReal, E> {
            let pairs = match c {
                CoeffRepr::Sym(s) => return Ok(s),
                CoeffRepr::Pair(p) => vec![p],
                CoeffRepr::Pairs(ps) => ps,
            };
            let mut out = SymbolicReal::zero();
            for (name, coeff) in pairs {
                let c = parse_rational(&coeff).map_err(de::Error::custom)?;
                if name == "1" {
                    out.rational_part += c;
                } else {
                    out.add_term(&name, c);
                }
            }
            Ok(out)
        }

        let (coeffs, degree) = match Repr::deserialize(d)? {
            Repr::List(cs) => (cs, None),
            Repr::Obj { coeffs, degree } => (coeffs, degree),
        };
        let coefficients = coeffs
            .into_iter()
            .map(build)
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let poly = PolynomialSR::new(coefficients);
        if let Some(dg) = degree {
            if dg != poly.degree() {
                return Err(de::Error::custom(format!(
                    "declared degree {dg} does not match coefficients (degree {})",
                    poly.degree()
                )));
            }
        }
        Ok(poly)
    }
}

impl PolynomialSR {
    pub fn new(mut coefficients: Vec<SymbolicReal>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        PolynomialSR { coefficients }
    }

    pub fn zero() -> Self {
        PolynomialSR { coefficients: Vec::new() }
    }

    /// P(x) = c * x.
    pub fn linear(c: SymbolicReal) -> Self {
        PolynomialSR::new(vec![c])
    }

    /// P(x) = c * x^d.
    pub fn monomial(c: SymbolicReal, d: usize) -> Self {
        assert!(d >= 1, "constant terms are structurally absent");
        let mut coeffs = vec![SymbolicReal::zero(); d];
        coeffs[d - 1] = c;
        PolynomialSR::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[SymbolicReal] {
        &self.coefficients
    }

    /// Coefficient of x^d (d >= 1).
    pub fn coeff(&self, d: usize) -> SymbolicReal {
        assert!(d >= 1);
        self.coefficients.get(d - 1).cloned().unwrap_or_default()
    }

    pub fn has_irrational_coefficient(&self) -> bool {
        self.coefficients.iter().any(|c| !c.is_rational())
    }

    pub fn all_coefficients_rational(&self) -> bool {
        !self.has_irrational_coefficient()
    }

    /// Exact value P(n) as a symbolic real.
    pub fn eval_at_integer(&self, n: &BigInt) -> SymbolicReal {
        let mut acc = SymbolicReal::zero();
        let mut power = n.clone();
        for c in &self.coefficients {
            acc = &acc + &c.scale(&Rational::from_integer(power.clone()));
            power *= n;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> PolynomialSR {
        PolynomialSR::new(self.coefficients.iter().map(|c| c.scale(r)).collect())
    }

    /// s * P, when each product is representable (s rational or P rational).
    pub fn try_scale_symbolic(&self, s: &SymbolicReal) -> Result<PolynomialSR> {
        let coeffs = self
            .coefficients
            .iter()
            .map(|c| c.try_mul(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolynomialSR::new(coeffs))
    }

    pub fn add(&self, other: &PolynomialSR) -> PolynomialSR {
        let n = self.coefficients.len().max(other.coefficients.len());
        let coeffs = (1..=n).map(|d| &self.coeff(d) + &other.coeff(d)).collect();
        PolynomialSR::new(coeffs)
    }

    pub fn sub(&self, other: &PolynomialSR) -> PolynomialSR {
        self.add(&other.scale(&-Rational::one()))
    }
}

impl std::fmt::Display for PolynomialSR {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({})*x^{}", c, k + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
