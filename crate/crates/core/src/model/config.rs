//! Experiment configurations: the sequence families under study.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::basis::Basis;
use crate::exactnum::symbolic::SymbolicReal;
use crate::model::periodic::PeriodicFunction;
use crate::model::poly::PolynomialSR;
use crate::model::torus::TorusMap;

/// One perturbation term f(P(n)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub f: PeriodicFunction,
    /// Argument polynomial P; defaults to x.
    #[serde(default = "default_arg")]
    pub arg: PolynomialSR,
}

fn default_arg() -> PolynomialSR {
    PolynomialSR::linear(SymbolicReal::from_rational(num_rational::BigRational::from_integer(
        1.into(),
    )))
}

/// The scalar family P0(n) + sum_j f_j(P_j(n)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarSeq {
    pub p0: PolynomialSR,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<Perturbation>,
}

/// One torus component G_i(P_{i,1}(n), ..., P_{i,nu}(n)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusComponent {
    pub map: TorusMap,
    pub args: Vec<PolynomialSR>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SequenceSpec {
    Scalar(ScalarSeq),
    Vector { components: Vec<ScalarSeq> },
    Torus { components: Vec<TorusComponent> },
}

/// Marks configurations emitted by the construction module; the classifier
/// upgrades the class verdict to a definite one for these.
pub const PROVENANCE_CONSTRUCTED: &str = "constructed-counterexample";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub basis: Basis,
    pub sequence: SequenceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl Config {
    pub fn scalar(basis: Basis, p0: PolynomialSR, perturbations: Vec<Perturbation>) -> Self {
        Config {
            basis,
            sequence: SequenceSpec::Scalar(ScalarSeq { p0, perturbations }),
            provenance: None,
        }
    }

    /// Number of output coordinates.
    pub fn dimension(&self) -> usize {
        match &self.sequence {
            SequenceSpec::Scalar(_) => 1,
            SequenceSpec::Vector { components } => components.len(),
            SequenceSpec::Torus { components } => components.len(),
        }
    }

    pub fn is_constructed(&self) -> bool {
        self.provenance.as_deref() == Some(PROVENANCE_CONSTRUCTED)
    }

    /// Structural checks: declared generators, argument arities, map shapes.
    pub fn validate(&self) -> Result<()> {
        let check_poly = |p: &PolynomialSR| -> Result<()> {
            for c in p.coefficients() {
                c.check_over(&self.basis)?;
            }
            Ok(())
        };
        let check_scalar = |s: &ScalarSeq| -> Result<()> {
            check_poly(&s.p0)?;
            for pert in &s.perturbations {
                pert.f.period.check_over(&self.basis)?;
                if pert
                    .f
                    .period
                    .as_rational()
                    .is_some_and(|r| !num_traits::Signed::is_positive(r))
                {
                    return Err(Error::config("periods must be positive"));
                }
                check_poly(&pert.arg)?;
                if pert.arg.is_zero() {
                    return Err(Error::config("perturbation argument polynomial must be nonzero"));
                }
            }
            Ok(())
        };
        match &self.sequence {
            SequenceSpec::Scalar(s) => check_scalar(s)?,
            SequenceSpec::Vector { components } => {
                if components.is_empty() {
                    return Err(Error::config("vector sequence needs at least one component"));
                }
                for s in components {
                    check_scalar(s)?;
                }
            }
            SequenceSpec::Torus { components } => {
                if components.is_empty() {
                    return Err(Error::config("torus sequence needs at least one component"));
                }
                for c in components {
                    c.map.validate()?;
                    if c.args.len() != c.map.arity {
                        return Err(Error::config(
                            "torus component needs one argument polynomial per map variable",
                        ));
                    }
                    for p in &c.args {
                        check_poly(p)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// The torus form of a scalar config: G(x0, x1..xk) = x0 + sum g_j(x_j)
    /// fed with the arguments (P0(n), gamma_1 P_1(n), ..., gamma_k P_k(n)).
    /// Requires every reciprocal period and scaled argument representable.
    pub fn lift_to_torus(&self) -> Result<Config> {
        use crate::model::periodic::reduce_to_unit_period;
        use crate::model::torus::TorusMap;
        let scalar = match &self.sequence {
            SequenceSpec::Scalar(s) => s,
            _ => return Err(Error::config("lift_to_torus needs a scalar config")),
        };
        let nu = scalar.perturbations.len();
        let mut winding = vec![0i64; nu + 1];
        winding[0] = 1;
        let mut per_var = Vec::with_capacity(nu);
        let mut args = Vec::with_capacity(nu + 1);
        args.push(scalar.p0.clone());
        for (j, pert) in scalar.perturbations.iter().enumerate() {
            let (g, gamma) = reduce_to_unit_period(&self.basis, &pert.f)?;
            per_var.push((j + 1, g.body));
            args.push(pert.arg.try_scale_symbolic(&gamma)?);
        }
        Ok(Config {
            basis: self.basis.clone(),
            sequence: SequenceSpec::Torus {
                components: vec![TorusComponent {
                    map: TorusMap {
                        arity: nu + 1,
                        winding,
                        per_var,
                        cross_terms: Vec::new(),
                    },
                    args,
                }],
            },
            provenance: self.provenance.clone(),
        })
    }

    pub fn from_json(text: &str) -> Result<Config> {
        let cfg: Config =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }
}
