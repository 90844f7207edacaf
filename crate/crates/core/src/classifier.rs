//! Theorem-backed verdicts on density, uniform distribution, and existence
//! of a limiting distribution, derived only from the exact independence
//! oracles. Every verdict is relative to the declared-basis independence
//! assumption, which is restated in the output.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::symbolic::SymbolicReal;
use crate::independence::{
    in_rational_poly_span, q_independence_polys, rational_independence, total_q_independence_polys,
    IndependenceVerdict, PolyTuple, Relation,
};
use crate::model::config::{Config, ScalarSeq, SequenceSpec};
use crate::model::periodic::reduce_to_unit_period;
use crate::model::poly::PolynomialSR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Density {
    Guaranteed,
    NotDense,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Uniform {
    Guaranteed,
    NotUD,
    NotGuaranteedCounterexampleExistsInClass,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorusDistribution {
    Guaranteed,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuleFired {
    pub id: &'static str,
    pub anchor: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub assumption: String,
    pub density: Density,
    pub uniform: Uniform,
    pub distribution_exists_on_torus: TorusDistribution,
    pub rules_fired: Vec<RuleFired>,
    /// which construction procedure realizes a counterexample, when the
    /// uniform-distribution criterion fails
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_kind: Option<&'static str>,
    /// the relation defeating the criterion, when one exists
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Relation>,
    /// rules that could not be evaluated in this model and why
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

const R1: RuleFired = RuleFired {
    id: "R1",
    anchor: "density: the main polynomial has at least one irrational coefficient",
};
const R2: RuleFired = RuleFired {
    id: "R2",
    anchor: "not dense: all coefficients rational and no perturbation, so only finitely many values mod 1",
};
const R3: RuleFired = RuleFired {
    id: "R3",
    anchor: "density: 1 and the linear coefficients are rationally independent",
};
const R4: RuleFired = RuleFired {
    id: "R4",
    anchor: "density: the main polynomials are Q-independent",
};
const R5: RuleFired = RuleFired {
    id: "R5",
    anchor: "uniform: the main polynomial is not a rational combination of the reciprocal-period-scaled argument polynomials and a rational polynomial",
};
const R6: RuleFired = RuleFired {
    id: "R6",
    anchor: "uniform: the (main polynomial, scaled argument polynomials) tuples are totally Q-independent",
};
const R7: RuleFired = RuleFired {
    id: "R7",
    anchor: "uniform not guaranteed: a rational relation exists, so some continuous perturbation with these periods breaks uniform distribution",
};
const R8: RuleFired = RuleFired {
    id: "R8",
    anchor: "density: the winding-weighted argument polynomials pass the irrationality/Q-independence test",
};
const R9: RuleFired = RuleFired {
    id: "R9",
    anchor: "distribution exists: polynomial orbits under continuous torus maps always have a limiting distribution on the torus",
};

fn assumption(cfg: &Config) -> String {
    let names: Vec<&str> = cfg.basis.generators().iter().map(|g| g.name.as_str()).collect();
    if names.is_empty() {
        "verdict over the rationals (no irrational generators declared)".to_string()
    } else {
        format!(
            "verdict assumes {{1, {}}} is rationally independent",
            names.join(", ")
        )
    }
}

/// The reciprocal-period-scaled argument polynomial gamma_j * P_j for one
/// perturbation, when representable in the model.
fn scaled_args(cfg: &Config, seq: &ScalarSeq) -> Result<std::result::Result<Vec<PolynomialSR>, String>> {
    let mut out = Vec::with_capacity(seq.perturbations.len());
    for (j, pert) in seq.perturbations.iter().enumerate() {
        let (_, gamma) = match reduce_to_unit_period(&cfg.basis, &pert.f) {
            Ok(x) => x,
            Err(Error::InverseNotRepresentable { period }) => {
                return Ok(Err(format!(
                    "perturbation {j}: reciprocal of period {period} is not representable"
                )))
            }
            Err(e) => return Err(e),
        };
        match pert.arg.try_scale_symbolic(&gamma) {
            Ok(p) => out.push(p),
            Err(Error::ProductNotRepresentable { .. }) => {
                return Ok(Err(format!(
                    "perturbation {j}: product of irrational period reciprocal and irrational argument coefficients is outside the declared-basis model"
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(out))
}

pub fn classify(cfg: &Config) -> Result<Verdict> {
    cfg.validate()?;
    match &cfg.sequence {
        SequenceSpec::Scalar(s) => classify_scalar(cfg, s),
        SequenceSpec::Vector { components } => classify_vector(cfg, components),
        SequenceSpec::Torus { .. } => classify_torus(cfg),
    }
}

fn base_verdict(cfg: &Config) -> Verdict {
    Verdict {
        assumption: assumption(cfg),
        density: Density::Unknown,
        uniform: Uniform::Unknown,
        distribution_exists_on_torus: TorusDistribution::NotApplicable,
        rules_fired: Vec::new(),
        counterexample_kind: None,
        relation: None,
        notes: Vec::new(),
    }
}

fn relation_from_span(coeffs: &[crate::exactnum::rational::Rational]) -> Relation {
    Relation {
        subset: coeffs.iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)).map(|(i, _)| i).collect(),
        coefficients: coeffs.iter().map(crate::exactnum::rational::format_rational).collect(),
        constant: "0".to_string(),
        auxiliary: Vec::new(),
        rational_poly: None,
    }
}

fn classify_scalar(cfg: &Config, s: &ScalarSeq) -> Result<Verdict> {
    let mut v = base_verdict(cfg);
    let p0_irrational = s.p0.has_irrational_coefficient();

    if p0_irrational {
        v.density = Density::Guaranteed;
        v.rules_fired.push(R1);
    } else if s.perturbations.is_empty() {
        v.density = Density::NotDense;
        v.uniform = Uniform::NotUD;
        v.rules_fired.push(R2);
        return Ok(v);
    }

    match scaled_args(cfg, s)? {
        Err(note) => {
            v.notes.push(note);
        }
        Ok(scaled) => match in_rational_poly_span(&s.p0, &scaled) {
            None => {
                v.uniform = Uniform::Guaranteed;
                v.rules_fired.push(R5);
            }
            Some(coeffs) => {
                v.uniform = if cfg.is_constructed() {
                    Uniform::NotUD
                } else {
                    Uniform::NotGuaranteedCounterexampleExistsInClass
                };
                v.rules_fired.push(R7);
                let linear = s.p0.degree() <= 1
                    && s.perturbations.iter().all(|p| p.arg.degree() <= 1);
                v.counterexample_kind = Some(if linear { "scalar" } else { "poly" });
                v.relation = Some(relation_from_span(&coeffs));
            }
        },
    }
    Ok(v)
}

fn classify_vector(cfg: &Config, comps: &[ScalarSeq]) -> Result<Verdict> {
    let mut v = base_verdict(cfg);
    let p0s: Vec<PolynomialSR> = comps.iter().map(|c| c.p0.clone()).collect();
    let all_linear = comps.iter().all(|c| {
        c.p0.degree() <= 1 && c.perturbations.iter().all(|p| p.arg.degree() <= 1)
    });

    // density: Q-independence of the main polynomials
    let dens = q_independence_polys(&p0s);
    if dens.independent {
        v.density = Density::Guaranteed;
        v.rules_fired.push(if all_linear {
            // linear case: equivalent to rational independence of 1 and
            // the coefficients
            debug_assert!({
                let alphas: Vec<SymbolicReal> = comps.iter().map(|c| c.p0.coeff(1)).collect();
                rational_independence(&alphas).independent
            });
            R3
        } else {
            R4
        });
    } else if comps.iter().all(|c| c.perturbations.is_empty()) {
        v.density = Density::NotDense;
        v.uniform = Uniform::NotUD;
        v.rules_fired.push(R2);
        v.relation = dens.witness;
        return Ok(v);
    }

    // uniform: polynomial total Q-independence over the tuples
    let mut tuples = Vec::with_capacity(comps.len());
    for c in comps {
        match scaled_args(cfg, c)? {
            Err(note) => {
                v.notes.push(note);
                return Ok(v);
            }
            Ok(siblings) => tuples.push(PolyTuple {
                p: c.p0.clone(),
                siblings,
            }),
        }
    }
    let verdict: IndependenceVerdict = total_q_independence_polys(&tuples)?;
    if verdict.independent {
        v.uniform = Uniform::Guaranteed;
        v.rules_fired.push(R6);
    } else {
        v.uniform = if cfg.is_constructed() {
            Uniform::NotUD
        } else {
            Uniform::NotGuaranteedCounterexampleExistsInClass
        };
        v.rules_fired.push(R7);
        v.counterexample_kind = Some(if all_linear { "vector" } else { "polyvec" });
        v.relation = verdict.witness;
    }
    Ok(v)
}

/// Torus verdicts: density from the winding-weighted combination
/// polynomials, existence of a distribution unconditionally.
pub fn classify_torus(cfg: &Config) -> Result<Verdict> {
    let comps = match &cfg.sequence {
        SequenceSpec::Torus { components } => components,
        _ => return Err(Error::config("classify_torus needs a torus config")),
    };
    let mut v = base_verdict(cfg);
    v.distribution_exists_on_torus = TorusDistribution::Guaranteed;
    v.rules_fired.push(R9);

    // combination polynomials P_i = sum_j w_ij P_ij
    let mut combos = Vec::with_capacity(comps.len());
    for c in comps {
        let mut combo = PolynomialSR::zero();
        for (j, p) in c.args.iter().enumerate() {
            let w = c.map.winding[j];
            if w != 0 {
                combo = combo.add(&p.scale(&crate::exactnum::rational::rat_i64(w)));
            }
        }
        combos.push(combo);
    }
    if comps.len() == 1 {
        if combos[0].has_irrational_coefficient() {
            v.density = Density::Guaranteed;
            v.rules_fired.push(R8);
        } else if is_pure_linear_map(&comps[0]) {
            // G is exactly the winding combination: finitely many values
            v.density = Density::NotDense;
            v.rules_fired.push(R2);
        }
    } else {
        let q = q_independence_polys(&combos);
        if q.independent {
            v.density = Density::Guaranteed;
            v.rules_fired.push(R8);
        } else if comps.iter().all(is_pure_linear_map) {
            v.density = Density::NotDense;
            v.rules_fired.push(R2);
            v.relation = q.witness;
        }
    }
    Ok(v)
}

fn is_pure_linear_map(c: &crate::model::config::TorusComponent) -> bool {
    c.map.per_var.is_empty() && c.map.cross_terms.is_empty() && c.args.iter().all(|p| p.all_coefficients_rational())
}
