//! Perturbations that defeat uniform distribution whenever the span
//! criterion fails: piecewise-linear functions with slope p_j/q on most of
//! the period, pinning a positive fraction of the sequence to rationals t/q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::basis::Basis;
use crate::exactnum::rational::{format_rational, Rational};
use crate::exactnum::symbolic::SymbolicReal;
use crate::independence::{
    in_rational_poly_span, in_rational_span, q_independence_polys, rational_independence,
    total_q_independence, total_q_independence_polys, NumberTuple, PolyTuple,
};
use crate::model::config::{Config, Perturbation, ScalarSeq, SequenceSpec, PROVENANCE_CONSTRUCTED};
use crate::model::periodic::{PeriodicBody, PeriodicFunction, Pwl};
use crate::model::poly::PolynomialSR;

/// The integer data of the defeated span relation, cleared to a common
/// denominator q: main + sum (p_j/q) * scaled_j = (p_0/q) (+ rational
/// polynomial in the polynomial cases).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanRelation {
    pub q: String,
    pub p: Vec<String>,
    pub p0: String,
    /// participating components, for vector plans
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    /// the nonzero integer multipliers a_l, for vector plans
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    /// coefficients of the absorbed rational polynomial, degree 1 upward
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_poly: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexamplePlan {
    pub kind: String,
    /// empty perturbations: the unperturbed sequence already fails
    pub trivial: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<PlanRelation>,
    pub epsilon: String,
    /// M = q + sum |p_j|
    pub m_bound: u64,
    /// guaranteed asymptotic mass at some predicted atom: 1/(2(2M+1))
    pub mass_floor: String,
    /// the candidate atom locations t/q in [0,1)
    pub predicted_atoms: Vec<String>,
    /// direction in which the vector Weyl sum stays large
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_vector: Option<Vec<i64>>,
    /// ready-to-run configuration, provenance-marked
    pub config: Config,
    /// scalar form of the defeated combination, for vector plans: the
    /// sequence whose atoms verify the plan
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combined_config: Option<Config>,
}

fn linear_poly(c: SymbolicReal) -> PolynomialSR {
    PolynomialSR::linear(c)
}

fn x_poly() -> PolynomialSR {
    linear_poly(SymbolicReal::from_rational(Rational::one()))
}

/// g(x) = slope * x on [0, 1-eps], returning linearly to g(1) = g(0) = 0.
fn ramp(slope: &Rational, eps: &Rational) -> Result<Pwl> {
    if !(eps > &Rational::zero() && eps < &Rational::new(BigInt::one(), BigInt::from(4))) {
        return Err(Error::config("epsilon must lie in (0, 1/4)"));
    }
    if slope.is_zero() {
        return Pwl::new(vec![(Rational::zero(), Rational::zero())]);
    }
    let knee = Rational::one() - eps;
    Pwl::new(vec![
        (Rational::zero(), Rational::zero()),
        (knee.clone(), slope * &knee),
    ])
}

fn clear_denominators(coeffs: &[Rational], extra: &[Rational]) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
    let mut q = BigInt::one();
    for c in coeffs.iter().chain(extra.iter()) {
        q = q.lcm(c.denom());
    }
    let scaled = |v: &[Rational]| -> Vec<BigInt> {
        v.iter().map(|c| c.numer() * (&q / c.denom())).collect()
    };
    (q.clone(), scaled(coeffs), scaled(extra))
}

fn atoms_mod_one(q: &BigInt, m: u64) -> Vec<String> {
    // {s/q mod 1 : |s| < M} as reduced t/q in [0,1)
    let mut seen = std::collections::BTreeSet::new();
    let mb = BigInt::from(m);
    let mut s: BigInt = -mb.clone() + 1;
    while s < mb {
        let r = Rational::new(s.clone(), q.clone());
        let red = &r - r.floor();
        seen.insert(format_rational(&red));
        s += 1;
    }
    seen.into_iter().collect()
}

fn mass_floor(m: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2 * (2 * m + 1)))
}

/// Scalar case: alpha inside the rational span of 1 and the reciprocal
/// periods. Produces f_j of period beta_j with unit-period body
/// (p_j/q) x on [0, 1-eps].
pub fn build_counterexample_scalar(
    basis: &Basis,
    alpha: &SymbolicReal,
    betas: &[SymbolicReal],
    eps: &Rational,
) -> Result<CounterexamplePlan> {
    if alpha.is_rational() {
        // unperturbed rational rotation already fails: trivial plan
        let config = Config {
            basis: basis.clone(),
            sequence: SequenceSpec::Scalar(ScalarSeq {
                p0: linear_poly(alpha.clone()),
                perturbations: vec![],
            }),
            provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
        };
        let q = alpha.as_rational().unwrap().denom().clone();
        let m = 1u64;
        return Ok(CounterexamplePlan {
            kind: "scalar".into(),
            trivial: true,
            relation: None,
            epsilon: format_rational(eps),
            m_bound: m,
            mass_floor: format_rational(&Rational::new(BigInt::one(), q.clone())),
            predicted_atoms: atoms_mod_one(&q, q.to_string().parse().unwrap_or(1)),
            weyl_vector: None,
            config,
            combined_config: None,
        });
    }
    let gammas: Vec<SymbolicReal> = betas
        .iter()
        .map(|b| b.try_invert(basis))
        .collect::<Result<Vec<_>>>()?;
    let Some((coeffs, c0)) = in_rational_span(alpha, &gammas) else {
        return Err(Error::NoRelation {
            context: "alpha is outside the rational span of 1 and the reciprocal periods; the sequence is uniformly distributed for every such perturbation".into(),
        });
    };
    // alpha = sum c_j gamma_j + c0  =>  alpha + sum (-c_j) gamma_j = c0
    let slopes: Vec<Rational> = coeffs.iter().map(|c| -c.clone()).collect();
    let (q, p, p0v) = clear_denominators(&slopes, std::slice::from_ref(&c0));
    let m_bound: u64 = (q.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX))
        .saturating_add(p.iter().map(|x| x.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX)).sum());

    let mut perts = Vec::with_capacity(betas.len());
    for (beta, slope) in betas.iter().zip(&slopes) {
        perts.push(Perturbation {
            f: PeriodicFunction {
                period: beta.clone(),
                body: PeriodicBody::Pwl {
                    points: ramp(slope, eps)?,
                },
            },
            arg: x_poly(),
        });
    }
    let config = Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: linear_poly(alpha.clone()),
            perturbations: perts,
        }),
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    };
    // soundness: alpha + sum (p_j/q) gamma_j must equal p_0/q exactly
    debug_assert!({
        let mut acc = alpha.clone();
        for (g, pj) in gammas.iter().zip(&p) {
            acc = &acc + &g.scale(&Rational::new(pj.clone(), q.clone()));
        }
        acc.as_rational() == Some(&Rational::new(p0v[0].clone(), q.clone()))
    });
    Ok(CounterexamplePlan {
        kind: "scalar".into(),
        trivial: false,
        relation: Some(PlanRelation {
            q: q.to_string(),
            p: p.iter().map(|x| x.to_string()).collect(),
            p0: p0v[0].to_string(),
            subset: None,
            a: None,
            rational_poly: None,
        }),
        epsilon: format_rational(eps),
        m_bound,
        mass_floor: format_rational(&mass_floor(m_bound)),
        predicted_atoms: atoms_mod_one(&q, m_bound),
        weyl_vector: None,
        config,
        combined_config: None,
    })
}

/// Polynomial case: P0 inside the rational span of the gamma_j P_j and a
/// rational polynomial.
pub fn build_counterexample_poly(
    basis: &Basis,
    p0: &PolynomialSR,
    ps: &[PolynomialSR],
    betas: &[SymbolicReal],
    eps: &Rational,
) -> Result<CounterexamplePlan> {
    if ps.len() != betas.len() {
        return Err(Error::config("one argument polynomial per period"));
    }
    if p0.all_coefficients_rational() {
        let config = Config {
            basis: basis.clone(),
            sequence: SequenceSpec::Scalar(ScalarSeq {
                p0: p0.clone(),
                perturbations: vec![],
            }),
            provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
        };
        let mut q = BigInt::one();
        for c in p0.coefficients() {
            q = q.lcm(c.as_rational().expect("rational").denom());
        }
        return Ok(CounterexamplePlan {
            kind: "poly".into(),
            trivial: true,
            relation: None,
            epsilon: format_rational(eps),
            m_bound: 1,
            mass_floor: format_rational(&Rational::new(BigInt::one(), q.clone())),
            predicted_atoms: atoms_mod_one(&q, 1),
            weyl_vector: None,
            config,
            combined_config: None,
        });
    }
    let gammas: Vec<SymbolicReal> = betas
        .iter()
        .map(|b| b.try_invert(basis))
        .collect::<Result<Vec<_>>>()?;
    let scaled: Vec<PolynomialSR> = ps
        .iter()
        .zip(&gammas)
        .map(|(p, g)| p.try_scale_symbolic(g))
        .collect::<Result<Vec<_>>>()?;
    let Some(coeffs) = in_rational_poly_span(p0, &scaled) else {
        return Err(Error::NoRelation {
            context: "the main polynomial is outside the rational span of the scaled argument polynomials, so uniform distribution holds".into(),
        });
    };
    let slopes: Vec<Rational> = coeffs.iter().map(|c| -c.clone()).collect();
    // absorbed rational polynomial R = p0 - sum c_j (gamma_j P_j)
    let mut residue = p0.clone();
    for (s, c) in scaled.iter().zip(&coeffs) {
        residue = residue.sub(&s.scale(c));
    }
    debug_assert!(residue.all_coefficients_rational());
    let r_coeffs: Vec<Rational> = residue
        .coefficients()
        .iter()
        .map(|c| c.as_rational().expect("rational residue").clone())
        .collect();
    let (q, p, _) = clear_denominators(&slopes, &r_coeffs);
    let m_bound: u64 = (q.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX))
        .saturating_add(p.iter().map(|x| x.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX)).sum());

    let mut perts = Vec::with_capacity(betas.len());
    for ((beta, slope), arg) in betas.iter().zip(&slopes).zip(ps) {
        perts.push(Perturbation {
            f: PeriodicFunction {
                period: beta.clone(),
                body: PeriodicBody::Pwl {
                    points: ramp(slope, eps)?,
                },
            },
            arg: arg.clone(),
        });
    }
    let config = Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: p0.clone(),
            perturbations: perts,
        }),
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    };
    Ok(CounterexamplePlan {
        kind: "poly".into(),
        trivial: false,
        relation: Some(PlanRelation {
            q: q.to_string(),
            p: p.iter().map(|x| x.to_string()).collect(),
            p0: "0".into(),
            subset: None,
            a: None,
            rational_poly: Some(r_coeffs.iter().map(format_rational).collect()),
        }),
        epsilon: format_rational(eps),
        m_bound,
        mass_floor: format_rational(&mass_floor(m_bound)),
        predicted_atoms: atoms_mod_one(&q, m_bound),
        weyl_vector: None,
        config,
        combined_config: None,
    })
}

/// Vector case: a violating subset with all-nonzero integer multipliers
/// exists; the scalar construction runs on the combined number and the
/// perturbations are split as f_l = h_l / a_l.
pub fn build_counterexample_vector(
    basis: &Basis,
    alphas: &[SymbolicReal],
    betas: &[SymbolicReal],
    eps: &Rational,
) -> Result<CounterexamplePlan> {
    if alphas.len() != betas.len() || alphas.is_empty() {
        return Err(Error::config("need one period per coordinate"));
    }
    let d = alphas.len();
    if !rational_independence(alphas).independent {
        // f_j = 0 already fails by the classical criterion
        let config = vector_config(basis, alphas, &vec![None; d], None)?;
        return Ok(CounterexamplePlan {
            kind: "vector".into(),
            trivial: true,
            relation: None,
            epsilon: format_rational(eps),
            m_bound: 1,
            mass_floor: "0".into(),
            predicted_atoms: vec![],
            weyl_vector: None,
            config,
            combined_config: None,
        });
    }
    let gammas: Vec<SymbolicReal> = betas
        .iter()
        .map(|b| b.try_invert(basis))
        .collect::<Result<Vec<_>>>()?;
    let tuples: Vec<NumberTuple> = alphas
        .iter()
        .zip(&gammas)
        .map(|(a, g)| NumberTuple {
            alpha: a.clone(),
            betas: vec![g.clone()],
        })
        .collect();
    let verdict = total_q_independence(&tuples)?;
    let Some(witness) = verdict.witness else {
        return Err(Error::NoViolation {
            context: "the pairs are totally Q-independent, so the sequence is uniformly distributed for every such perturbation".into(),
        });
    };
    // witness: sum a_l alpha_l + sum r_l gamma_l + constant = 0 over the
    // subset; slopes of h_l are r_l, and f_l = h_l / a_l.
    let subset = witness.subset.clone();
    let a_ints: Vec<BigInt> = witness
        .coefficients
        .iter()
        .map(|s| s.parse().expect("integer witness"))
        .collect();
    let r_coeffs: Vec<Rational> = witness
        .auxiliary
        .iter()
        .map(|(_, v)| crate::exactnum::rational::parse_rational(v).expect("witness rational"))
        .collect();
    let c0 = crate::exactnum::rational::parse_rational(&witness.constant).expect("witness rational");
    let (q, p, p0v) = clear_denominators(&r_coeffs, std::slice::from_ref(&-c0.clone()));
    let m_bound: u64 = (q.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX))
        .saturating_add(p.iter().map(|x| x.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX)).sum());

    // per-coordinate perturbations: h_l has slope r_l; f_l = h_l / a_l
    let mut bodies: Vec<Option<(Pwl, usize)>> = vec![None; d];
    for (pos, &l) in subset.iter().enumerate() {
        let slope_f = &r_coeffs[pos] / Rational::from_integer(a_ints[pos].clone());
        bodies[l] = Some((ramp(&slope_f, eps)?, pos));
    }
    let body_refs: Vec<Option<Pwl>> = bodies
        .iter()
        .map(|b| b.as_ref().map(|(p, _)| p.clone()))
        .collect();
    let config = vector_config(basis, alphas, &body_refs, Some(betas))?;

    // weyl direction
    let mut weyl = vec![0i64; d];
    for (pos, &l) in subset.iter().enumerate() {
        weyl[l] = i64::try_from(&a_ints[pos]).map_err(|_| Error::config("witness too large"))?;
    }

    // combined scalar sequence sum_l a_l (alpha_l n + f_l(n))
    let mut combined_alpha = SymbolicReal::zero();
    for (pos, &l) in subset.iter().enumerate() {
        combined_alpha = &combined_alpha + &alphas[l].scale(&Rational::from_integer(a_ints[pos].clone()));
    }
    let mut combined_perts = Vec::new();
    for (pos, &l) in subset.iter().enumerate() {
        // a_l f_l = h_l
        combined_perts.push(Perturbation {
            f: PeriodicFunction {
                period: betas[l].clone(),
                body: PeriodicBody::Pwl {
                    points: ramp(&r_coeffs[pos], eps)?,
                },
            },
            arg: x_poly(),
        });
    }
    let combined_config = Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: linear_poly(combined_alpha),
            perturbations: combined_perts,
        }),
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    };

    Ok(CounterexamplePlan {
        kind: "vector".into(),
        trivial: false,
        relation: Some(PlanRelation {
            q: q.to_string(),
            p: p.iter().map(|x| x.to_string()).collect(),
            p0: p0v[0].to_string(),
            subset: Some(subset),
            a: Some(a_ints.iter().map(|x| x.to_string()).collect()),
            rational_poly: None,
        }),
        epsilon: format_rational(eps),
        m_bound,
        mass_floor: format_rational(&mass_floor(m_bound)),
        predicted_atoms: atoms_mod_one(&q, m_bound),
        weyl_vector: Some(weyl),
        config,
        combined_config: Some(combined_config),
    })
}

fn vector_config(
    basis: &Basis,
    alphas: &[SymbolicReal],
    bodies: &[Option<Pwl>],
    betas: Option<&[SymbolicReal]>,
) -> Result<Config> {
    let components = alphas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let perturbations = match &bodies[i] {
                Some(pwl) => vec![Perturbation {
                    f: PeriodicFunction {
                        period: betas.expect("betas present when bodies are")[i].clone(),
                        body: PeriodicBody::Pwl { points: pwl.clone() },
                    },
                    arg: x_poly(),
                }],
                None => vec![],
            };
            ScalarSeq {
                p0: linear_poly(a.clone()),
                perturbations,
            }
        })
        .collect();
    Ok(Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Vector { components },
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    })
}

/// Polynomial-vector case: polynomial total Q-independence violated; the
/// polynomial construction runs on the combined polynomial sum a_l Q_l.
pub fn build_counterexample_polyvec(
    basis: &Basis,
    qs: &[PolynomialSR],
    ps: &[PolynomialSR],
    betas: &[SymbolicReal],
    eps: &Rational,
) -> Result<CounterexamplePlan> {
    if qs.len() != ps.len() || qs.len() != betas.len() || qs.is_empty() {
        return Err(Error::config("need matching main/argument/period lists"));
    }
    let d = qs.len();
    if !q_independence_polys(qs).independent {
        let components = qs
            .iter()
            .map(|q| ScalarSeq {
                p0: q.clone(),
                perturbations: vec![],
            })
            .collect();
        let config = Config {
            basis: basis.clone(),
            sequence: SequenceSpec::Vector { components },
            provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
        };
        return Ok(CounterexamplePlan {
            kind: "polyvec".into(),
            trivial: true,
            relation: None,
            epsilon: format_rational(eps),
            m_bound: 1,
            mass_floor: "0".into(),
            predicted_atoms: vec![],
            weyl_vector: None,
            config,
            combined_config: None,
        });
    }
    let gammas: Vec<SymbolicReal> = betas
        .iter()
        .map(|b| b.try_invert(basis))
        .collect::<Result<Vec<_>>>()?;
    let tuples: Vec<PolyTuple> = qs
        .iter()
        .zip(ps.iter().zip(&gammas))
        .map(|(q, (p, g))| {
            Ok(PolyTuple {
                p: q.clone(),
                siblings: vec![p.try_scale_symbolic(g)?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = total_q_independence_polys(&tuples)?;
    let Some(witness) = verdict.witness else {
        return Err(Error::NoViolation {
            context: "the polynomial tuples are totally Q-independent, so uniform distribution holds".into(),
        });
    };
    let subset = witness.subset.clone();
    let a_ints: Vec<BigInt> = witness
        .coefficients
        .iter()
        .map(|s| s.parse().expect("integer witness"))
        .collect();
    let r_coeffs: Vec<Rational> = witness
        .auxiliary
        .iter()
        .map(|(_, v)| crate::exactnum::rational::parse_rational(v).expect("witness rational"))
        .collect();
    let rational_poly = witness.rational_poly.clone();
    let (q, p, _) = clear_denominators(&r_coeffs, &[]);
    let m_bound: u64 = (q.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX))
        .saturating_add(p.iter().map(|x| x.magnitude().to_string().parse::<u64>().unwrap_or(u64::MAX)).sum());

    // components: l in subset gets f_l = h_l / a_l with argument P_l
    let mut components: Vec<ScalarSeq> = qs
        .iter()
        .map(|qq| ScalarSeq {
            p0: qq.clone(),
            perturbations: vec![],
        })
        .collect();
    for (pos, &l) in subset.iter().enumerate() {
        let slope_f = &r_coeffs[pos] / Rational::from_integer(a_ints[pos].clone());
        components[l].perturbations = vec![Perturbation {
            f: PeriodicFunction {
                period: betas[l].clone(),
                body: PeriodicBody::Pwl {
                    points: ramp(&slope_f, eps)?,
                },
            },
            arg: ps[l].clone(),
        }];
    }
    let config = Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Vector { components },
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    };

    let mut weyl = vec![0i64; d];
    for (pos, &l) in subset.iter().enumerate() {
        weyl[l] = i64::try_from(&a_ints[pos]).map_err(|_| Error::config("witness too large"))?;
    }

    // combined scalar: sum a_l Q_l with perturbations h_l(P_l(n))
    let mut combined_p0 = PolynomialSR::zero();
    for (pos, &l) in subset.iter().enumerate() {
        combined_p0 = combined_p0.add(&qs[l].scale(&Rational::from_integer(a_ints[pos].clone())));
    }
    let mut combined_perts = Vec::new();
    for (pos, &l) in subset.iter().enumerate() {
        combined_perts.push(Perturbation {
            f: PeriodicFunction {
                period: betas[l].clone(),
                body: PeriodicBody::Pwl {
                    points: ramp(&r_coeffs[pos], eps)?,
                },
            },
            arg: ps[l].clone(),
        });
    }
    let combined_config = Config {
        basis: basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: combined_p0,
            perturbations: combined_perts,
        }),
        provenance: Some(PROVENANCE_CONSTRUCTED.to_string()),
    };

    Ok(CounterexamplePlan {
        kind: "polyvec".into(),
        trivial: false,
        relation: Some(PlanRelation {
            q: q.to_string(),
            p: p.iter().map(|x| x.to_string()).collect(),
            p0: "0".into(),
            subset: Some(subset),
            a: Some(a_ints.iter().map(|x| x.to_string()).collect()),
            rational_poly,
        }),
        epsilon: format_rational(eps),
        m_bound,
        mass_floor: format_rational(&mass_floor(m_bound)),
        predicted_atoms: atoms_mod_one(&q, m_bound),
        weyl_vector: Some(weyl),
        config,
        combined_config: Some(combined_config),
    })
}
