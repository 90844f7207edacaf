//! Exact decision procedures for the independence notions the distribution
//! criteria quantify over. Everything here reduces to rational kernels over
//! basis coordinates; verdicts are exact relative to the declared basis.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::kernel::{full_support_witness, kernel_full_support, rational_kernel, RatMatrix};
use crate::exactnum::rational::{format_rational, Rational};
use crate::exactnum::symbolic::SymbolicReal;
use crate::model::poly::PolynomialSR;

/// Hard cap on the tuple count: total independence enumerates 2^d subsets.
pub const SUBSET_CAP: usize = 20;

/// A dependence relation that substitutes to an exact identity.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Relation {
    /// indices of the participating values (the subset Lambda, when
    /// subset semantics apply)
    pub subset: Vec<usize>,
    /// integer coefficients attached to the primary values
    pub coefficients: Vec<String>,
    /// rational coefficient of the constant 1
    pub constant: String,
    /// named auxiliary coefficients (e.g. one per sibling value)
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub auxiliary: Vec<(String, String)>,
    /// the rational polynomial absorbed by the relation, in polynomial cases
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_poly: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceVerdict {
    pub independent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Relation>,
}

impl IndependenceVerdict {
    fn independent() -> Self {
        IndependenceVerdict {
            independent: true,
            witness: None,
        }
    }

    fn dependent(witness: Relation) -> Self {
        IndependenceVerdict {
            independent: false,
            witness: Some(witness),
        }
    }
}

/// Column layout helper: the coordinate rows of a set of symbolic reals,
/// one row for the rational part and one per generator appearing anywhere.
fn coordinate_rows(values: &[&SymbolicReal], include_constant: bool) -> RatMatrix {
    let mut gens: Vec<String> = Vec::new();
    for v in values {
        for g in v.terms.keys() {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
    }
    gens.sort();
    let vcols = values.len() + usize::from(include_constant);
    let rows = gens.len() + usize::from(include_constant);
    let mut m = RatMatrix::zero(rows.max(1), vcols);
    // constant row: rational parts (and the adjoined 1)
    if include_constant {
        for (j, v) in values.iter().enumerate() {
            m.set(0, j, v.rational_part.clone());
        }
        m.set(0, values.len(), Rational::one());
    }
    let row0 = usize::from(include_constant);
    for (i, g) in gens.iter().enumerate() {
        for (j, v) in values.iter().enumerate() {
            m.set(row0 + i, j, v.coeff_of(g));
        }
    }
    m
}

/// Rational independence of {1} union xs: the only rational combination
/// summing to zero is the trivial one.
pub fn rational_independence(xs: &[SymbolicReal]) -> IndependenceVerdict {
    if xs.is_empty() {
        return IndependenceVerdict::independent();
    }
    let refs: Vec<&SymbolicReal> = xs.iter().collect();
    let m = coordinate_rows(&refs, true);
    let kernel = rational_kernel(&m);
    match kernel.into_iter().next() {
        None => IndependenceVerdict::independent(),
        Some(v) => {
            // v = (t_1..t_n, t_0): t.xs + t_0 = 0
            let witness = Relation {
                subset: (0..xs.len()).filter(|&i| !v[i].is_zero()).collect(),
                coefficients: v[..xs.len()].iter().map(format_rational).collect(),
                constant: format_rational(&v[xs.len()]),
                auxiliary: Vec::new(),
                rational_poly: None,
            };
            debug_assert!(check_linear_relation(xs, &v), "witness must substitute to zero");
            IndependenceVerdict::dependent(witness)
        }
    }
}

fn check_linear_relation(xs: &[SymbolicReal], v: &[Rational]) -> bool {
    let mut acc = SymbolicReal::from_rational(v[xs.len()].clone());
    for (x, c) in xs.iter().zip(v) {
        acc = &acc + &x.scale(c);
    }
    acc.is_zero()
}

/// Is x in the rational span of {1} union spans? Returns the coefficients
/// (c_i for spans, c0 for 1) when it is.
pub fn in_rational_span(x: &SymbolicReal, spans: &[SymbolicReal]) -> Option<(Vec<Rational>, Rational)> {
    // solve x = sum c_i s_i + c0 exactly: kernel of [x | spans | 1] with a
    // nonzero first coordinate
    let mut refs: Vec<&SymbolicReal> = vec![x];
    refs.extend(spans.iter());
    let m = coordinate_rows(&refs, true);
    let kernel = rational_kernel(&m);
    // want a kernel vector with v[0] != 0
    let v = kernel.into_iter().find(|v| !v[0].is_zero())?;
    // v0 x + sum v_i s_i + vc = 0  =>  x = sum (-v_i/v0) s_i + (-vc/v0)
    let v0 = v[0].clone();
    let coeffs = v[1..=spans.len()]
        .iter()
        .map(|c| -(c / &v0))
        .collect::<Vec<_>>();
    let c0 = -(&v[spans.len() + 1] / &v0);
    Some((coeffs, c0))
}

/// Q-independence of polynomials (no constant terms): dependent iff some
/// nontrivial rational combination has all-rational coefficients.
pub fn q_independence_polys(ps: &[PolynomialSR]) -> IndependenceVerdict {
    if ps.is_empty() {
        return IndependenceVerdict::independent();
    }
    // rows: (generator, degree) pairs; columns: polynomials
    let max_deg = ps.iter().map(|p| p.degree()).max().unwrap_or(0);
    let mut gens: Vec<String> = Vec::new();
    for p in ps {
        for c in p.coefficients() {
            for g in c.terms.keys() {
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
        }
    }
    gens.sort();
    let rows = (gens.len() * max_deg).max(1);
    let mut m = RatMatrix::zero(rows, ps.len());
    for (gi, g) in gens.iter().enumerate() {
        for d in 1..=max_deg {
            for (j, p) in ps.iter().enumerate() {
                m.set(gi * max_deg + (d - 1), j, p.coeff(d).coeff_of(g));
            }
        }
    }
    let kernel = rational_kernel(&m);
    match kernel.into_iter().next() {
        None => IndependenceVerdict::independent(),
        Some(v) => {
            // the combination sum v_j P_j has rational coefficients; record it
            let mut combo = PolynomialSR::zero();
            for (p, c) in ps.iter().zip(&v) {
                combo = combo.add(&p.scale(c));
            }
            debug_assert!(combo.all_coefficients_rational());
            let witness = Relation {
                subset: (0..ps.len()).filter(|&i| !v[i].is_zero()).collect(),
                coefficients: v.iter().map(format_rational).collect(),
                constant: "0".to_string(),
                auxiliary: Vec::new(),
                rational_poly: Some(
                    combo
                        .coefficients()
                        .iter()
                        .map(|c| format_rational(c.as_rational().expect("rational combination")))
                        .collect(),
                ),
            };
            IndependenceVerdict::dependent(witness)
        }
    }
}

/// Is p0 expressible as sum_j c_j q_j + R with rational c_j and R a
/// rational-coefficient polynomial? Returns the c_j.
pub fn in_rational_poly_span(p0: &PolynomialSR, qs: &[PolynomialSR]) -> Option<Vec<Rational>> {
    // Only irrational parts constrain: for every (generator, degree),
    // coeff_g(p0, d) = sum_j c_j coeff_g(q_j, d).
    let max_deg = p0
        .degree()
        .max(qs.iter().map(|q| q.degree()).max().unwrap_or(0));
    let mut gens: Vec<String> = Vec::new();
    for p in std::iter::once(p0).chain(qs.iter()) {
        for c in p.coefficients() {
            for g in c.terms.keys() {
                if !gens.contains(g) {
                    gens.push(g.clone());
                }
            }
        }
    }
    gens.sort();
    if qs.is_empty() {
        return if p0.all_coefficients_rational() {
            Some(Vec::new())
        } else {
            None
        };
    }
    // kernel of [p0 | qs] on irrational coordinates, nonzero first coord
    let rows = (gens.len() * max_deg).max(1);
    let mut m = RatMatrix::zero(rows, qs.len() + 1);
    for (gi, g) in gens.iter().enumerate() {
        for d in 1..=max_deg {
            m.set(gi * max_deg + (d - 1), 0, p0.coeff(d).coeff_of(g));
            for (j, q) in qs.iter().enumerate() {
                m.set(gi * max_deg + (d - 1), j + 1, q.coeff(d).coeff_of(g));
            }
        }
    }
    let kernel = rational_kernel(&m);
    let v = kernel.into_iter().find(|v| !v[0].is_zero())?;
    let v0 = v[0].clone();
    Some(v[1..].iter().map(|c| -(c / &v0)).collect())
}

/// One tuple for total Q-independence: a primary number and the numbers
/// whose rational span it must avoid (together with 1).
#[derive(Debug, Clone)]
pub struct NumberTuple {
    pub alpha: SymbolicReal,
    pub betas: Vec<SymbolicReal>,
}

/// Total Q-independence: for every nonempty subset L of tuples there is no
/// relation sum_{l in L} a_l alpha_l = r_0 + sum r_{l,j} beta_{l,j} with all
/// a_l nonzero integers.
pub fn total_q_independence(tuples: &[NumberTuple]) -> Result<IndependenceVerdict> {
    let d = tuples.len();
    if d == 0 {
        return Ok(IndependenceVerdict::independent());
    }
    if d > SUBSET_CAP {
        return Err(Error::SubsetBlowup { d, cap: SUBSET_CAP });
    }
    for mask in 1u32..(1u32 << d) {
        let subset: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        // columns: a_l for l in subset, then all betas of the subset, then 1
        let mut values: Vec<&SymbolicReal> = subset.iter().map(|&l| &tuples[l].alpha).collect();
        let mut beta_names = Vec::new();
        for &l in &subset {
            for (j, b) in tuples[l].betas.iter().enumerate() {
                values.push(b);
                beta_names.push(format!("beta[{l}][{j}]"));
            }
        }
        let m = coordinate_rows(&values, true);
        let kernel = rational_kernel(&m);
        let a_coords: Vec<usize> = (0..subset.len()).collect();
        if kernel_full_support(&kernel, &a_coords) {
            let w = full_support_witness(&kernel, &a_coords).expect("support implies witness");
            // clear the a-part to integers (the witness is already integral)
            let witness = Relation {
                subset: subset.clone(),
                coefficients: w[..subset.len()].iter().map(format_rational).collect(),
                constant: format_rational(&w[values.len()]),
                auxiliary: beta_names
                    .iter()
                    .cloned()
                    .zip(w[subset.len()..values.len()].iter().map(format_rational))
                    .collect(),
                rational_poly: None,
            };
            // soundness: substitute back
            debug_assert!({
                let mut acc = SymbolicReal::from_rational(w[values.len()].clone());
                for (v, c) in values.iter().zip(&w) {
                    acc = &acc + &v.scale(c);
                }
                acc.is_zero()
            });
            return Ok(IndependenceVerdict::dependent(witness));
        }
    }
    Ok(IndependenceVerdict::independent())
}

/// One tuple for polynomial total Q-independence.
#[derive(Debug, Clone)]
pub struct PolyTuple {
    pub p: PolynomialSR,
    pub siblings: Vec<PolynomialSR>,
}

/// Polynomial total Q-independence: for every nonempty subset L there is no
/// relation sum a_l P_l = sum r_{l,j} P_{l,j} + R (R rational) with all a_l
/// nonzero integers.
pub fn total_q_independence_polys(tuples: &[PolyTuple]) -> Result<IndependenceVerdict> {
    let d = tuples.len();
    if d == 0 {
        return Ok(IndependenceVerdict::independent());
    }
    if d > SUBSET_CAP {
        return Err(Error::SubsetBlowup { d, cap: SUBSET_CAP });
    }
    for mask in 1u32..(1u32 << d) {
        let subset: Vec<usize> = (0..d).filter(|i| mask & (1 << i) != 0).collect();
        let mut polys: Vec<&PolynomialSR> = subset.iter().map(|&l| &tuples[l].p).collect();
        let mut names = Vec::new();
        for &l in &subset {
            for (j, s) in tuples[l].siblings.iter().enumerate() {
                polys.push(s);
                names.push(format!("sibling[{l}][{j}]"));
            }
        }
        // irrational coordinate rows over (generator, degree)
        let max_deg = polys.iter().map(|p| p.degree()).max().unwrap_or(0);
        let mut gens: Vec<String> = Vec::new();
        for p in &polys {
            for c in p.coefficients() {
                for g in c.terms.keys() {
                    if !gens.contains(g) {
                        gens.push(g.clone());
                    }
                }
            }
        }
        gens.sort();
        let rows = (gens.len() * max_deg).max(1);
        let mut m = RatMatrix::zero(rows, polys.len());
        for (gi, g) in gens.iter().enumerate() {
            for deg in 1..=max_deg {
                for (j, p) in polys.iter().enumerate() {
                    m.set(gi * max_deg + (deg - 1), j, p.coeff(deg).coeff_of(g));
                }
            }
        }
        let kernel = rational_kernel(&m);
        let a_coords: Vec<usize> = (0..subset.len()).collect();
        if kernel_full_support(&kernel, &a_coords) {
            let w = full_support_witness(&kernel, &a_coords).expect("support implies witness");
            // the rational residue is sum over ALL columns of w_j * poly_j
            let mut combo = PolynomialSR::zero();
            for (p, c) in polys.iter().zip(&w) {
                combo = combo.add(&p.scale(c));
            }
            debug_assert!(combo.all_coefficients_rational());
            let witness = Relation {
                subset: subset.clone(),
                coefficients: w[..subset.len()].iter().map(format_rational).collect(),
                constant: "0".to_string(),
                auxiliary: names
                    .iter()
                    .cloned()
                    .zip(w[subset.len()..].iter().map(format_rational))
                    .collect(),
                rational_poly: Some(
                    combo
                        .coefficients()
                        .iter()
                        .map(|c| format_rational(c.as_rational().expect("rational combination")))
                        .collect(),
                ),
            };
            return Ok(IndependenceVerdict::dependent(witness));
        }
    }
    Ok(IndependenceVerdict::independent())
}

/// Shared helper for tests and the acceptance suite: parse an integer
/// relation witness back and substitute it exactly.
pub fn verify_number_witness(tuples: &[NumberTuple], rel: &Relation) -> bool {
    let mut acc = match crate::exactnum::rational::parse_rational(&rel.constant) {
        Ok(c) => SymbolicReal::from_rational(c),
        Err(_) => return false,
    };
    let mut values: Vec<&SymbolicReal> = rel.subset.iter().map(|&l| &tuples[l].alpha).collect();
    for &l in &rel.subset {
        for b in &tuples[l].betas {
            values.push(b);
        }
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    for c in rel.coefficients.iter().chain(rel.auxiliary.iter().map(|(_, v)| v)) {
        match crate::exactnum::rational::parse_rational(c) {
            Ok(r) => coeffs.push(r),
            Err(_) => return false,
        }
    }
    if coeffs.len() != values.len() {
        return false;
    }
    // all a_l nonzero and integral
    if rel.coefficients.iter().take(rel.subset.len()).any(|c| c == "0") {
        return false;
    }
    if !coeffs[..rel.subset.len()]
        .iter()
        .all(|c| c.denom() == &BigInt::one() && !c.is_zero())
    {
        return false;
    }
    for (v, c) in values.iter().zip(&coeffs) {
        acc = &acc + &v.scale(c);
    }
    acc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{rat, rat_i64};

    fn sym(g: &str) -> SymbolicReal {
        SymbolicReal::generator(g)
    }

    fn symr(r: Rational) -> SymbolicReal {
        SymbolicReal::from_rational(r)
    }

    #[test]
    fn rational_independence_examples() {
        // {sqrt2} independent of 1
        let v = rational_independence(&[sym("sqrt2")]);
        assert!(v.independent);
        // {sqrt2, 1+sqrt2} dependent
        let v = rational_independence(&[sym("sqrt2"), &symr(rat_i64(1)) + &sym("sqrt2")]);
        assert!(!v.independent);
        // {sqrt2, sqrt3, sqrt2+sqrt3} dependent with witness (1,1,-1)
        let v = rational_independence(&[
            sym("sqrt2"),
            sym("sqrt3"),
            &sym("sqrt2") + &sym("sqrt3"),
        ]);
        assert!(!v.independent);
        let w = v.witness.unwrap();
        assert_eq!(w.coefficients, vec!["1", "1", "-1"]);
        assert_eq!(w.constant, "0");
    }

    #[test]
    fn span_membership() {
        // sqrt2 in span{1, (1/2) sqrt2}: coefficient 2
        let (c, c0) = in_rational_span(
            &sym("sqrt2"),
            &[SymbolicReal::generator_scaled("sqrt2", rat(1, 2))],
        )
        .unwrap();
        assert_eq!(c, vec![rat_i64(2)]);
        assert_eq!(c0, rat_i64(0));
        // sqrt2 not in span{1, sqrt3}
        assert!(in_rational_span(&sym("sqrt2"), &[sym("sqrt3")]).is_none());
        // rationals are always in the span
        let (c, c0) = in_rational_span(&symr(rat(3, 4)), &[]).unwrap();
        assert!(c.is_empty());
        assert_eq!(c0, rat(3, 4));
    }

    #[test]
    fn q_independence_poly_examples() {
        // {sqrt2 x, x}: dependent (x alone is rational)
        let p1 = PolynomialSR::linear(sym("sqrt2"));
        let p2 = PolynomialSR::linear(symr(rat_i64(1)));
        let v = q_independence_polys(&[p1.clone(), p2.clone()]);
        assert!(!v.independent);
        // {sqrt2 x, sqrt3 x^2}: independent
        let p3 = PolynomialSR::monomial(sym("sqrt3"), 2);
        let v = q_independence_polys(&[p1.clone(), p3.clone()]);
        assert!(v.independent);
        // {sqrt2 x, sqrt2 x + x^2/2, x^2}: dependent
        let p4 = p1.add(&PolynomialSR::monomial(symr(rat(1, 2)), 2));
        let p5 = PolynomialSR::monomial(symr(rat_i64(1)), 2);
        let v = q_independence_polys(&[p1.clone(), p4, p5]);
        assert!(!v.independent);
        let w = v.witness.unwrap();
        // brute-force oracle: search rational coefficients with
        // denominators <= 12 for a combination that is rational
        let polys = [
            PolynomialSR::linear(sym("sqrt2")),
            PolynomialSR::linear(sym("sqrt2")).add(&PolynomialSR::monomial(symr(rat(1, 2)), 2)),
            PolynomialSR::monomial(symr(rat_i64(1)), 2),
        ];
        let mut found = None;
        'outer: for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let combo = polys[0]
                        .scale(&rat_i64(a))
                        .add(&polys[1].scale(&rat_i64(b)))
                        .add(&polys[2].scale(&rat_i64(c)));
                    if combo.all_coefficients_rational() {
                        found = Some((a, b, c));
                        break 'outer;
                    }
                }
            }
        }
        // brute force and the kernel oracle agree that a relation exists,
        // and the returned witness substitutes to a rational polynomial
        assert!(found.is_some(), "brute force finds a relation too");
        let wa: Vec<Rational> = w
            .coefficients
            .iter()
            .map(|s| crate::exactnum::rational::parse_rational(s).unwrap())
            .collect();
        assert!(wa.iter().any(|c| !c.is_zero()));
        let mut combo = PolynomialSR::zero();
        for (p, c) in polys.iter().zip(&wa) {
            combo = combo.add(&p.scale(c));
        }
        assert!(combo.all_coefficients_rational());
    }

    #[test]
    fn total_q_independence_three_pair_example() {
        // pairs (sqrt2, sqrt3), (sqrt3, pi), (pi2, sqrt2)
        let mut basis_gens = vec![sym("sqrt2"), sym("sqrt3"), sym("pi"), sym("pi2")];
        let _ = &mut basis_gens;
        let tuples = vec![
            NumberTuple { alpha: sym("sqrt2"), betas: vec![sym("sqrt3")] },
            NumberTuple { alpha: sym("sqrt3"), betas: vec![sym("pi")] },
            NumberTuple { alpha: sym("pi2"), betas: vec![sym("sqrt2")] },
        ];
        let v = total_q_independence(&tuples).unwrap();
        assert!(v.independent, "the three pairs are totally Q-independent");

        // replace beta_2 by sqrt2 so the subset {0,1} gains a usable
        // relation sqrt2 + sqrt3 = beta_1 + beta_2'
        let modified = vec![
            NumberTuple { alpha: sym("sqrt2"), betas: vec![sym("sqrt3")] },
            NumberTuple { alpha: sym("sqrt3"), betas: vec![sym("sqrt2")] },
            NumberTuple { alpha: sym("pi2"), betas: vec![sym("sqrt2")] },
        ];
        let v = total_q_independence(&modified).unwrap();
        assert!(!v.independent);
        let w = v.witness.unwrap();
        assert_eq!(w.subset, vec![0, 1]);
        assert!(w.coefficients.iter().all(|c| c != "0"));
        assert!(verify_number_witness(&modified, &w));
    }

    #[test]
    fn total_q_independence_single_pair() {
        // (sqrt2, sqrt2) is violated: sqrt2 = 1*beta
        let tuples = vec![NumberTuple { alpha: sym("sqrt2"), betas: vec![sym("sqrt2")] }];
        let v = total_q_independence(&tuples).unwrap();
        assert!(!v.independent);
        let w = v.witness.unwrap();
        assert!(verify_number_witness(&tuples, &w));
    }

    #[test]
    fn total_reduces_to_rational_independence_for_empty_betas() {
        // d=1, empty betas: verdict matches rational_independence({alpha})
        for alpha in [sym("sqrt2"), symr(rat(2, 3))] {
            let t = vec![NumberTuple { alpha: alpha.clone(), betas: vec![] }];
            let total = total_q_independence(&t).unwrap();
            let plain = rational_independence(&[alpha]);
            assert_eq!(total.independent, plain.independent);
        }
    }

    #[test]
    fn total_polys_examples() {
        // (sqrt2 x, siblings {x}): independent
        let t = vec![PolyTuple {
            p: PolynomialSR::linear(sym("sqrt2")),
            siblings: vec![PolynomialSR::linear(symr(rat_i64(1)))],
        }];
        assert!(total_q_independence_polys(&t).unwrap().independent);
        // (sqrt2 x, siblings {sqrt2 x}): violated
        let t = vec![PolyTuple {
            p: PolynomialSR::linear(sym("sqrt2")),
            siblings: vec![PolynomialSR::linear(sym("sqrt2"))],
        }];
        let v = total_q_independence_polys(&t).unwrap();
        assert!(!v.independent);
    }

    #[test]
    fn monotonicity() {
        // adding a value keeps dependence; removing keeps independence
        let dep = vec![sym("sqrt2"), &sym("sqrt2") + &symr(rat_i64(1))];
        assert!(!rational_independence(&dep).independent);
        let mut bigger = dep.clone();
        bigger.push(sym("pi"));
        assert!(!rational_independence(&bigger).independent);

        let indep = vec![sym("sqrt2"), sym("sqrt3"), sym("pi")];
        assert!(rational_independence(&indep).independent);
        assert!(rational_independence(&indep[..2]).independent);
    }
}
