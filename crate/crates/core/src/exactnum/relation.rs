//! Heuristic integer-relation detection by lattice reduction.
//!
//! Advisory only: a returned vector is numerically checked against the input
//! enclosures, but the absence of a result proves nothing. Exact verdicts
//! come from the kernel module, never from here.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::interval::FixedInterval;
use crate::exactnum::rational::Rational;

/// LLL reduction (delta = 3/4) over exact rationals; rows are basis vectors.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n <= 1 {
        return b;
    }
    let m = b[0].len();
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));

    let dot = |x: &[Rational], y: &[Rational]| -> Rational {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    };
    let to_rat = |row: &[BigInt]| -> Vec<Rational> {
        row.iter().map(|v| Rational::from_integer(v.clone())).collect()
    };

    let gram = |b: &Vec<Vec<BigInt>>| -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut mu = vec![vec![Rational::zero(); n]; n];
        let mut norms: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = to_rat(&b[i]);
            for j in 0..i {
                let nj: &Rational = &norms[j];
                mu[i][j] = if nj.is_zero() {
                    Rational::zero()
                } else {
                    dot(&to_rat(&b[i]), &star[j]) / nj
                };
                for t in 0..m {
                    let sub = &mu[i][j] * &star[j][t];
                    v[t] -= sub;
                }
            }
            norms.push(dot(&v, &v));
            star.push(v);
        }
        (mu, norms)
    };

    let mut k = 1;
    let mut rounds = 0usize;
    while k < n {
        rounds += 1;
        if rounds > 20_000 {
            break; // heuristic: give up rather than loop
        }
        let (mu, _) = gram(&b);
        for j in (0..k).rev() {
            let r = mu[k][j].round().to_integer();
            if !r.is_zero() {
                for t in 0..m {
                    let sub = &b[j][t] * &r;
                    b[k][t] -= sub;
                }
            }
        }
        let (mu, norms) = gram(&b);
        let lovasz = norms[k] >= ((&delta - &(&mu[k][k - 1] * &mu[k][k - 1])) * &norms[k - 1]);
        if lovasz || norms[k - 1].is_zero() {
            k += 1;
        } else {
            b.swap(k, k - 1);
            if k > 1 {
                k -= 1;
            }
        }
    }
    b
}

/// Searches for small integers a with |sum a_i v_i| below the combined
/// interval tolerance. Lattice rows are [e_i | round(v_i 2^P)].
pub fn detect_integer_relation(
    values: &[FixedInterval],
    coeff_bound: u64,
) -> Result<Option<Vec<BigInt>>> {
    assert!(coeff_bound >= 1);
    let n = values.len();
    if n == 0 {
        return Ok(None);
    }
    for v in values {
        if !v.radius_at_most(64) {
            return Err(Error::PrecisionUnavailable {
                generator: "interval input".to_string(),
                declared: 0,
                needed: 64,
            });
        }
    }
    // Common scale.
    let p = values.iter().map(|v| v.scale_bits).max().unwrap();
    let scaled: Vec<FixedInterval> = values.iter().map(|v| v.to_scale(p)).collect();

    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, v) in scaled.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::one();
        row[n] = v.midpoint.clone();
        rows.push(row);
    }
    let reduced = lll_reduce(rows);

    let bound = BigInt::from(coeff_bound);
    let mut best: Option<(BigUint, Vec<BigInt>)> = None;
    for row in &reduced {
        let a = &row[..n];
        if a.iter().all(|x| x.is_zero()) {
            continue;
        }
        if a.iter().any(|x| x.magnitude() > bound.magnitude()) {
            continue;
        }
        if let Some(res) = check_candidate(&scaled, a) {
            let size = a.iter().map(|x| x.magnitude().clone()).sum::<BigUint>();
            if best.as_ref().is_none_or(|(s, _)| &size < s) {
                best = Some((size, res));
            }
        }
    }
    Ok(best.map(|(_, v)| v))
}

/// A candidate passes when |sum a_i v_i| cannot be distinguished from zero:
/// the combined enclosure, widened by one representation ulp per unit of
/// |a|, contains zero.
fn check_candidate(values: &[FixedInterval], a: &[BigInt]) -> Option<Vec<BigInt>> {
    let p = values[0].scale_bits;
    let mut acc = FixedInterval::zero(p);
    for (v, c) in values.iter().zip(a) {
        acc = acc.add(&v.mul_int(c));
    }
    let slack: BigUint = a.iter().map(|x| x.magnitude().clone()).sum::<BigUint>() + BigUint::one();
    let lo = acc.lower() - BigInt::from(slack.clone());
    let hi = acc.upper() + BigInt::from(slack);
    if !lo.is_positive() && !hi.is_negative() {
        let mut out = a.to_vec();
        // deterministic sign: first nonzero positive
        if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in &mut out {
                *x = -x.clone();
            }
        }
        Some(out)
    } else {
        None
    }
}
