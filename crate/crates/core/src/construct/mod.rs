//! Explicit constructions: simultaneous Diophantine approximations, density
//! witnesses, counterexample perturbations, and the staged function whose
//! orbit has no limiting distribution on [0,1).

pub mod counterexample;
pub mod nodist;

pub use counterexample::{
    build_counterexample_poly, build_counterexample_polyvec, build_counterexample_scalar,
    build_counterexample_vector, CounterexamplePlan,
};
pub use nodist::{nodist_construct, NoDistPlan};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::basis::Basis;
use crate::exactnum::eval::Evaluator;
use crate::exactnum::rational::Rational;
use crate::exactnum::symbolic::SymbolicReal;
use crate::generator::Generator;
use crate::model::config::Config;

/// Smallest k in [1, Q^d] with every ||k theta_i|| below 1/Q (strictly;
/// the scan falls back to the best k at exactly 1/Q in degenerate rational
/// cases). Existence within the range is the pigeonhole guarantee.
pub fn dirichlet_simultaneous(basis: &Basis, thetas: &[SymbolicReal], q: u64) -> Result<u64> {
    if q < 2 {
        return Err(Error::config("Q must be at least 2"));
    }
    let d = thetas.len();
    if d == 0 || d > 4 {
        return Err(Error::config("the exhaustive method handles 1..=4 numbers"));
    }
    let k_max = q
        .checked_pow(d as u32)
        .ok_or_else(|| Error::config("Q^d overflows"))?;
    let ev = Evaluator::new(basis);
    let bound = Rational::new(BigInt::one(), BigInt::from(q));

    // exact path for rational components, interval path otherwise
    let mut best_at_bound: Option<u64> = None;
    'scan: for k in 1..=k_max {
        let kk = BigInt::from(k);
        let mut all_strict = true;
        for th in thetas {
            if let Some(r) = th.as_rational() {
                let v = r * Rational::from_integer(kk.clone());
                let fr = &v - v.floor();
                let dist = fr.clone().min(Rational::one() - &fr);
                if dist > bound {
                    continue 'scan;
                }
                if dist == bound {
                    all_strict = false;
                }
            } else {
                // escalate precision until the strict comparison is decisive;
                // an irrational multiple never equals 1/Q exactly
                let mut target = 80u32;
                loop {
                    let (val, _wrap) = ev.frac_scaled(th, &kk, target)?;
                    let dist_hi = {
                        let p = val.midpoint_rational();
                        let p = p.clone().min(Rational::one() - &p);
                        p + val.width()
                    };
                    let dist_lo = {
                        let p = val.midpoint_rational();
                        let p = p.clone().min(Rational::one() - &p);
                        (p - val.width()).max(Rational::zero())
                    };
                    if dist_hi < bound {
                        break;
                    }
                    if dist_lo > bound {
                        continue 'scan;
                    }
                    target += 64;
                    if target > 1024 {
                        return Err(Error::PrecisionCapExceeded {
                            needed: target,
                            cap: 1024,
                        });
                    }
                }
            }
        }
        if all_strict {
            return Ok(k);
        }
        if best_at_bound.is_none() {
            best_at_bound = Some(k);
        }
    }
    best_at_bound.ok_or_else(|| {
        Error::config("no k within the pigeonhole range; the declared numbers are inconsistent")
    })
}

/// Smallest n <= n_max whose sequence point lies within torus distance eps
/// of the target in every coordinate. Absence of a witness proves nothing.
pub fn witness_find(
    cfg: &Config,
    target: &[Rational],
    eps: &Rational,
    n_max: u64,
    precision: u32,
) -> Result<Option<u64>> {
    let found = witness_find_multi(cfg, std::slice::from_ref(&target.to_vec()), eps, n_max, precision)?;
    Ok(found[0])
}

/// One pass serving several targets at once.
pub fn witness_find_multi(
    cfg: &Config,
    targets: &[Vec<Rational>],
    eps: &Rational,
    n_max: u64,
    precision: u32,
) -> Result<Vec<Option<u64>>> {
    if eps <= &Rational::new(BigInt::one(), BigInt::one() << 60) {
        return Err(Error::config("eps must exceed 2^-60"));
    }
    let d = cfg.dimension();
    for t in targets {
        if t.len() != d {
            return Err(Error::config("target dimension does not match the config"));
        }
    }
    let gen = Generator::new(cfg, precision)?;
    let ev = Evaluator::new(&cfg.basis);
    let mut found: Vec<Option<u64>> = vec![None; targets.len()];
    let mut remaining = targets.len();
    for n in 1..=n_max {
        let p = gen.point(&ev, n)?;
        for (ti, t) in targets.iter().enumerate() {
            if found[ti].is_some() {
                continue;
            }
            let hit = p
                .coords
                .iter()
                .zip(t)
                .all(|(c, want)| c.torus_distance_upper(want) <= *eps);
            if hit {
                found[ti] = Some(n);
                remaining -= 1;
                if remaining == 0 {
                    return Ok(found);
                }
            }
        }
    }
    Ok(found)
}
