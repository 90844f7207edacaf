//! Validated fractional-part sequences for any configuration.
//!
//! Points are produced in chunks that may be evaluated in parallel; every
//! value is an exact function of (config, n, precision), so the output is
//! identical for any chunk size or thread count.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::eval::Evaluator;
use crate::exactnum::interval::{reduce_mod1, FixedInterval, Mod1};
use crate::exactnum::rational::decimal_string;
use crate::exactnum::symbolic::SymbolicReal;
use crate::model::config::{Config, ScalarSeq, SequenceSpec, TorusComponent};
use crate::model::periodic::{reduce_to_unit_period, PeriodicBody};
use crate::model::poly::PolynomialSR;

pub const DEFAULT_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePoint {
    pub n: u64,
    pub coords: Vec<Mod1>,
}

/// How the argument of one perturbation is computed.
enum PertArg {
    /// gamma * P folded into one polynomial; a single fractional part.
    Symbolic(PolynomialSR),
    /// gamma and P kept apart; the product is formed on enclosures.
    Numeric { p: PolynomialSR, gamma: SymbolicReal },
}

struct PreparedPert {
    arg: PertArg,
    body: PeriodicBody,
}

struct PreparedScalar {
    p0: PolynomialSR,
    perts: Vec<PreparedPert>,
}

enum Prepared {
    Scalar(PreparedScalar),
    Vector(Vec<PreparedScalar>),
    Torus(Vec<TorusComponent>),
}

pub struct Generator {
    precision: u32,
    prepared: Prepared,
}

fn prepare_scalar(cfg: &Config, seq: &ScalarSeq) -> Result<PreparedScalar> {
    let mut perts = Vec::with_capacity(seq.perturbations.len());
    for pert in &seq.perturbations {
        let (g, gamma) = reduce_to_unit_period(&cfg.basis, &pert.f)?;
        let arg = match pert.arg.try_scale_symbolic(&gamma) {
            Ok(folded) => PertArg::Symbolic(folded),
            Err(Error::ProductNotRepresentable { .. }) => PertArg::Numeric {
                p: pert.arg.clone(),
                gamma,
            },
            Err(e) => return Err(e),
        };
        perts.push(PreparedPert { arg, body: g.body });
    }
    Ok(PreparedScalar {
        p0: seq.p0.clone(),
        perts,
    })
}

impl Generator {
    pub fn new(config: &Config, precision: u32) -> Result<Self> {
        if precision < 64 {
            return Err(Error::config("generation precision must be at least 64 bits"));
        }
        config.validate()?;
        let prepared = match &config.sequence {
            SequenceSpec::Scalar(s) => Prepared::Scalar(prepare_scalar(config, s)?),
            SequenceSpec::Vector { components } => Prepared::Vector(
                components
                    .iter()
                    .map(|s| prepare_scalar(config, s))
                    .collect::<Result<Vec<_>>>()?,
            ),
            SequenceSpec::Torus { components } => Prepared::Torus(components.clone()),
        };
        Ok(Generator {
            precision,
            prepared,
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The point for one index, at the generator's precision.
    pub fn point(&self, ev: &Evaluator<'_>, n: u64) -> Result<SequencePoint> {
        let coords = match &self.prepared {
            Prepared::Scalar(s) => vec![self.scalar_coord(ev, s, n)?],
            Prepared::Vector(comps) => comps
                .iter()
                .map(|s| self.scalar_coord(ev, s, n))
                .collect::<Result<Vec<_>>>()?,
            Prepared::Torus(comps) => comps
                .iter()
                .map(|c| self.torus_coord(ev, c, n))
                .collect::<Result<Vec<_>>>()?,
        };
        for c in &coords {
            if !c.value.radius_at_most(self.precision) {
                return Err(Error::PrecisionCapExceeded {
                    needed: self.precision,
                    cap: crate::exactnum::eval::max_working_bits(),
                });
            }
        }
        Ok(SequencePoint { n, coords })
    }

    fn scalar_coord(&self, ev: &Evaluator<'_>, s: &PreparedScalar, n: u64) -> Result<Mod1> {
        let f = self.precision;
        let nn = BigInt::from(n);
        // main polynomial part, exact symbolic evaluation
        let mut lift = if s.p0.is_zero() {
            FixedInterval::zero(f + 24)
        } else {
            ev.eval(&s.p0.eval_at_integer(&nn), f + 16)?
        };
        for pert in &s.perts {
            let u = match &pert.arg {
                PertArg::Symbolic(folded) => {
                    let (v, wrap) = ev.frac(&folded.eval_at_integer(&nn), f + 16)?;
                    Mod1::new(v, wrap)
                }
                PertArg::Numeric { p, gamma } => {
                    let pv = ev.eval(&p.eval_at_integer(&nn), f + 16)?;
                    let mag_bits = (pv.midpoint.bits() as u32).saturating_sub(pv.scale_bits) + 2;
                    let gv = ev.eval(gamma, f + 16 + mag_bits)?;
                    let prod = gv.mul(&pv.to_scale(gv.scale_bits));
                    reduce_mod1(&prod)
                }
            };
            let val = pert.body.eval_interval(&u.representative().to_scale(f + 24));
            lift = lift.add(&val);
        }
        Ok(reduce_mod1(&lift))
    }

    fn torus_coord(&self, ev: &Evaluator<'_>, comp: &TorusComponent, n: u64) -> Result<Mod1> {
        let f = self.precision;
        let nn = BigInt::from(n);
        let args = comp
            .args
            .iter()
            .map(|p| {
                let (v, wrap) = ev.frac(&p.eval_at_integer(&nn), f + 16)?;
                Ok(Mod1::new(v, wrap))
            })
            .collect::<Result<Vec<_>>>()?;
        comp.map.eval(&args)
    }
}

/// All points for n in [n1, n2], inclusive, in index order.
pub fn generate(cfg: &Config, n1: u64, n2: u64, precision: u32) -> Result<Vec<SequencePoint>> {
    let gen = Generator::new(cfg, precision)?;
    if n1 > n2 {
        return Ok(Vec::new());
    }
    let ns: Vec<u64> = (n1..=n2).collect();
    let chunks: Vec<&[u64]> = ns.chunks(DEFAULT_CHUNK).collect();
    let results: Vec<Result<Vec<SequencePoint>>> = chunks
        .par_iter()
        .map(|chunk| {
            let ev = Evaluator::new(&cfg.basis);
            chunk.iter().map(|&n| gen.point(&ev, n)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(ns.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// CSV emission: `n,coord0[,coord1...],wrap` with 20 significant digits.
pub fn write_csv<W: std::io::Write>(points: &[SequencePoint], out: &mut W) -> std::io::Result<()> {
    let width = points.first().map_or(1, |p| p.coords.len());
    let mut header = String::from("n");
    for i in 0..width {
        header.push_str(&format!(",coord{i}"));
    }
    header.push_str(",wrap");
    writeln!(out, "{header}")?;
    for p in points {
        let mut line = p.n.to_string();
        for c in &p.coords {
            line.push(',');
            line.push_str(&decimal_string(&c.position(), 20));
        }
        let wrap = p.coords.iter().any(|c| c.wrap);
        line.push_str(if wrap { ",1" } else { ",0" });
        writeln!(out, "{line}")?;
    }
    Ok(())
}
