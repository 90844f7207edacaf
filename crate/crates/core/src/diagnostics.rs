//! Empirical distribution measurements over generated points.
//!
//! Counting is exact: positions are dyadic rationals and memberships are
//! decided with integer arithmetic. Points whose enclosure cannot be placed
//! on one side of a boundary are carried as a contested count rather than
//! silently rounded. The seam at 0/1 is a first-class mode switch: `Hard`
//! treats [0,1) with the seam as a boundary, `Torus` identifies 0 and 1 and
//! treats anything within a stated tolerance of a box edge as contested.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::eval::cos_sin_2pi;
use crate::exactnum::interval::{FixedInterval, Mod1};
use crate::exactnum::rational::{decimal_string, simplest_rational_in, Rational};
use crate::generator::SequencePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeamMode {
    /// [0,1) with the seam as a hard boundary.
    Hard,
    /// R/Z with a boundary tolerance.
    Torus,
}

fn rat_dec(r: &Rational) -> String {
    decimal_string(r, 20)
}

mod serde_dec {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::rat_dec(r))
    }
}

// ---------------------------------------------------------------- membership

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum InOut {
    In,
    Out,
    Contested,
}

/// One coordinate of one point, prepared for repeated counting.
struct CachedPoint {
    pos: Rational,
    half_width: Rational,
    wrap: bool,
}

fn cache_coord(points: &[SequencePoint], coord: usize) -> Vec<CachedPoint> {
    points
        .iter()
        .map(|p| {
            let c = &p.coords[coord];
            CachedPoint {
                pos: c.position(),
                half_width: c.value.width() / Rational::from_integer(2.into()),
                wrap: c.wrap,
            }
        })
        .collect()
}

/// Membership of a cached point in the box [a, b), 0 <= a < b <= 1.
fn membership(p: &CachedPoint, a: &Rational, b: &Rational, mode: SeamMode, tol: &Rational) -> InOut {
    match mode {
        SeamMode::Hard => {
            if p.wrap {
                // possible positions [0, d] and [1-d, 1)
                let d = &p.pos + &p.half_width;
                let whole = a.is_zero() && b.is_one();
                if whole {
                    InOut::In
                } else if a > &d && *b <= Rational::one() - &d {
                    InOut::Out
                } else {
                    InOut::Contested
                }
            } else {
                let lo = &p.pos - &p.half_width;
                let hi = &p.pos + &p.half_width;
                if &lo >= a && &hi < b {
                    InOut::In
                } else if &hi < a || &lo >= b {
                    InOut::Out
                } else {
                    InOut::Contested
                }
            }
        }
        SeamMode::Torus => {
            let b_red = if b.is_one() { Rational::zero() } else { b.clone() };
            // torus distance of the midpoint to an edge, both wrap sides
            let dist = |x: &Rational, e: &Rational| -> Rational {
                let d = x - e;
                let d = &d - &d.floor();
                let half = Rational::new(BigInt::one(), BigInt::from(2));
                if d > half {
                    Rational::one() - d
                } else {
                    d
                }
            };
            let slack = &p.half_width + &p.half_width;
            let near = |e: &Rational| -> bool {
                let base = if p.wrap {
                    dist(&p.pos, e).min(dist(&-p.pos.clone(), e))
                } else {
                    dist(&p.pos, e)
                };
                base - &slack <= *tol
            };
            if near(a) || near(&b_red) {
                return InOut::Contested;
            }
            if p.wrap {
                let in0 = &p.pos >= a && &p.pos < b;
                let q = Rational::one() - &p.pos;
                let in1 = &q >= a && &q < b;
                if in0 && in1 {
                    InOut::In
                } else if !in0 && !in1 {
                    InOut::Out
                } else {
                    InOut::Contested
                }
            } else if &p.pos >= a && &p.pos < b {
                InOut::In
            } else {
                InOut::Out
            }
        }
    }
}

// ------------------------------------------------------------- discrepancy

#[derive(Debug, Clone, Serialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    #[serde(with = "serde_dec")]
    pub star_discrepancy: Rational,
    /// anchor/corner achieving the supremum
    pub worst: Vec<String>,
    pub contested: usize,
    /// grid resolution error (box estimator only)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

/// Exact star discrepancy of the 1-dim midpoint multiset via the sorted
/// formula max_i max(i/N - x_(i), x_(i) - (i-1)/N).
pub fn star_discrepancy_1d(points: &[SequencePoint]) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::config("no points"));
    }
    if points[0].coords.len() != 1 {
        return Err(Error::config("star_discrepancy_1d needs 1-dim points"));
    }
    let n = points.len();
    let contested = points.iter().filter(|p| p.coords[0].wrap).count();
    let mut xs: Vec<Rational> = points.iter().map(|p| p.coords[0].position()).collect();
    xs.sort_unstable();
    let nn = Rational::from_integer(BigInt::from(n));
    let mut best = Rational::zero();
    let mut worst = Rational::zero();
    for (i, x) in xs.iter().enumerate() {
        let up = Rational::from_integer(BigInt::from(i + 1)) / &nn - x;
        let down = x - Rational::from_integer(BigInt::from(i)) / &nn;
        for cand in [up, down] {
            if cand > best {
                best = cand;
                worst = x.clone();
            }
        }
    }
    Ok(DiscrepancyReport {
        n,
        star_discrepancy: best,
        worst: vec![rat_dec(&worst)],
        contested,
        grid_error: None,
        grid: None,
    })
}

/// Grid-anchored box discrepancy in d dimensions: sup over boxes
/// [0, i_1/m) x ... x [0, i_d/m) of |count/N - volume|; the true supremum
/// over all anchored boxes differs by at most d/m.
pub fn box_discrepancy(points: &[SequencePoint], m: usize) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::config("no points"));
    }
    if m < 2 {
        return Err(Error::config("grid must be at least 2"));
    }
    let d = points[0].coords.len();
    let cells = m
        .checked_pow(d as u32)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| Error::config("grid too fine for this dimension"))?;
    let n = points.len();
    let contested = points
        .iter()
        .filter(|p| p.coords.iter().any(|c| c.wrap))
        .count();

    let mut prefix = vec![0u64; cells];
    let mb = BigInt::from(m);
    for p in points {
        let mut idx = 0usize;
        for c in &p.coords {
            idx = idx * m + cell_index(c, &mb, m);
        }
        prefix[idx] += 1;
    }
    // in-place prefix sums along each axis
    for axis in 0..d {
        let stride: usize = m.pow((d - 1 - axis) as u32);
        for start in 0..cells {
            if !(start / stride).is_multiple_of(m) {
                continue;
            }
            let mut acc = 0u64;
            for j in 0..m {
                let at = start + j * stride;
                acc += prefix[at];
                prefix[at] = acc;
            }
        }
    }
    // prefix[idx] counts points with cell_j <= idx_j; the matching box is
    // [0, (idx_j+1)/m) per axis
    let nn = BigInt::from(n as u64);
    let md = BigInt::from(m as u64).pow(d as u32);
    let mut best_num = BigUint::zero();
    let mut worst_corner = vec![0usize; d];
    for idx in 0..cells {
        let mut digits = Vec::with_capacity(d);
        let mut rest = idx;
        for axis in 0..d {
            let stride = m.pow((d - 1 - axis) as u32);
            digits.push(rest / stride);
            rest %= stride;
        }
        let mut vol = BigInt::one();
        for &di in &digits {
            vol *= BigInt::from((di + 1) as u64);
        }
        let diff = (BigInt::from(prefix[idx]) * &md - &vol * &nn)
            .magnitude()
            .clone();
        if diff > best_num {
            best_num = diff;
            worst_corner = digits;
        }
    }
    let denom = &nn * &md;
    Ok(DiscrepancyReport {
        n,
        star_discrepancy: Rational::new(BigInt::from(best_num), denom),
        worst: worst_corner
            .iter()
            .map(|&i| format!("{}/{}", i + 1, m))
            .collect(),
        contested,
        grid_error: Some(rat_dec(&Rational::new(
            BigInt::from(d as u64),
            BigInt::from(m as u64),
        ))),
        grid: Some(m),
    })
}

fn cell_index(c: &Mod1, mb: &BigInt, m: usize) -> usize {
    // floor(position * m); wrapped points sit at their distance-to-zero
    // representative
    let num = &c.value.midpoint * mb;
    let cell = num_integer::Integer::div_floor(&num, &(BigInt::one() << c.value.scale_bits));
    let cell = cell.max(BigInt::zero()).min(BigInt::from(m - 1));
    cell.to_usize().unwrap_or(0)
}

// ---------------------------------------------------------------- Weyl sums

#[derive(Debug, Clone, Serialize)]
pub struct WeylSumReport {
    pub n: usize,
    pub a: Vec<i64>,
    /// |S_N| midpoint
    pub magnitude: String,
    /// rigorous width of the |S_N| enclosure
    pub error_bound: String,
}

impl WeylSumReport {
    pub fn magnitude_f64(&self) -> f64 {
        self.magnitude.parse().unwrap_or(f64::NAN)
    }
}

/// Normalized exponential sum (1/N) sum_k e^{2 pi i a.x_k} with a rigorous
/// error enclosure propagated from the point intervals. Chunk sums are
/// exact integer accumulators, so the result is independent of the degree
/// of parallelism.
pub fn weyl_sum(points: &[SequencePoint], a: &[i64]) -> Result<WeylSumReport> {
    if points.is_empty() {
        return Err(Error::config("no points"));
    }
    let d = points[0].coords.len();
    if a.len() != d || a.iter().all(|&x| x == 0) {
        return Err(Error::config("weyl vector must match dimension and be nonzero"));
    }
    let w = points[0].coords[0].value.scale_bits;
    let zero = || (FixedInterval::zero(w), FixedInterval::zero(w));
    let (re, im) = points
        .par_chunks(8192)
        .map(|chunk| {
            let mut acc = zero();
            for p in chunk {
                let mut t = FixedInterval::zero(w);
                for (c, &ai) in p.coords.iter().zip(a) {
                    if ai != 0 {
                        t = t.add(&c.representative().to_scale(w).mul_int(&BigInt::from(ai)));
                    }
                }
                let (cv, sv) = cos_sin_2pi(&t, true, true);
                acc.0 = acc.0.add(&cv.unwrap());
                acc.1 = acc.1.add(&sv.unwrap());
            }
            acc
        })
        .reduce(zero, |x, y| (x.0.add(&y.0), x.1.add(&y.1)));

    let n = points.len();
    let nb = BigUint::from(n as u64);
    let re = re.div_uint(&nb);
    let im = im.div_uint(&nb);
    let mag = re.mul(&re).add(&im.mul(&im)).sqrt();
    Ok(WeylSumReport {
        n,
        a: a.to_vec(),
        magnitude: rat_dec(&mag.midpoint_rational()),
        error_bound: rat_dec(&mag.width()),
    })
}

// ---------------------------------------------------------- covering radius

/// Largest torus L-infinity distance from a grid cell center to the nearest
/// point, within one grid resolution. An empirical density check: dense
/// point sets drive it to 0, rational rotations keep it bounded away.
pub fn covering_radius(points: &[SequencePoint], m: usize) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::config("no points"));
    }
    if m < 2 {
        return Err(Error::config("grid must be at least 2"));
    }
    let d = points[0].coords.len();
    let cells = m
        .checked_pow(d as u32)
        .filter(|&c| c <= 1 << 22)
        .ok_or_else(|| Error::config("grid too fine for this dimension"))?;
    let pos: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.coords.iter().map(|c| c.value.to_f64()).collect())
        .collect();
    let tdist = |a: f64, b: f64| -> f64 {
        let x = (a - b).abs();
        x.min(1.0 - x)
    };
    let worst = (0..cells)
        .into_par_iter()
        .map(|idx| {
            let mut center = vec![0.0f64; d];
            let mut rest = idx;
            for axis in 0..d {
                let stride = m.pow((d - 1 - axis) as u32);
                center[axis] = ((rest / stride) as f64 + 0.5) / m as f64;
                rest %= stride;
            }
            let mut nearest = f64::INFINITY;
            for p in &pos {
                let mut dd: f64 = 0.0;
                for axis in 0..d {
                    dd = dd.max(tdist(p[axis], center[axis]));
                    if dd >= nearest {
                        break;
                    }
                }
                nearest = nearest.min(dd);
            }
            nearest
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

// ------------------------------------------------------------------- atoms

#[derive(Debug, Clone, Serialize)]
pub struct AtomCluster {
    /// cluster location on the torus
    pub location: String,
    /// nearest rational t/q within delta, when one with q <= q_max exists
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub count: usize,
    #[serde(with = "serde_dec")]
    pub mass: Rational,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomReport {
    pub n: usize,
    pub delta: String,
    pub clusters: Vec<AtomCluster>,
    pub contested: usize,
}

/// Greedy scan for disjoint torus windows of radius delta with mass at
/// least mass_min, heaviest first. Cluster labels prefer the smallest
/// denominator rational within delta.
pub fn atom_scan(
    points: &[SequencePoint],
    delta: &Rational,
    mass_min: &Rational,
    q_max: u64,
) -> Result<AtomReport> {
    if points.is_empty() {
        return Err(Error::config("no points"));
    }
    if points[0].coords.len() != 1 {
        return Err(Error::config("atom_scan needs 1-dim points"));
    }
    if !(delta > &Rational::zero() && delta < &Rational::new(BigInt::one(), BigInt::from(4))) {
        return Err(Error::config("delta must lie in (0, 1/4)"));
    }
    let n = points.len();
    let contested = points.iter().filter(|p| p.coords[0].wrap).count();
    let mut xs: Vec<Rational> = points.iter().map(|p| p.coords[0].position()).collect();
    xs.sort_unstable();
    let min_count = {
        let v = mass_min * Rational::from_integer(BigInt::from(n as u64));
        v.ceil().to_integer().to_usize().unwrap_or(usize::MAX).max(1)
    };

    let two_delta = delta * Rational::from_integer(2.into());
    let one = Rational::one();
    let mut alive = vec![true; xs.len()];
    let mut clusters = Vec::new();
    loop {
        let live: Vec<usize> = (0..xs.len()).filter(|&i| alive[i]).collect();
        if live.len() < min_count {
            break;
        }
        let k = live.len();
        // circular two-pointer max window of torus width 2*delta
        let at = |t: usize| -> Rational {
            if t < k {
                xs[live[t]].clone()
            } else {
                &xs[live[t - k]] + &one
            }
        };
        let mut best: Option<(usize, usize, usize)> = None;
        let mut j = 0usize;
        for i in 0..k {
            if j < i {
                j = i;
            }
            while j + 1 < i + k && at(j + 1) - at(i) <= two_delta {
                j += 1;
            }
            let count = j - i + 1;
            if best.is_none_or(|(c, _, _)| count > c) {
                best = Some((count, i, j));
            }
        }
        let (count, start, end) = best.unwrap();
        if count < min_count {
            break;
        }
        let lo = at(start);
        let hi = at(end);
        let center_raw = (&lo + &hi) / Rational::from_integer(2.into());
        let center = &center_raw - center_raw.floor();
        for t in start..=end {
            alive[live[t % k]] = false;
        }
        let label = {
            let cand = simplest_rational_in(&(&center_raw - delta), &(&center_raw + delta));
            if cand.denom().to_u64().is_some_and(|q| q <= q_max) {
                let cand_red = &cand - cand.floor();
                Some(crate::exactnum::rational::format_rational(&cand_red))
            } else {
                None
            }
        };
        clusters.push(AtomCluster {
            location: rat_dec(&center),
            label,
            count,
            mass: Rational::new(BigInt::from(count as u64), BigInt::from(n as u64)),
        });
        if clusters.len() > 64 {
            break;
        }
    }
    Ok(AtomReport {
        n,
        delta: rat_dec(delta),
        clusters,
        contested,
    })
}

// ------------------------------------------------------------ Cesaro drift

#[derive(Debug, Clone, Serialize)]
pub struct CountInterval {
    pub decisive_in: usize,
    pub contested: usize,
    pub total: usize,
}

impl CountInterval {
    pub fn lo(&self) -> Rational {
        Rational::new(
            BigInt::from(self.decisive_in as u64),
            BigInt::from(self.total as u64),
        )
    }
    pub fn hi(&self) -> Rational {
        Rational::new(
            BigInt::from((self.decisive_in + self.contested) as u64),
            BigInt::from(self.total as u64),
        )
    }
}

fn count_cached(
    cached: &[CachedPoint],
    a: &Rational,
    b: &Rational,
    mode: SeamMode,
    tol: &Rational,
) -> CountInterval {
    let mut decisive_in = 0usize;
    let mut contested = 0usize;
    for p in cached {
        match membership(p, a, b, mode, tol) {
            InOut::In => decisive_in += 1,
            InOut::Contested => contested += 1,
            InOut::Out => {}
        }
    }
    CountInterval {
        decisive_in,
        contested,
        total: cached.len(),
    }
}

/// Membership counts for a box under a mode (coordinate `coord`).
pub fn count_box(
    points: &[SequencePoint],
    coord: usize,
    a: &Rational,
    b: &Rational,
    mode: SeamMode,
    tol: &Rational,
) -> CountInterval {
    count_cached(&cache_coord(points, coord), a, b, mode, tol)
}

/// The unavoidable change between two empirical measures of one box:
/// the gap between the two count intervals (0 when the observations are
/// consistent with a single limit).
pub fn count_gap(c1: &CountInterval, c2: &CountInterval) -> Rational {
    let g1 = c2.lo() - c1.hi();
    let g2 = c1.lo() - c2.hi();
    g1.max(g2).max(Rational::zero())
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxDrift {
    pub box_lo: String,
    pub box_hi: String,
    pub n1: usize,
    pub n2: usize,
    #[serde(with = "serde_dec")]
    pub hard: Rational,
    #[serde(with = "serde_dec")]
    pub torus: Rational,
    pub counts_hard: (CountInterval, CountInterval),
    pub counts_torus: (CountInterval, CountInterval),
}

/// Drift of the empirical measure of the 1-dim box [a,b) between the first
/// n1 and the first n2 points, in both seam modes.
pub fn drift_on_box(
    points: &[SequencePoint],
    n1: usize,
    n2: usize,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
) -> Result<BoxDrift> {
    if n1 == 0 || n1 >= n2 || n2 > points.len() {
        return Err(Error::config("need 0 < n1 < n2 <= number of points"));
    }
    let cached = cache_coord(&points[..n2], 0);
    let zero_tol = Rational::zero();
    let h1 = count_cached(&cached[..n1], a, b, SeamMode::Hard, &zero_tol);
    let h2 = count_cached(&cached, a, b, SeamMode::Hard, &zero_tol);
    let t1 = count_cached(&cached[..n1], a, b, SeamMode::Torus, tol);
    let t2 = count_cached(&cached, a, b, SeamMode::Torus, tol);
    Ok(BoxDrift {
        box_lo: rat_dec(a),
        box_hi: rat_dec(b),
        n1,
        n2,
        hard: count_gap(&h1, &h2),
        torus: count_gap(&t1, &t2),
        counts_hard: (h1, h2),
        counts_torus: (t1, t2),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub n1: usize,
    pub n2: usize,
    pub grid: usize,
    #[serde(with = "serde_dec")]
    pub sup_hard: Rational,
    #[serde(with = "serde_dec")]
    pub sup_torus: Rational,
    /// tolerance used for torus-mode boundary contests
    pub tol: String,
}

/// Sup over anchored grid boxes [0, j/m) of the count-interval gap between
/// the first n1 and first n2 points, per seam mode (1-dim points). The
/// torus tolerance is one grid cell.
pub fn cesaro_drift(points: &[SequencePoint], n1: usize, n2: usize, m: usize) -> Result<DriftReport> {
    if points.is_empty() || points[0].coords.len() != 1 {
        return Err(Error::config("cesaro_drift needs 1-dim points"));
    }
    if m < 2 {
        return Err(Error::config("grid must be at least 2"));
    }
    if n1 == 0 || n1 >= n2 || n2 > points.len() {
        return Err(Error::config("need 0 < n1 < n2 <= number of points"));
    }
    let cached = cache_coord(&points[..n2], 0);
    let tol = Rational::new(BigInt::one(), BigInt::from(m as u64));
    let zero_tol = Rational::zero();
    let zero = Rational::zero();
    let mut sup_hard = Rational::zero();
    let mut sup_torus = Rational::zero();
    for j in 1..=m {
        let b = Rational::new(BigInt::from(j as u64), BigInt::from(m as u64));
        let h1 = count_cached(&cached[..n1], &zero, &b, SeamMode::Hard, &zero_tol);
        let h2 = count_cached(&cached, &zero, &b, SeamMode::Hard, &zero_tol);
        let t1 = count_cached(&cached[..n1], &zero, &b, SeamMode::Torus, &tol);
        let t2 = count_cached(&cached, &zero, &b, SeamMode::Torus, &tol);
        sup_hard = sup_hard.max(count_gap(&h1, &h2));
        sup_torus = sup_torus.max(count_gap(&t1, &t2));
    }
    Ok(DriftReport {
        n1,
        n2,
        grid: m,
        sup_hard,
        sup_torus,
        tol: rat_dec(&tol),
    })
}

// -------------------------------------------------------------- limsup gap

/// max over n <= N of |{P0(n)} - {sum_j f_j(P_j(n))}| for a scalar config,
/// from two aligned streams.
pub fn limsup_gap(
    cfg: &crate::model::config::Config,
    n_max: u64,
    precision: u32,
) -> Result<Rational> {
    use crate::model::config::{Config, ScalarSeq, SequenceSpec};
    let scalar = match &cfg.sequence {
        SequenceSpec::Scalar(s) => s,
        _ => return Err(Error::config("limsup_gap needs a scalar config")),
    };
    let base = Config {
        basis: cfg.basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: scalar.p0.clone(),
            perturbations: Vec::new(),
        }),
        provenance: None,
    };
    let pert = Config {
        basis: cfg.basis.clone(),
        sequence: SequenceSpec::Scalar(ScalarSeq {
            p0: crate::model::poly::PolynomialSR::zero(),
            perturbations: scalar.perturbations.clone(),
        }),
        provenance: None,
    };
    let a = crate::generator::generate(&base, 1, n_max, precision)?;
    let b = crate::generator::generate(&pert, 1, n_max, precision)?;
    let mut best = Rational::zero();
    for (pa, pb) in a.iter().zip(&b) {
        let gap = (pa.coords[0].position() - pb.coords[0].position()).abs();
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}
