//! Exact rational kernels via fraction-free (Bareiss) elimination.
//!
//! Kernel basis vectors are returned cleared to coprime integers with the
//! first nonzero entry positive, so witnesses are reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactnum::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    acc += self.at(i, j) * &v[j];
                }
                acc
            })
            .collect()
    }
}

/// Row echelon form of the integer matrix, fraction-free. Returns the pivot
/// columns; `a` is modified in place.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                debug_assert!((&num % &prev).is_zero(), "fraction-free step not exact");
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    pivots
}

fn clear_row_denominators(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..m.cols {
                lcm = lcm.lcm(m.at(i, j).denom());
            }
            (0..m.cols)
                .map(|j| {
                    let r = m.at(i, j);
                    r.numer() * (&lcm / r.denom())
                })
                .collect()
        })
        .collect()
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    let mut a = clear_row_denominators(m);
    bareiss(&mut a, m.cols).len()
}

/// Basis of the right kernel { v : M v = 0 }, each vector scaled to coprime
/// integers with positive leading entry. Empty iff the kernel is trivial.
pub fn rational_kernel(m: &RatMatrix) -> Vec<Vec<Rational>> {
    assert!(m.rows >= 1 && m.cols >= 1);
    let mut a = clear_row_denominators(m);
    let pivots = bareiss(&mut a, m.cols);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); m.cols];
        v[f] = Rational::one();
        // Back substitution through the echelon rows.
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = Rational::zero();
            for j in pc + 1..m.cols {
                if !a[r][j].is_zero() && !v[j].is_zero() {
                    acc += Rational::from_integer(a[r][j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / Rational::from_integer(a[r][pc].clone());
        }
        basis.push(normalize_to_integers(v));
    }
    basis
}

/// Scale to coprime integer entries, first nonzero positive.
pub fn normalize_to_integers(v: Vec<Rational>) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in &v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if !g.is_zero() && !g.is_one() {
        for x in &mut ints {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
    }
    ints.into_iter().map(Rational::from_integer).collect()
}

/// True iff some kernel vector has every coordinate in `coords` nonzero.
/// Over an infinite field this holds exactly when no coordinate functional
/// in `coords` vanishes on the whole kernel.
pub fn kernel_full_support(basis: &[Vec<Rational>], coords: &[usize]) -> bool {
    if basis.is_empty() {
        return false;
    }
    coords
        .iter()
        .all(|&c| basis.iter().any(|v| !v[c].is_zero()))
}

/// An explicit kernel vector with all `coords` nonzero, when one exists.
/// Combines the basis with weights 1, t, t^2, ... raising t until every
/// required coordinate survives; each bad t is a root of a nonzero
/// polynomial of degree < dim, so few tries are needed.
pub fn full_support_witness(basis: &[Vec<Rational>], coords: &[usize]) -> Option<Vec<Rational>> {
    if !kernel_full_support(basis, coords) {
        return None;
    }
    let n = basis[0].len();
    let max_tries = (coords.len() * basis.len() + 2) as i64;
    for t in 1..=max_tries {
        let tr = Rational::from_integer(BigInt::from(t));
        let mut v = vec![Rational::zero(); n];
        let mut w = Rational::one();
        for b in basis {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += bi * &w;
            }
            w *= &tr;
        }
        if coords.iter().all(|&c| !v[c].is_zero()) {
            return Some(normalize_to_integers(v));
        }
    }
    unreachable!("a full-support combination must exist within the tried weights");
}
