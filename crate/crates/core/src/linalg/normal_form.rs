//! Hermite and Smith normal forms over the integers.
//!
//! Both routines track the unimodular transforms so callers can map between
//! the original and the reduced coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{abs_cmp, IntMatrix};

/// Row-style Hermite normal form `h = u * m`.
#[derive(Debug, Clone)]
pub struct Hermite {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

/// Smith normal form `s = u * m * v`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries `d1 | d2 | ... | dr`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Row-style HNF: pivots strictly move right, are positive, and every entry
/// above a pivot lies in `[0, pivot)`. Zero rows sink to the bottom.
pub fn hnf(m: &IntMatrix) -> Hermite {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| abs_cmp(&h[(a, c)], &h[(b, c)]));
            let Some(piv) = piv else { break };
            h.swap_rows(r, piv);
            u.swap_rows(r, piv);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    Hermite { h, u, pivots }
}

/// Smith normal form with nonnegative diagonal satisfying the divisibility chain.
pub fn snf(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&s, t) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder appeared in row/column t; move it to the pivot
                let (bi, bj) = smallest_in_cross(&s, t);
                s.swap_rows(t, bi);
                u.swap_rows(t, bi);
                s.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // divisibility: fold an offending row into row t and restart
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&s[(i, j)] % &s[(t, t)]).is_zero())
            });
            match offending {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { s, u, v }
}

fn min_abs_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            if best.map_or(true, |(bi, bj)| abs_cmp(&m[(i, j)], &m[(bi, bj)]).is_lt()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..m.rows() {
        if !m[(i, t)].is_zero() && abs_cmp(&m[(i, t)], &m[best]).is_lt() {
            best = (i, t);
        }
    }
    for j in t..m.cols() {
        if !m[(t, j)].is_zero() && abs_cmp(&m[(t, j)], &m[best]).is_lt() {
            best = (t, j);
        }
    }
    best
}
