//! Facet enumeration by the double description method.
//!
//! Points are homogenized to `(1, p)`; the facets of the polytope are the
//! extreme rays of the dual cone. Generators are inserted in lexicographic
//! order starting from the first affinely independent subset, and new
//! inequalities are formed only from combinatorially adjacent pairs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::HalfSpace;
use crate::error::{Error, Result};
use crate::linalg::{dot, make_primitive, rank_of_rows, rational_to_primitive, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    pub(crate) fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64).max(1)])
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub(crate) fn is_superset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }

    pub(crate) fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    coeffs: Vec<BigInt>,
    tight: BitSet,
}

/// Facets of the convex hull of `points`, which must affinely span `R^dim`.
///
/// Every returned halfspace has a primitive normal and is tight on at least
/// `dim` affinely independent input points.
pub fn hull_facets(points: &[Vec<BigInt>], dim: usize) -> Result<Vec<HalfSpace>> {
    if points.is_empty() {
        return Err(Error::Empty("hull of no points"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::Dimension(format!(
            "point of length {} in dimension {dim}",
            p.len()
        )));
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let mut gens: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut g = Vec::with_capacity(dim + 1);
            g.push(BigInt::from(1));
            g.extend(p.iter().cloned());
            g
        })
        .collect();
    gens.sort();
    gens.dedup();
    let n = gens.len();

    // first affinely independent subset in lexicographic order
    let mut basis: Vec<usize> = Vec::with_capacity(dim + 1);
    for i in 0..n {
        let mut rows: Vec<Vec<BigInt>> = basis.iter().map(|&b| gens[b].clone()).collect();
        rows.push(gens[i].clone());
        if rank_of_rows(rows, dim + 1) == basis.len() + 1 {
            basis.push(i);
            if basis.len() == dim + 1 {
                break;
            }
        }
    }
    if basis.len() < dim + 1 {
        return Err(Error::NotFullDimensional {
            dim: basis.len().saturating_sub(1),
            ambient: dim,
        });
    }

    let g = IntMatrix::from_rows(dim + 1, basis.iter().map(|&b| gens[b].clone()))?;
    let inv = g
        .rational_inverse()?
        .ok_or_else(|| Error::Integrity("affine basis is singular".into()))?;
    let mut rays: Vec<Ray> = (0..=dim)
        .map(|j| {
            let col: Vec<_> = inv.iter().map(|row| row[j].clone()).collect();
            let coeffs = rational_to_primitive(&col);
            let mut tight = BitSet::new(n);
            for (k, &b) in basis.iter().enumerate() {
                if k != j {
                    tight.insert(b);
                }
            }
            Ray { coeffs, tight }
        })
        .collect();

    for gi in 0..n {
        if basis.contains(&gi) {
            continue;
        }
        let gen = &gens[gi];
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(&r.coeffs, gen)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.tight.insert(gi);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.intersection(&rays[q].tight);
                if common.count() + 1 < dim {
                    continue;
                }
                let adjacent = !rays.iter().enumerate().any(|(r, ray)| {
                    r != p && r != q && ray.tight.is_superset(&common)
                });
                if !adjacent {
                    continue;
                }
                let mut coeffs: Vec<BigInt> = rays[q]
                    .coeffs
                    .iter()
                    .zip(&rays[p].coeffs)
                    .map(|(cq, cp)| &vals[p] * cq - &vals[q] * cp)
                    .collect();
                make_primitive(&mut coeffs);
                let mut tight = common;
                tight.insert(gi);
                next.push(Ray { coeffs, tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.insert(gi);
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
    }

    let mut facets: Vec<HalfSpace> = rays
        .into_iter()
        .map(|r| {
            // c0 + c·x >= 0  <=>  (-c)·x <= c0; c0 = -c·v at a tight point v,
            // so dividing by gcd(c) keeps the offset integral
            let normal: Vec<BigInt> = r.coeffs[1..].iter().map(|c| -c).collect();
            let g = normal.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            HalfSpace {
                normal: normal.into_iter().map(|x| x / &g).collect(),
                offset: &r.coeffs[0] / &g,
            }
        })
        .collect();
    facets.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
    facets.dedup();
    Ok(facets)
}
