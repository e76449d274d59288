//! h* from a half-open decomposition of a triangulation.
//!
//! Each simplex drops the facets that a reference point sees, so the
//! half-open simplices partition the polytope. A half-open simplex with
//! vertex set `V` contributes `t^height` for every lattice point of the
//! fundamental parallelepiped of the cone over `V`, where the height counts
//! the last homogeneous coordinate and excluded facets with coefficient zero
//! are shifted up by one.
//!
//! The reference point is the vertex barycentre perturbed by
//! `eps e_1 + eps^2 e_2 + ...` with symbolic `eps`, which puts it off every
//! facet hyperplane without any numeric choice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{placing_triangulation, PointConfig};
use crate::ehrhart::HStarVector;
use crate::error::{Error, Result};
use crate::linalg::{snf, IntMatrix};
use crate::polytope::Polytope;

pub fn hstar_halfopen(p: &Polytope) -> Result<HStarVector> {
    let q = &p.normalized().0;
    let d = q.ambient_dim();
    if d == 0 {
        return HStarVector::from_i64(&[1]);
    }
    let c = PointConfig::new(d, q.vertices().to_vec())?;
    let order: Vec<usize> = (0..c.len()).collect();
    let t = placing_triangulation(&c, &order)?;

    // homogeneous coordinates of the barycentre scaled by the vertex count
    let mut reference = vec![BigInt::from(c.len())];
    for j in 0..d {
        reference.push(c.points().iter().map(|v| &v[j]).sum());
    }

    let mut h = vec![BigInt::zero(); d + 1];
    for s in t.simplices() {
        let m = IntMatrix::from_rows(d + 1, s.iter().map(|&i| c.homogenized(i)))?;
        let inv = m
            .rational_inverse()?
            .ok_or_else(|| Error::Integrity("triangulation contains a flat simplex".into()))?;
        let excluded: Vec<bool> = (0..=d).map(|j| perturbed_sign(&reference, &inv, j).is_negative()).collect();
        for height in box_heights(&m, &excluded)? {
            if height > d {
                return Err(Error::Integrity(format!("box point of height {height} in dimension {d}")));
            }
            h[height] += 1;
        }
    }
    HStarVector::new(h)
}

/// Sign of the `j`-th barycentric coordinate of the perturbed reference point.
/// The coordinate is affine in the point, so the `eps^k` term is the `j`-th
/// entry of row `k` of the inverse of the homogenized vertex matrix.
fn perturbed_sign(reference: &[BigInt], inv: &[Vec<BigRational>], j: usize) -> BigRational {
    let at_reference: BigRational = reference
        .iter()
        .zip(inv)
        .map(|(r, row)| BigRational::from_integer(r.clone()) * &row[j])
        .sum();
    if !at_reference.is_zero() {
        return at_reference;
    }
    inv[1..]
        .iter()
        .map(|row| row[j].clone())
        .find(|x| !x.is_zero())
        .expect("columns of an invertible matrix are nonzero")
}

/// Heights of the lattice points `lambda · M` with `lambda ∈ [0,1)^{d+1}`.
///
/// With the Smith form `S = U M V`, the classes of `Z^{d+1}` modulo the row
/// lattice of `M` are `y V^{-1}` for `y ∈ prod [0, s_i)`, and their
/// coefficients are `frac(y S^{-1} U)`. Everything is scaled by the largest
/// invariant factor `D` so the arithmetic stays integral.
fn box_heights(m: &IntMatrix, excluded: &[bool]) -> Result<Vec<usize>> {
    let n = m.rows();
    let smith = snf(m);
    let factors: Vec<BigInt> = (0..n).map(|i| smith.s[(i, i)].clone()).collect();
    if factors.iter().any(|f| f.is_zero()) {
        return Err(Error::Integrity("singular simplex matrix".into()));
    }
    let big_d = factors[n - 1].clone();
    let weights: Vec<BigInt> = factors.iter().map(|f| &big_d / f).collect();
    let count = factors
        .iter()
        .try_fold(1u64, |acc, f| f.to_u64().and_then(|f| acc.checked_mul(f)))
        .ok_or(Error::Overflow("fundamental parallelepiped size"))?;

    let mut heights = Vec::with_capacity(count as usize);
    let mut y = vec![BigInt::zero(); n];
    for _ in 0..count {
        let mut total = BigInt::zero();
        let mut shifted = 0;
        for j in 0..n {
            let num: BigInt = (0..n).map(|i| &y[i] * &weights[i] * &smith.u[(i, j)]).sum();
            let lam = num.mod_floor(&big_d);
            if lam.is_zero() && excluded[j] {
                shifted += 1;
            }
            total += lam;
        }
        let (height, rem) = total.div_rem(&big_d);
        if !rem.is_zero() {
            return Err(Error::Integrity("box point with fractional height".into()));
        }
        let height = height.to_usize().ok_or(Error::Overflow("box point height"))?;
        heights.push(height + shifted);
        // mixed-radix increment of y over prod [0, s_i)
        for i in 0..n {
            y[i] += 1;
            if y[i] < factors[i] {
                break;
            }
            y[i] = BigInt::zero();
        }
    }
    Ok(heights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(p: &[&[i64]]) -> Vec<i64> {
        hstar_halfopen(&Polytope::from_i64(p).unwrap())
            .unwrap()
            .coeffs()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn simplex_and_square() {
        assert_eq!(h(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]), vec![1, 0, 0, 0]);
        assert_eq!(h(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), vec![1, 1, 0]);
    }

    #[test]
    fn non_unimodular_simplices() {
        // Reeve-type tetrahedron with normalized volume 3 and no other lattice points
        assert_eq!(h(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 3]]), vec![1, 0, 2, 0]);
        // triangle of normalized volume 4 with one interior point
        assert_eq!(h(&[&[0, 0], &[2, 0], &[0, 2]]), vec![1, 3, 0]);
        assert_eq!(h(&[&[-1, -1], &[1, 0], &[0, 1]]), vec![1, 1, 1]);
    }

    #[test]
    fn lower_dimensional_input() {
        assert_eq!(h(&[&[1, 1, 1]]), vec![1]);
        assert_eq!(h(&[&[0, 0], &[3, 3]]), vec![1, 2]);
    }
}
