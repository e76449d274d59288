use num_bigint::BigInt;
use num_traits::Zero;

use super::{LatticePoint, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{dot, snf, IntMatrix};

/// Affine lattice isomorphism between `aff(P) ∩ Z^n` and `Z^d`.
///
/// Row-vector convention: `y = (x - origin) · forward` and
/// `x = origin + y · inverse`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeEmbedding {
    origin: LatticePoint,
    forward: IntMatrix,
    inverse: IntMatrix,
}

impl LatticeEmbedding {
    pub fn identity(n: usize) -> Self {
        LatticeEmbedding {
            origin: vec![BigInt::zero(); n],
            forward: IntMatrix::identity(n),
            inverse: IntMatrix::identity(n),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn dim(&self) -> usize {
        self.inverse.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.dim() == self.ambient_dim()
            && self.origin.iter().all(Zero::is_zero)
            && self.forward == IntMatrix::identity(self.dim())
    }

    pub fn origin(&self) -> &[BigInt] {
        &self.origin
    }

    /// Coordinates of `x` in the affine lattice; `x` must lie in `aff(P)`.
    pub fn to_lattice(&self, x: &[BigInt]) -> LatticePoint {
        let diff: Vec<BigInt> = x.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        (0..self.dim())
            .map(|j| dot(&diff, &self.forward.column(j)))
            .collect()
    }

    pub fn to_ambient(&self, y: &[BigInt]) -> LatticePoint {
        self.to_ambient_dilated(y, &BigInt::from(1))
    }

    /// Inverse map for the dilate `kP`, whose affine lattice is based at `k·origin`.
    pub fn to_ambient_dilated(&self, y: &[BigInt], k: &BigInt) -> LatticePoint {
        (0..self.ambient_dim())
            .map(|i| {
                let lin: BigInt = y
                    .iter()
                    .enumerate()
                    .map(|(r, yr)| yr * &self.inverse[(r, i)])
                    .sum();
                k * &self.origin[i] + lin
            })
            .collect()
    }
}

/// Maps `p` onto a full-dimensional polytope in `Z^d`, `d = dim(p)`.
///
/// The target lattice is the saturation `aff(P) ∩ Z^n`, obtained from the
/// Smith form `S = U M V` of the difference matrix `M`: the first `d` rows of
/// `V^{-1}` form a basis of the saturated lattice and `x ↦ (x - v0) V`
/// gives coordinates in it.
pub fn lattice_normalize(p: &Polytope) -> Result<(Polytope, LatticeEmbedding)> {
    let verts = p.vertices().to_vec();
    let n = p.ambient_dim();
    if p.is_full_dimensional() {
        let q = Polytope::new(n, verts.clone())?;
        let _ = q.cache.vertices.set(verts);
        return Ok((q, LatticeEmbedding::identity(n)));
    }
    let origin = verts[0].clone();
    let diffs: Vec<Vec<BigInt>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(&origin).map(|(a, b)| a - b).collect())
        .collect();
    let d = p.dim();
    let (forward, inverse) = if diffs.is_empty() {
        (IntMatrix::zeros(n, 0), IntMatrix::zeros(0, n))
    } else {
        let m = IntMatrix::from_rows(n, diffs)?;
        let s = snf(&m);
        if s.rank() != d {
            return Err(Error::Integrity("Smith rank disagrees with affine dimension".into()));
        }
        let vinv = s.v.unimodular_inverse()?;
        let forward = IntMatrix::from_rows(d, (0..n).map(|i| s.v.row(i)[..d].to_vec()))?;
        let inverse = IntMatrix::from_rows(n, (0..d).map(|r| vinv.row(r).to_vec()))?;
        (forward, inverse)
    };
    let emb = LatticeEmbedding {
        origin,
        forward,
        inverse,
    };
    let image: Vec<LatticePoint> = verts.iter().map(|v| emb.to_lattice(v)).collect();
    for (v, y) in verts.iter().zip(&image) {
        if emb.to_ambient(y) != *v {
            return Err(Error::Integrity("lattice embedding does not round-trip".into()));
        }
    }
    let q = Polytope::new(d, image)?;
    Ok((q, emb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::lattice_point;

    #[test]
    fn full_dimensional_is_identity() {
        let p = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let (q, e) = lattice_normalize(&p).unwrap();
        assert!(e.is_identity());
        assert_eq!(q.vertices(), p.vertices());
    }

    #[test]
    fn diagonal_segment_keeps_lattice_length() {
        // three lattice points on the diagonal force lattice length 2
        let p = Polytope::from_i64(&[&[0, 0], &[2, 2]]).unwrap();
        let (q, e) = lattice_normalize(&p).unwrap();
        assert_eq!(q.ambient_dim(), 1);
        let mut v: Vec<BigInt> = q.vertices().iter().map(|x| x[0].clone()).collect();
        v.sort();
        assert_eq!((&v[1] - &v[0]), BigInt::from(2));
        let mid = vec![(&v[0] + &v[1]) / 2];
        assert_eq!(e.to_ambient(&mid), lattice_point(&[1, 1]));
    }

    #[test]
    fn single_point_goes_to_zero_dimensions() {
        let p = Polytope::from_i64(&[&[3, -1, 4]]).unwrap();
        let (q, e) = lattice_normalize(&p).unwrap();
        assert_eq!(q.ambient_dim(), 0);
        assert_eq!(e.to_ambient(&[]), lattice_point(&[3, -1, 4]));
    }

    #[test]
    fn dilated_inverse_uses_scaled_origin() {
        let p = Polytope::from_i64(&[&[1, 1, 0], &[1, 0, 1]]).unwrap();
        let (q, e) = lattice_normalize(&p).unwrap();
        assert_eq!(q.ambient_dim(), 1);
        for v in q.vertices() {
            let x = e.to_ambient_dilated(v, &BigInt::from(1));
            assert!(p.vertices().contains(&x));
        }
        // the midpoint of 2P is 2·origin + (one step)
        let y0 = e.to_lattice(&lattice_point(&[1, 1, 0]));
        let y1 = e.to_lattice(&lattice_point(&[1, 0, 1]));
        let mid: Vec<BigInt> = y0.iter().zip(&y1).map(|(a, b)| a + b).collect();
        assert_eq!(e.to_ambient_dilated(&mid, &BigInt::from(2)), lattice_point(&[2, 1, 1]));
    }
}
