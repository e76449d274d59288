//! The integer decomposition property.
//!
//! `P` is IDP when every lattice point of `kP` is a sum of `k` lattice points
//! of `P`, for all `k >= 2`. Level `k` of the check verifies
//! `(k+1)P ∩ Z^d ⊆ (P ∩ Z^d) + (kP ∩ Z^d)`; by induction the levels
//! `1..=K` together establish the property for all dilations up to `K + 1`.
//!
//! For a `d`-dimensional lattice polytope the levels `k >= d - 1` hold
//! unconditionally: every lattice point of `(k+1)P` with `k >= d - 1` is a
//! lattice point of `P` plus a lattice point of `kP`. This is a standard
//! consequence of Carathéodory's theorem on the cone over `P` (see Bruns,
//! Gubeladze and Trung, "Normal polytopes, triangulations, and Koszul
//! algebras", J. reine angew. Math. 485 (1997), and Cox, Haase, Hibi and
//! Higashitani, "Integer decomposition property of dilated polytopes",
//! Electron. J. Combin. 21 (2014)). The default bound is therefore `d - 2`.
//! The check itself does not prove that fact; pass a larger `k_max` to test
//! more levels directly.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{minkowski_covers, Coverage, Enumerator, PointSet};
use crate::polytope::{lattice_point, point_to_i64, HalfSpace, LatticePoint, Polytope};

/// Largest dilation that will be materialized, in lattice points.
pub const DEFAULT_POINT_BUDGET: u128 = 20_000_000;

/// Levels checked when no bound is given.
pub fn default_bound(d: usize) -> usize {
    d.saturating_sub(2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdpStatus {
    Holds,
    /// `witness` is a lattice point of `dilation * P` (ambient coordinates)
    /// that is not a lattice point of `P` plus a lattice point of `level * P`.
    Fails {
        level: usize,
        dilation: usize,
        witness: Vec<i64>,
    },
    /// A resource limit was hit before level `level` could be checked.
    Undecided { level: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdpVerdict {
    pub status: IdpStatus,
    /// Levels verified to be covered.
    pub checked_k: Vec<usize>,
    /// The bound `K` that was requested.
    pub bound: usize,
    pub dim: usize,
}

impl IdpVerdict {
    pub fn holds(&self) -> bool {
        self.status == IdpStatus::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.status, IdpStatus::Fails { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self.status, IdpStatus::Undecided { .. })
    }
}

/// IDP check up to level `k_max` (default `d - 2`), with the default point budget.
pub fn is_idp(p: &Polytope, k_max: Option<usize>) -> Result<IdpVerdict> {
    is_idp_with_budget(p, k_max, DEFAULT_POINT_BUDGET)
}

pub fn is_idp_with_budget(p: &Polytope, k_max: Option<usize>, budget: u128) -> Result<IdpVerdict> {
    let (q, embedding) = p.normalized();
    let d = q.ambient_dim();
    let bound = k_max.unwrap_or_else(|| default_bound(d));
    let mut verdict = IdpVerdict { status: IdpStatus::Holds, checked_k: Vec::new(), bound, dim: d };
    if d == 0 || bound == 0 {
        return Ok(verdict);
    }
    let e = Enumerator::new(q)?;
    let base = e.enumerate(1)?;
    let mut level_set = base.clone();
    for k in 1..=bound {
        let dilation = k + 1;
        let size = e.count(dilation as u64)?;
        if size > budget {
            verdict.status = IdpStatus::Undecided {
                level: k,
                reason: format!("{size} lattice points in {dilation}P exceed the budget of {budget}"),
            };
            return Ok(verdict);
        }
        let target = e.enumerate(dilation as u64)?;
        match minkowski_covers(&base, &level_set, &target)? {
            Coverage::Covered => verdict.checked_k.push(k),
            Coverage::Uncovered(z) => {
                let zb = lattice_point(&z);
                if !verify_witness(q.facets()?, &base, &zb, k)? {
                    return Err(Error::Integrity(format!("IDP witness {z:?} at level {k} failed re-verification")));
                }
                let ambient = embedding.to_ambient_dilated(&zb, &BigInt::from(dilation));
                verdict.status = IdpStatus::Fails { level: k, dilation, witness: point_to_i64(&ambient)? };
                return Ok(verdict);
            }
        }
        level_set = target;
    }
    Ok(verdict)
}

/// Checks with facet inequalities alone that `z ∈ (k+1)P` and `z - x ∉ kP`
/// for every lattice point `x` of `P`.
fn verify_witness(facets: &[HalfSpace], base: &PointSet, z: &[BigInt], k: usize) -> Result<bool> {
    let inside = |x: &[BigInt], m: usize| {
        let m = BigInt::from(m);
        facets.iter().all(|h| crate::linalg::dot(&h.normal, x) <= &h.offset * &m)
    };
    if !inside(z, k + 1) {
        return Ok(false);
    }
    for x in base.iter() {
        let diff: LatticePoint = z.iter().zip(&x).map(|(a, b)| a - b).collect();
        if inside(&diff, k) {
            return Ok(false);
        }
    }
    Ok(true)
}
