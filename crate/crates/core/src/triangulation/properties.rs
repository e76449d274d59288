use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::placing::barycentric;
use super::{enumerate_triangulations, PointConfig, Triangulation};
use crate::error::{Error, Result};
use crate::linalg::{lp_solve, LpOutcome, LpProblem, Sense};
use crate::polytope::Polytope;

/// Heights inducing `t` as a lower envelope, if any.
///
/// Variables are the heights `w` and a slack `s <= 1`. Across every interior
/// ridge the far vertex of the neighbouring simplex must lie at least `s`
/// above the lifted hyperplane of the simplex, and every unused point must lie
/// at least `s` above the simplex containing it. The triangulation is regular
/// iff the optimal `s` is positive.
pub fn regular_heights(c: &PointConfig, t: &Triangulation) -> Result<Option<Vec<BigRational>>> {
    let n = c.len();
    let zero = BigRational::zero;
    let mut a: Vec<Vec<BigRational>> = Vec::new();
    let mut b: Vec<BigRational> = Vec::new();
    let mut fold = |simplex: &[usize], above: usize| -> Result<()> {
        let mu = barycentric(c, simplex, above)
            .ok_or_else(|| Error::Integrity("simplex does not span the configuration".into()))?;
        let mut row = vec![zero(); n + 1];
        row[n] = BigRational::one();
        row[above] -= BigRational::one();
        for (&v, m) in simplex.iter().zip(&mu) {
            row[v] += m;
        }
        a.push(row);
        b.push(zero());
        Ok(())
    };
    for owners in t.ridges().values() {
        if let [(s1, _), (_, far)] = owners.as_slice() {
            fold(&t.simplices()[*s1], *far)?;
        }
    }
    let used = t.used_points();
    for u in (0..n).filter(|u| used.binary_search(u).is_err()) {
        let home = t
            .simplices()
            .iter()
            .find(|s| barycentric(c, s, u).is_some_and(|mu| mu.iter().all(|x| !x.is_negative())))
            .ok_or_else(|| Error::Integrity(format!("point {u} is not covered by the triangulation")))?;
        fold(home, u)?;
    }
    let mut cap = vec![zero(); n + 1];
    cap[n] = BigRational::one();
    a.push(cap);
    b.push(BigRational::one());
    let mut obj = vec![zero(); n + 1];
    obj[n] = BigRational::one();
    let lp = LpProblem::new(a, b, obj, Sense::Maximize)?;
    match lp_solve(&lp) {
        LpOutcome::Optimal { value, witness } if value.is_positive() => Ok(Some(witness.0[..n].to_vec())),
        LpOutcome::Optimal { .. } => Ok(None),
        other => Err(Error::Integrity(format!("regularity LP ended as {other:?}"))),
    }
}

pub fn is_regular(c: &PointConfig, t: &Triangulation) -> Result<bool> {
    Ok(regular_heights(c, t)?.is_some())
}

/// Every clique of the 1-skeleton is a face. Checked by extending each face
/// by each vertex adjacent to all of it.
pub fn is_flag(t: &Triangulation) -> Result<bool> {
    let n = t.used_points().last().map_or(0, |&m| m + 1);
    if n > 128 {
        return Err(Error::ConfigTooLarge { points: n, limit: 128 });
    }
    let mut faces: HashSet<u128> = HashSet::new();
    let mut neighbours = vec![0u128; n];
    for s in t.simplices() {
        let full: u128 = s.iter().fold(0, |m, &i| m | 1 << i);
        for &i in s {
            neighbours[i] |= full & !(1 << i);
        }
        // all nonempty subsets of the simplex
        let mut sub = full;
        while sub != 0 {
            faces.insert(sub);
            sub = (sub - 1) & full;
        }
    }
    for &f in &faces {
        let common = (0..n)
            .filter(|&i| f >> i & 1 == 1)
            .fold(u128::MAX, |m, i| m & neighbours[i]);
        let mut cand = common & !f;
        while cand != 0 {
            let v = cand.trailing_zeros();
            if !faces.contains(&(f | 1 << v)) {
                return Ok(false);
            }
            cand &= cand - 1;
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationReport {
    pub triangulation: Triangulation,
    pub regular: bool,
    pub unimodular: bool,
    pub flag: bool,
}

impl TriangulationReport {
    pub fn is_quadratic(&self) -> bool {
        self.regular && self.unimodular && self.flag
    }
}

/// Properties of every triangulation of a configuration of at most `d + 3` points.
pub fn triangulation_reports(c: &PointConfig) -> Result<Vec<TriangulationReport>> {
    enumerate_triangulations(c)?
        .into_par_iter()
        .map(|t| {
            Ok(TriangulationReport {
                regular: is_regular(c, &t)?,
                unimodular: t.is_unimodular(c),
                flag: is_flag(&t)?,
                triangulation: t,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadraticVerdict {
    Exists(TriangulationReport),
    /// No triangulation qualifies; the full property table is attached.
    NoneExists(Vec<TriangulationReport>),
}

/// Searches the triangulations with vertices among the lattice points of `p`.
pub fn exists_quadratic_triangulation(p: &Polytope) -> Result<QuadraticVerdict> {
    let c = PointConfig::lattice_points(p)?;
    let reports = triangulation_reports(&c)?;
    Ok(match reports.iter().find(|r| r.is_quadratic()) {
        Some(r) => QuadraticVerdict::Exists(r.clone()),
        None => QuadraticVerdict::NoneExists(reports),
    })
}
