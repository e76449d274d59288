//! Recursive coordinate fixing over the dilates `kP`.
//!
//! At depth `i` the admissible values of `x_i` given the prefix
//! `x_0..x_{i-1}` come from an inequality system on the first `i+1`
//! coordinates. The default system is the facet description of the
//! projection of `P` onto those coordinates, computed once from the vertices.
//! It is exact and irredundant, and since dilation only scales right-hand
//! sides it serves every `k`. The alternative solves two exact LPs per node.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{Packing, PointSet};
use crate::error::{Error, Result};
use crate::linalg::{lp_solve, LpOutcome, LpProblem, Sense};
use crate::polytope::{hull_facets, point_to_i64, HalfSpace, Polytope};

/// Inequality budget for the projection tower before falling back to LP bounds.
pub const DEFAULT_INEQUALITY_BUDGET: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundStrategy {
    /// Precomputed facets of the coordinate projections.
    #[default]
    ProjectionTower,
    /// Two exact LPs at every node of the recursion.
    Lp,
}

#[derive(Debug, Clone)]
struct Level {
    rows: Vec<i64>,
    rhs: Vec<i64>,
}

#[derive(Debug, Clone)]
enum Bounds {
    Tower(Vec<Level>),
    Lp(Vec<HalfSpace>),
}

/// Lattice point enumerator for the dilates of a full-dimensional polytope.
#[derive(Debug, Clone)]
pub struct Enumerator {
    dim: usize,
    lo: Vec<i64>,
    hi: Vec<i64>,
    bounds: Bounds,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("inequality coefficient exceeds i64"))
}

impl Enumerator {
    pub fn new(p: &Polytope) -> Result<Self> {
        Self::with_budget(p, DEFAULT_INEQUALITY_BUDGET)
    }

    /// Builds the projection tower, falling back to LP bounds once the total
    /// number of inequalities exceeds `budget`.
    pub fn with_budget(p: &Polytope, budget: usize) -> Result<Self> {
        let mut e = Self::with_strategy(p, BoundStrategy::Lp)?;
        let verts = p.vertices();
        let mut levels = Vec::with_capacity(e.dim);
        let mut total = 0;
        for depth in 0..e.dim {
            let mut proj: Vec<Vec<BigInt>> = verts.iter().map(|v| v[..=depth].to_vec()).collect();
            proj.sort();
            proj.dedup();
            let facets = hull_facets(&proj, depth + 1)?;
            total += facets.len();
            if total > budget {
                return Ok(e);
            }
            let mut rows = Vec::new();
            let mut rhs = Vec::new();
            for h in facets.iter().filter(|h| !h.normal[depth].is_zero()) {
                for a in &h.normal {
                    rows.push(to_i64(a)?);
                }
                rhs.push(to_i64(&h.offset)?);
            }
            levels.push(Level { rows, rhs });
        }
        e.bounds = Bounds::Tower(levels);
        Ok(e)
    }

    pub fn with_strategy(p: &Polytope, strategy: BoundStrategy) -> Result<Self> {
        if !p.is_full_dimensional() {
            return Err(Error::NotFullDimensional {
                dim: p.dim(),
                ambient: p.ambient_dim(),
            });
        }
        let dim = p.ambient_dim();
        let verts: Vec<Vec<i64>> = p.vertices().iter().map(|v| point_to_i64(v)).collect::<Result<_>>()?;
        let lo = (0..dim).map(|j| verts.iter().map(|v| v[j]).min().unwrap_or(0)).collect();
        let hi = (0..dim).map(|j| verts.iter().map(|v| v[j]).max().unwrap_or(0)).collect();
        match strategy {
            BoundStrategy::ProjectionTower => Self::with_budget(p, usize::MAX),
            BoundStrategy::Lp => Ok(Enumerator {
                dim,
                lo,
                hi,
                bounds: Bounds::Lp(p.facets()?.to_vec()),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strategy(&self) -> BoundStrategy {
        match self.bounds {
            Bounds::Tower(_) => BoundStrategy::ProjectionTower,
            Bounds::Lp(_) => BoundStrategy::Lp,
        }
    }

    fn scaled_box(&self, k: u64) -> Result<(Vec<i64>, Vec<i64>)> {
        let k = i64::try_from(k).map_err(|_| Error::Overflow("dilation factor"))?;
        let scale = |v: &[i64]| -> Result<Vec<i64>> {
            v.iter()
                .map(|x| x.checked_mul(k).ok_or(Error::Overflow("dilated bounding box")))
                .collect()
        };
        Ok((scale(&self.lo)?, scale(&self.hi)?))
    }

    fn bounds(&self, depth: usize, k: u64, boxes: &(Vec<i64>, Vec<i64>), prefix: &[i64]) -> Result<Option<(i64, i64)>> {
        let mut lo = boxes.0[depth] as i128;
        let mut hi = boxes.1[depth] as i128;
        match &self.bounds {
            Bounds::Tower(levels) => {
                let level = &levels[depth];
                let width = depth + 1;
                let k = k as i128;
                let overflow = || Error::Overflow("enumeration bound");
                for (r, &b) in level.rhs.iter().enumerate() {
                    let row = &level.rows[r * width..(r + 1) * width];
                    let mut s = k.checked_mul(b as i128).ok_or_else(overflow)?;
                    for j in 0..depth {
                        s = s.checked_sub(row[j] as i128 * prefix[j] as i128).ok_or_else(overflow)?;
                    }
                    let a = row[depth] as i128;
                    if a > 0 {
                        hi = hi.min(Integer::div_floor(&s, &a));
                    } else {
                        lo = lo.max(-Integer::div_floor(&s, &-a));
                    }
                    if lo > hi {
                        return Ok(None);
                    }
                }
            }
            Bounds::Lp(facets) => match lp_interval(facets, depth, k, prefix) {
                Some((l, h)) => {
                    lo = lo.max(l);
                    hi = hi.min(h);
                }
                None => return Ok(None),
            },
        }
        // both ends lie inside the dilated bounding box, hence fit in i64
        Ok((lo <= hi).then_some((lo as i64, hi as i64)))
    }

    fn visit<F: FnMut(&[i64])>(
        &self,
        depth: usize,
        k: u64,
        boxes: &(Vec<i64>, Vec<i64>),
        prefix: &mut Vec<i64>,
        f: &mut F,
    ) -> Result<()> {
        if depth == self.dim {
            f(prefix);
            return Ok(());
        }
        let Some((lo, hi)) = self.bounds(depth, k, boxes, prefix)? else {
            return Ok(());
        };
        for v in lo..=hi {
            prefix.push(v);
            self.visit(depth + 1, k, boxes, prefix, f)?;
            prefix.pop();
        }
        Ok(())
    }

    fn count_from(&self, depth: usize, k: u64, boxes: &(Vec<i64>, Vec<i64>), prefix: &mut Vec<i64>) -> Result<u128> {
        let Some((lo, hi)) = self.bounds(depth, k, boxes, prefix)? else {
            return Ok(0);
        };
        if depth + 1 == self.dim {
            return Ok((hi as i128 - lo as i128 + 1) as u128);
        }
        let mut total = 0u128;
        for v in lo..=hi {
            prefix.push(v);
            total = total
                .checked_add(self.count_from(depth + 1, k, boxes, prefix)?)
                .ok_or(Error::Overflow("lattice point count"))?;
            prefix.pop();
        }
        Ok(total)
    }

    fn first_coordinate_range(&self, k: u64, boxes: &(Vec<i64>, Vec<i64>)) -> Result<Vec<i64>> {
        Ok(match self.bounds(0, k, boxes, &[])? {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        })
    }

    /// `|kP ∩ Z^d|` without materializing the points.
    pub fn count(&self, k: u64) -> Result<u128> {
        check_k(k)?;
        if self.dim == 0 {
            return Ok(1);
        }
        let boxes = self.scaled_box(k)?;
        let firsts = self.first_coordinate_range(k, &boxes)?;
        let parts: Vec<u128> = firsts
            .par_iter()
            .map(|&v| {
                let mut prefix = vec![v];
                if self.dim == 1 {
                    Ok(1)
                } else {
                    self.count_from(1, k, &boxes, &mut prefix)
                }
            })
            .collect::<Result<_>>()?;
        parts
            .into_iter()
            .try_fold(0u128, |a, b| a.checked_add(b))
            .ok_or(Error::Overflow("lattice point count"))
    }

    /// `kP ∩ Z^d` as a point set.
    pub fn enumerate(&self, k: u64) -> Result<PointSet> {
        check_k(k)?;
        if self.dim == 0 {
            return PointSet::from_points(0, vec![vec![]]);
        }
        let boxes = self.scaled_box(k)?;
        let firsts = self.first_coordinate_range(k, &boxes)?;
        let packing = Packing::for_box(&boxes.0, &boxes.1);
        match packing {
            Some(packing) => {
                let parts: Vec<Vec<u128>> = firsts
                    .par_iter()
                    .map(|&v| {
                        let mut keys = Vec::new();
                        let mut prefix = vec![v];
                        self.visit(1, k, &boxes, &mut prefix, &mut |x| {
                            keys.push(packing.encode(x).expect("point inside the dilated box"))
                        })?;
                        Ok(keys)
                    })
                    .collect::<Result<_>>()?;
                Ok(PointSet::from_sorted_keys(self.dim, packing, parts.concat()))
            }
            None => {
                let parts: Vec<Vec<Vec<i64>>> = firsts
                    .par_iter()
                    .map(|&v| {
                        let mut pts = Vec::new();
                        let mut prefix = vec![v];
                        self.visit(1, k, &boxes, &mut prefix, &mut |x| pts.push(x.to_vec()))?;
                        Ok(pts)
                    })
                    .collect::<Result<_>>()?;
                Ok(PointSet::from_sorted_points(self.dim, parts.concat()))
            }
        }
    }
}

fn check_k(k: u64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("dilation factor must be positive".into()));
    }
    Ok(())
}

/// Real interval of `x_depth` over `{x ∈ kP : x_j = prefix_j, j < depth}`,
/// rounded inward to integers.
fn lp_interval(facets: &[HalfSpace], depth: usize, k: u64, prefix: &[i64]) -> Option<(i128, i128)> {
    let dim = facets.first().map_or(0, |h| h.normal.len());
    let q = |x: BigInt| BigRational::from_integer(x);
    let mut a = Vec::with_capacity(facets.len());
    let mut b = Vec::with_capacity(facets.len());
    for h in facets {
        let fixed: BigInt = (0..depth).map(|j| &h.normal[j] * prefix[j]).sum();
        a.push(h.normal[depth..].iter().map(|x| q(x.clone())).collect::<Vec<_>>());
        b.push(q(&h.offset * k - fixed));
    }
    let mut c = vec![BigRational::zero(); dim - depth];
    c[0] = BigRational::from_integer(1.into());
    let solve = |sense| {
        let lp = LpProblem::new(a.clone(), b.clone(), c.clone(), sense).expect("consistent LP");
        match lp_solve(&lp) {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    };
    let hi = solve(Sense::Maximize)?.floor().to_integer().to_i128()?;
    let lo = solve(Sense::Minimize)?.ceil().to_integer().to_i128()?;
    Some((lo, hi))
}

/// `kP ∩ Z^d` for a full-dimensional polytope.
pub fn enumerate_points(p: &Polytope, k: u64) -> Result<PointSet> {
    Enumerator::new(p)?.enumerate(k)
}

/// `|kP ∩ Z^n|` for any polytope; lower-dimensional inputs are normalized first.
pub fn count_points(p: &Polytope, k: u64) -> Result<BigInt> {
    let q = &p.normalized().0;
    Ok(BigInt::from(Enumerator::new(q)?.count(k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cube(d: usize) -> Polytope {
        let pts: Vec<Vec<BigInt>> = (0..1u32 << d)
            .map(|m| (0..d).map(|i| BigInt::from((m >> i) & 1)).collect())
            .collect();
        Polytope::new(d, pts).unwrap()
    }

    fn simplex(d: usize) -> Polytope {
        let mut pts = vec![vec![BigInt::zero(); d]];
        for i in 0..d {
            let mut e = vec![BigInt::zero(); d];
            e[i] = 1.into();
            pts.push(e);
        }
        Polytope::new(d, pts).unwrap()
    }

    fn binom(n: u64, k: u64) -> u128 {
        (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
    }

    #[test]
    fn unit_square_has_four_points() {
        let s = enumerate_points(&cube(2), 1).unwrap();
        assert_eq!(s.to_vec(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn cube_counts() {
        for d in 1..=5 {
            let e = Enumerator::new(&cube(d)).unwrap();
            for k in 1..=4u64 {
                assert_eq!(e.count(k).unwrap(), (k as u128 + 1).pow(d as u32));
            }
        }
    }

    #[test]
    fn simplex_counts_are_binomial() {
        for d in 1..=6 {
            let e = Enumerator::new(&simplex(d)).unwrap();
            for k in 1..=5u64 {
                assert_eq!(e.count(k).unwrap(), binom(k + d as u64, d as u64));
                assert_eq!(e.enumerate(k).unwrap().len() as u128, binom(k + d as u64, d as u64));
            }
        }
    }

    #[test]
    fn zero_dilation_is_rejected() {
        assert!(Enumerator::new(&cube(2)).unwrap().count(0).is_err());
    }

    #[test]
    fn lower_dimensional_count_goes_through_normalization() {
        let p = Polytope::from_i64(&[&[0, 0], &[2, 2]]).unwrap();
        assert_eq!(count_points(&p, 1).unwrap(), BigInt::from(3));
        assert_eq!(count_points(&p, 3).unwrap(), BigInt::from(7));
        assert!(enumerate_points(&p, 1).is_err());
        let pt = Polytope::from_i64(&[&[5, 5, 5]]).unwrap();
        assert_eq!(count_points(&pt, 4).unwrap(), BigInt::from(1));
    }

    #[test]
    fn tiny_budget_falls_back_to_lp() {
        let e = Enumerator::with_budget(&cube(3), 2).unwrap();
        assert_eq!(e.strategy(), BoundStrategy::Lp);
        assert_eq!(e.count(2).unwrap(), 27);
    }

    fn arb_polytope() -> impl Strategy<Value = Polytope> {
        (1usize..=3).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), d + 1..=d + 4).prop_filter_map(
                "full-dimensional",
                move |pts| {
                    let pts: Vec<Vec<BigInt>> =
                        pts.into_iter().map(|p| p.into_iter().map(BigInt::from).collect()).collect();
                    let p = Polytope::new(d, pts).ok()?;
                    p.is_full_dimensional().then_some(p)
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn strategies_agree_and_points_are_members(p in arb_polytope(), k in 1u64..=2) {
            let tower = Enumerator::with_strategy(&p, BoundStrategy::ProjectionTower).unwrap();
            let lp = Enumerator::with_strategy(&p, BoundStrategy::Lp).unwrap();
            let a = tower.enumerate(k).unwrap();
            let b = lp.enumerate(k).unwrap();
            prop_assert_eq!(a.to_vec(), b.to_vec());
            prop_assert_eq!(tower.count(k).unwrap(), a.len() as u128);
            let kp = Polytope::new(
                p.ambient_dim(),
                p.vertices().iter().map(|v| v.iter().map(|x| x * k).collect()).collect(),
            ).unwrap();
            for x in a.iter() {
                let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                prop_assert!(crate::polytope::in_convex_hull(&xb, kp.vertices()));
            }
        }

        #[test]
        fn recursion_order_does_not_matter(p in arb_polytope()) {
            // reversing coordinates is unimodular; compare the sets after mapping back
            let d = p.ambient_dim();
            let rev: Vec<Vec<BigInt>> = p.vertices().iter().map(|v| v.iter().rev().cloned().collect()).collect();
            let q = Polytope::new(d, rev).unwrap();
            let a = enumerate_points(&p, 2).unwrap();
            let b = enumerate_points(&q, 2).unwrap();
            let back: Vec<Vec<i64>> = b.iter().map(|x| x.into_iter().rev().collect()).collect();
            prop_assert_eq!(PointSet::from_points(d, back).unwrap().to_vec(), a.to_vec());
        }

        #[test]
        fn sum_of_dilates_lies_in_the_larger_dilate(p in arb_polytope()) {
            let e = Enumerator::new(&p).unwrap();
            let one = e.enumerate(1).unwrap();
            let two = e.enumerate(2).unwrap();
            let three = e.enumerate(3).unwrap();
            for x in one.iter() {
                for y in two.iter() {
                    let s: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                    prop_assert!(three.contains(&s));
                }
            }
        }
    }
}
