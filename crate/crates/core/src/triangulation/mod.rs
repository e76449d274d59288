//! Triangulations of lattice point configurations.
//!
//! Simplices are sorted index sets into a [`PointConfig`]. A triangulation is
//! accepted only after [`Triangulation::certify`]: every ridge lies in one
//! simplex (and then on the boundary of the hull) or in two simplices on
//! opposite sides of it, and the normalized volumes add up to that of the
//! hull.

mod flips;
mod halfopen;
mod placing;
mod properties;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub use flips::{circuits, enumerate_triangulations, flip_neighbours, Circuit};
pub use halfopen::hstar_halfopen;
pub use placing::{placing_triangulation, placing_volume};
pub use properties::{
    exists_quadratic_triangulation, is_flag, is_regular, triangulation_reports, QuadraticVerdict,
    TriangulationReport,
};

use crate::error::{Error, Result};
use crate::lattice::Enumerator;
use crate::linalg::{rank_of_rows, IntMatrix};
use crate::polytope::{hull_facets, HalfSpace, LatticePoint, Polytope};

/// Largest number of `(d+1)`-subsets the spanning-simplex check will visit.
pub const SPANNING_SUBSET_LIMIT: u64 = 20_000_000;

/// Distinct, affinely spanning points of `Z^d`.
#[derive(Debug)]
pub struct PointConfig {
    dim: usize,
    points: Vec<LatticePoint>,
    facets: OnceLock<Vec<HalfSpace>>,
}

impl Clone for PointConfig {
    fn clone(&self) -> Self {
        PointConfig {
            dim: self.dim,
            points: self.points.clone(),
            facets: OnceLock::new(),
        }
    }
}

impl PointConfig {
    pub fn new(dim: usize, points: Vec<LatticePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("point configuration"));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension(format!("point of length {} in dimension {dim}", p.len())));
        }
        if points.iter().sorted().dedup().count() != points.len() {
            return Err(Error::InvalidInput("configuration points must be distinct".into()));
        }
        let homog: Vec<Vec<BigInt>> = points.iter().map(|p| homogenize(p)).collect();
        let rank = rank_of_rows(homog, dim + 1);
        if rank != dim + 1 {
            return Err(Error::NotFullDimensional { dim: rank - 1, ambient: dim });
        }
        Ok(PointConfig {
            dim,
            points,
            facets: OnceLock::new(),
        })
    }

    /// Lattice points of `p` in its normalized coordinates, lexicographically.
    pub fn lattice_points(p: &Polytope) -> Result<Self> {
        let q = &p.normalized().0;
        let pts = Enumerator::new(q)?.enumerate(1)?;
        Self::new(
            q.ambient_dim(),
            pts.iter().map(|x| x.into_iter().map(BigInt::from).collect()).collect(),
        )
    }

    /// Vertices of `p` in its normalized coordinates, lexicographically.
    pub fn vertices(p: &Polytope) -> Result<Self> {
        let q = &p.normalized().0;
        Self::new(q.ambient_dim(), q.vertices().to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn corank(&self) -> usize {
        self.len() - self.dim - 1
    }

    pub fn homogenized(&self, i: usize) -> Vec<BigInt> {
        homogenize(&self.points[i])
    }

    /// Determinant of the homogenized rows in the given order.
    pub fn det(&self, idx: &[usize]) -> BigInt {
        let m = IntMatrix::from_rows(self.dim + 1, idx.iter().map(|&i| self.homogenized(i)))
            .expect("homogenized rows have d+1 entries");
        m.det_bareiss().expect("square by construction")
    }

    /// Facets of the convex hull of the configuration.
    pub fn facets(&self) -> &[HalfSpace] {
        self.facets
            .get_or_init(|| hull_facets(&self.points, self.dim).expect("configuration spans"))
    }

    fn on_common_facet(&self, idx: &[usize]) -> bool {
        self.facets()
            .iter()
            .any(|h| idx.iter().all(|&i| h.is_tight(&self.points[i])))
    }
}

fn homogenize(p: &[BigInt]) -> Vec<BigInt> {
    let mut h = Vec::with_capacity(p.len() + 1);
    h.push(BigInt::one());
    h.extend(p.iter().cloned());
    h
}

/// A set of full-dimensional simplices, each a sorted index set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    simplices: Vec<Vec<usize>>,
}

/// The simplices containing one ridge, with the vertex opposite to it.
pub type RidgeMap = BTreeMap<Vec<usize>, Vec<(usize, usize)>>;

impl Triangulation {
    /// Canonical form: each simplex sorted, the list sorted.
    pub fn new(simplices: Vec<Vec<usize>>) -> Self {
        let mut simplices: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        simplices.sort();
        simplices.dedup();
        Triangulation { simplices }
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Indices of configuration points used as vertices.
    pub fn used_points(&self) -> Vec<usize> {
        self.simplices.iter().flatten().copied().sorted().dedup().collect()
    }

    pub fn ridges(&self) -> RidgeMap {
        let mut map: RidgeMap = BTreeMap::new();
        for (si, s) in self.simplices.iter().enumerate() {
            for (j, &opp) in s.iter().enumerate() {
                let mut r = s.clone();
                r.remove(j);
                map.entry(r).or_default().push((si, opp));
            }
        }
        map
    }

    pub fn simplex_volumes(&self, c: &PointConfig) -> Vec<BigInt> {
        self.simplices.iter().map(|s| c.det(s).abs()).collect()
    }

    pub fn normalized_volume(&self, c: &PointConfig) -> BigInt {
        self.simplex_volumes(c).into_iter().sum()
    }

    pub fn is_unimodular(&self, c: &PointConfig) -> bool {
        self.simplices.iter().all(|s| c.det(s).abs().is_one())
    }

    /// Checks the triangulation certificate against the hull volume `volume`.
    pub fn certify(&self, c: &PointConfig, volume: &BigInt) -> Result<()> {
        let fail = |msg: String| Err(Error::Integrity(msg));
        for s in &self.simplices {
            if s.len() != c.dim() + 1 || s.iter().any(|&i| i >= c.len()) {
                return fail(format!("malformed simplex {s:?}"));
            }
            if c.det(s).is_zero() {
                return fail(format!("degenerate simplex {s:?}"));
            }
        }
        for (ridge, owners) in self.ridges() {
            match owners.as_slice() {
                [_] => {
                    if !c.on_common_facet(&ridge) {
                        return fail(format!("ridge {ridge:?} is free but not on the boundary"));
                    }
                }
                [(_, a), (_, b)] => {
                    let side = |x: usize| {
                        let mut idx = ridge.clone();
                        idx.push(x);
                        c.det(&idx).sign()
                    };
                    let (sa, sb) = (side(*a), side(*b));
                    if sa == Sign::NoSign || sa == sb {
                        return fail(format!("simplices at ridge {ridge:?} overlap"));
                    }
                }
                _ => return fail(format!("ridge {ridge:?} lies in {} simplices", owners.len())),
            }
        }
        let total = self.normalized_volume(c);
        if &total != volume {
            return fail(format!("simplex volumes sum to {total}, hull has {volume}"));
        }
        Ok(())
    }
}

/// Outcome of checking every spanning `(d+1)`-subset of lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningReport {
    pub subsets: u64,
    pub spanning: u64,
    /// Spanning subsets with `|det| > 1`.
    pub violations: Vec<Vec<usize>>,
}

impl SpanningReport {
    pub fn all_unimodular(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every `(d+1)`-subset of `c` with nonzero homogenized determinant must have
/// `|det| = 1`. Since every simplex of every triangulation with vertices in
/// `c` is such a subset, success certifies that all those triangulations are
/// unimodular.
pub fn spanning_simplices(c: &PointConfig) -> Result<SpanningReport> {
    let n = c.len() as u64;
    let k = c.dim() as u64 + 1;
    let total = crate::ehrhart::binomial(n, k);
    if total > BigInt::from(SPANNING_SUBSET_LIMIT) {
        return Err(Error::Budget(format!("{total} subsets exceed the limit {SPANNING_SUBSET_LIMIT}")));
    }
    let mut report = SpanningReport {
        subsets: 0,
        spanning: 0,
        violations: Vec::new(),
    };
    for idx in (0..c.len()).combinations(c.dim() + 1) {
        report.subsets += 1;
        let det = c.det(&idx);
        if det.is_zero() {
            continue;
        }
        report.spanning += 1;
        if !det.abs().is_one() {
            report.violations.push(idx);
        }
    }
    Ok(report)
}

pub fn all_spanning_simplices_unimodular(p: &Polytope) -> Result<SpanningReport> {
    spanning_simplices(&PointConfig::lattice_points(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::lattice_point;

    pub(crate) fn config(pts: &[&[i64]]) -> PointConfig {
        PointConfig::new(pts[0].len(), pts.iter().map(|p| lattice_point(p)).collect()).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(PointConfig::new(2, vec![lattice_point(&[0, 0]), lattice_point(&[1, 1])]).is_err());
        assert!(PointConfig::new(
            1,
            vec![lattice_point(&[0]), lattice_point(&[0]), lattice_point(&[1])]
        )
        .is_err());
    }

    #[test]
    fn square_spanning_simplices_are_unimodular() {
        let p = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let r = all_spanning_simplices_unimodular(&p).unwrap();
        assert_eq!((r.subsets, r.spanning), (4, 4));
        assert!(r.all_unimodular());
    }

    #[test]
    fn wide_triangle_has_a_violation() {
        // conv{0, 2e1, e2} also contains e1, so one of the spanning triangles has volume 2
        let p = Polytope::from_i64(&[&[0, 0], &[2, 0], &[0, 1]]).unwrap();
        let c = PointConfig::lattice_points(&p).unwrap();
        assert_eq!(c.len(), 4);
        let r = spanning_simplices(&c).unwrap();
        assert!(!r.all_unimodular());
        let bad: Vec<Vec<LatticePoint>> = r
            .violations
            .iter()
            .map(|s| s.iter().map(|&i| c.points()[i].clone()).collect())
            .collect();
        assert_eq!(
            bad,
            vec![vec![lattice_point(&[0, 0]), lattice_point(&[0, 1]), lattice_point(&[2, 0])]]
        );
    }

    #[test]
    fn certificate_rejects_overlaps_and_gaps() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let vol = BigInt::from(2);
        Triangulation::new(vec![vec![0, 1, 3], vec![0, 2, 3]]).certify(&c, &vol).unwrap();
        // both diagonals at once
        let bad = Triangulation::new(vec![vec![0, 1, 3], vec![0, 2, 3], vec![0, 1, 2]]);
        assert!(bad.certify(&c, &vol).is_err());
        // half the square
        let half = Triangulation::new(vec![vec![0, 1, 3]]);
        assert!(half.certify(&c, &vol).is_err());
    }
}
