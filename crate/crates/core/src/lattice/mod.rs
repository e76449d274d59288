//! Lattice points of dilates `kP` and Minkowski-sum coverage.
//!
//! Points inside this module are machine integers. Every arithmetic step on
//! them is checked, and an overflow surfaces as [`Error::Overflow`] rather
//! than a wrong answer.

mod enumerate;

use rayon::prelude::*;

pub use enumerate::{count_points, enumerate_points, BoundStrategy, Enumerator};

use crate::error::{Error, Result};

/// Fixed-width bit packing of points inside a bounding box. The first
/// coordinate occupies the most significant bits, so key order equals
/// lexicographic order of the points.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Packing {
    lo: Vec<i64>,
    hi: Vec<i64>,
    shifts: Vec<u32>,
}

impl Packing {
    fn for_box(lo: &[i64], hi: &[i64]) -> Option<Packing> {
        let mut widths = Vec::with_capacity(lo.len());
        for (l, h) in lo.iter().zip(hi) {
            let span = (*h as i128) - (*l as i128);
            if span < 0 {
                return None;
            }
            widths.push(128 - (span as u128).leading_zeros());
        }
        if widths.iter().sum::<u32>() > 128 {
            return None;
        }
        let mut shifts = vec![0; widths.len()];
        let mut acc = 0;
        for j in (0..widths.len()).rev() {
            shifts[j] = acc;
            acc += widths[j];
        }
        Some(Packing {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            shifts,
        })
    }

    fn encode(&self, x: &[i64]) -> Option<u128> {
        let mut key = 0u128;
        for j in 0..x.len() {
            if x[j] < self.lo[j] || x[j] > self.hi[j] {
                return None;
            }
            key |= ((x[j] as i128 - self.lo[j] as i128) as u128) << self.shifts[j];
        }
        Some(key)
    }

    fn decode(&self, key: u128, out: &mut [i64]) {
        for j in 0..out.len() {
            let width = if j == 0 {
                128 - self.shifts[0]
            } else {
                self.shifts[j - 1] - self.shifts[j]
            };
            let mask = if width == 0 {
                0
            } else if width >= 128 {
                u128::MAX
            } else {
                (1u128 << width) - 1
            };
            out[j] = self.lo[j] + ((key >> self.shifts[j]) & mask) as i64;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Packed { packing: Packing, keys: Vec<u128> },
    Wide(Vec<Vec<i64>>),
}

/// Immutable set of lattice points with logarithmic-time membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    repr: Repr,
}

impl PointSet {
    /// Builds a set from arbitrary points (duplicates removed).
    pub fn from_points(dim: usize, mut points: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension(format!(
                "point of length {} in a set of dimension {dim}",
                p.len()
            )));
        }
        let mut lo = vec![i64::MAX; dim];
        let mut hi = vec![i64::MIN; dim];
        for p in &points {
            for j in 0..dim {
                lo[j] = lo[j].min(p[j]);
                hi[j] = hi[j].max(p[j]);
            }
        }
        if points.is_empty() {
            lo.fill(0);
            hi.fill(0);
        }
        match Packing::for_box(&lo, &hi) {
            Some(packing) => {
                let mut keys: Vec<u128> = points
                    .iter()
                    .map(|p| packing.encode(p).expect("point inside its own bounding box"))
                    .collect();
                keys.sort_unstable();
                keys.dedup();
                Ok(PointSet {
                    dim,
                    repr: Repr::Packed { packing, keys },
                })
            }
            None => {
                points.sort();
                points.dedup();
                Ok(PointSet {
                    dim,
                    repr: Repr::Wide(points),
                })
            }
        }
    }

    fn from_sorted_keys(dim: usize, packing: Packing, keys: Vec<u128>) -> Self {
        debug_assert!(keys.windows(2).all(|w| w[0] < w[1]));
        PointSet {
            dim,
            repr: Repr::Packed { packing, keys },
        }
    }

    fn from_sorted_points(dim: usize, points: Vec<Vec<i64>>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet {
            dim,
            repr: Repr::Wide(points),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Packed { keys, .. } => keys.len(),
            Repr::Wide(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        match &self.repr {
            Repr::Packed { packing, keys } => packing
                .encode(x)
                .is_some_and(|k| keys.binary_search(&k).is_ok()),
            Repr::Wide(p) => p.binary_search_by(|q| q.as_slice().cmp(x)).is_ok(),
        }
    }

    /// Writes the `i`-th point (lexicographic order) into `out`.
    pub fn get_into(&self, i: usize, out: &mut [i64]) {
        match &self.repr {
            Repr::Packed { packing, keys } => packing.decode(keys[i], out),
            Repr::Wide(p) => out.copy_from_slice(&p[i]),
        }
    }

    pub fn get(&self, i: usize) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        self.get_into(i, &mut out);
        out
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<Vec<i64>> {
        self.iter().collect()
    }
}

/// Outcome of a Minkowski coverage test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coverage {
    Covered,
    /// The lexicographically first target point with no decomposition.
    Uncovered(Vec<i64>),
}

impl Coverage {
    pub fn is_covered(&self) -> bool {
        matches!(self, Coverage::Covered)
    }
}

/// Checks `target ⊆ a + b` by probing `z - x ∈ b` for every `z ∈ target`,
/// `x ∈ a`. The sumset is never materialized.
pub fn minkowski_covers(a: &PointSet, b: &PointSet, target: &PointSet) -> Result<Coverage> {
    if a.dim() != b.dim() || a.dim() != target.dim() {
        return Err(Error::Dimension(format!(
            "coverage test on dimensions {}, {}, {}",
            a.dim(),
            b.dim(),
            target.dim()
        )));
    }
    let dim = a.dim();
    let summands = a.to_vec();
    let uncovered = (0..target.len())
        .into_par_iter()
        .with_min_len(1024)
        .map_init(
            || (vec![0i64; dim], vec![0i64; dim]),
            |(z, diff), i| -> Result<Option<usize>> {
                target.get_into(i, z);
                for x in &summands {
                    for j in 0..dim {
                        diff[j] = z[j]
                            .checked_sub(x[j])
                            .ok_or(Error::Overflow("minkowski difference"))?;
                    }
                    if b.contains(diff) {
                        return Ok(None);
                    }
                }
                Ok(Some(i))
            },
        )
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match uncovered {
        None => Ok(Coverage::Covered),
        Some(Ok(Some(i))) => Ok(Coverage::Uncovered(target.get(i))),
        Some(Ok(None)) => unreachable!(),
        Some(Err(e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, pts: &[&[i64]]) -> PointSet {
        PointSet::from_points(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn packing_round_trips_and_orders() {
        let s = set(3, &[&[2, -1, 5], &[-3, 7, 0], &[2, -1, 4], &[2, -1, 5]]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_vec(), vec![vec![-3, 7, 0], vec![2, -1, 4], vec![2, -1, 5]]);
        assert!(s.contains(&[2, -1, 4]));
        assert!(!s.contains(&[2, -1, 6]));
        assert!(!s.contains(&[100, 0, 0]));
    }

    #[test]
    fn wide_fallback() {
        let s = set(3, &[&[i64::MIN, 0, 0], &[i64::MAX, 0, 0], &[0, i64::MAX, i64::MIN]]);
        assert!(matches!(s.repr, Repr::Wide(_)));
        assert!(s.contains(&[i64::MAX, 0, 0]));
        assert!(!s.contains(&[1, 0, 0]));
    }

    #[test]
    fn coverage_examples() {
        let z = set(1, &[&[0]]);
        assert_eq!(minkowski_covers(&z, &z, &z).unwrap(), Coverage::Covered);

        let a = set(1, &[&[0], &[1]]);
        let t = set(1, &[&[0], &[1], &[2]]);
        assert_eq!(minkowski_covers(&a, &a, &t).unwrap(), Coverage::Covered);

        let a = set(1, &[&[0], &[2]]);
        let t = set(1, &[&[0], &[1], &[2], &[4]]);
        assert_eq!(minkowski_covers(&a, &a, &t).unwrap(), Coverage::Uncovered(vec![1]));
    }

    #[test]
    fn coverage_dimension_mismatch() {
        let a = set(1, &[&[0]]);
        let b = set(2, &[&[0, 0]]);
        assert!(minkowski_covers(&a, &b, &a).is_err());
    }

    #[test]
    fn zero_dimensional_set() {
        let s = PointSet::from_points(0, vec![vec![], vec![]]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.contains(&[]));
    }
}
