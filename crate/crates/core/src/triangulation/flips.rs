//! Bistellar flips and exhaustive enumeration for configurations of corank at
//! most two.
//!
//! Exhaustiveness relies on the flip graph being connected for corank <= 2
//! (every triangulation of at most `d + 3` points is regular, and the flip
//! graph of regular triangulations is the edge graph of the secondary
//! polytope; see De Loera, Rambau and Santos, *Triangulations*, 2010). No
//! proof of this is attempted here.

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{placing_triangulation, PointConfig, Triangulation};
use crate::error::{Error, Result};
use crate::linalg::{integer_kernel_basis, IntMatrix};

/// A minimal affine dependency `sum_{pos} l_i p_i = sum_{neg} l_i p_i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

impl Circuit {
    fn support(&self) -> Vec<usize> {
        self.pos.iter().chain(&self.neg).copied().sorted().collect()
    }

    /// The triangulation of `conv(Z)` using the cells `Z \ {z}` for `z` on one side.
    fn cells(&self, positive: bool) -> Vec<Vec<usize>> {
        let z = self.support();
        let side = if positive { &self.pos } else { &self.neg };
        side.iter()
            .map(|e| z.iter().copied().filter(|x| x != e).collect())
            .collect()
    }
}

/// Circuits of a configuration of corank at most two.
pub fn circuits(c: &PointConfig) -> Result<Vec<Circuit>> {
    let limit = c.dim() + 3;
    if c.len() > limit {
        return Err(Error::ConfigTooLarge { points: c.len(), limit });
    }
    // columns are the homogenized points, so the kernel holds the affine dependencies
    let m = IntMatrix::from_rows(
        c.len(),
        (0..=c.dim()).map(|r| (0..c.len()).map(|i| c.homogenized(i)[r].clone()).collect::<Vec<_>>()),
    )?;
    let kernel = integer_kernel_basis(&m);
    let mut candidates: Vec<Vec<BigInt>> = match kernel.len() {
        0 => Vec::new(),
        1 => kernel,
        _ => {
            let (a, b) = (&kernel[0], &kernel[1]);
            (0..c.len())
                .map(|i| a.iter().zip(b).map(|(x, y)| &b[i] * x - &a[i] * y).collect::<Vec<BigInt>>())
                .filter(|v| v.iter().any(|x| !x.is_zero()))
                .collect()
        }
    };
    let support = |v: &[BigInt]| -> BTreeSet<usize> { (0..v.len()).filter(|&i| !v[i].is_zero()).collect() };
    candidates.sort_by_key(|v| support(v).len());
    let mut kept: Vec<(BTreeSet<usize>, Circuit)> = Vec::new();
    for v in candidates {
        let s = support(&v);
        if kept.iter().any(|(t, _)| t.is_subset(&s)) {
            continue;
        }
        let pos = (0..v.len()).filter(|&i| v[i].is_positive()).collect();
        let neg = (0..v.len()).filter(|&i| v[i].is_negative()).collect();
        kept.push((s, Circuit { pos, neg }));
    }
    let mut out: Vec<Circuit> = kept.into_iter().map(|(_, z)| z).collect();
    out.sort();
    Ok(out)
}

/// The flip of `t` supported on `z` that replaces the `positive` side, if legal.
///
/// Legal means every cell of that side is a face of `t` and all of them have
/// the same link `L`; the flip then exchanges `T_side * L` for `T_other * L`.
fn flip(t: &Triangulation, z: &Circuit, positive: bool) -> Option<Triangulation> {
    let from = z.cells(positive);
    let to = z.cells(!positive);
    let mut link: Option<BTreeSet<Vec<usize>>> = None;
    let mut removed: BTreeSet<&Vec<usize>> = BTreeSet::new();
    for cell in &from {
        let mut l = BTreeSet::new();
        for s in t.simplices() {
            if cell.iter().all(|x| s.binary_search(x).is_ok()) {
                l.insert(s.iter().copied().filter(|x| cell.binary_search(x).is_err()).collect::<Vec<_>>());
                removed.insert(s);
            }
        }
        if l.is_empty() {
            return None;
        }
        match &link {
            Some(prev) if *prev != l => return None,
            None => link = Some(l),
            _ => {}
        }
    }
    let link = link?;
    let mut simplices: Vec<Vec<usize>> =
        t.simplices().iter().filter(|s| !removed.contains(s)).cloned().collect();
    for cell in &to {
        for l in &link {
            simplices.push(cell.iter().chain(l).copied().collect());
        }
    }
    Some(Triangulation::new(simplices))
}

/// All triangulations one legal flip away from `t`, each certified.
pub fn flip_neighbours(
    c: &PointConfig,
    t: &Triangulation,
    circuits: &[Circuit],
    volume: &BigInt,
) -> Result<Vec<Triangulation>> {
    let mut out = Vec::new();
    for z in circuits {
        for positive in [true, false] {
            if let Some(next) = flip(t, z, positive) {
                next.certify(c, volume)?;
                out.push(next);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Every triangulation reachable by flips from the lexicographic placing
/// triangulation. Only configurations of at most `d + 3` points are accepted.
pub fn enumerate_triangulations(c: &PointConfig) -> Result<Vec<Triangulation>> {
    let zs = circuits(c)?;
    let start = placing_triangulation(c, &(0..c.len()).collect::<Vec<_>>())?;
    let volume = start.normalized_volume(c);
    start.certify(c, &volume)?;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        for next in flip_neighbours(c, &t, &zs, &volume)? {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::super::tests::config;
    use super::*;

    #[test]
    fn simplex_has_one_triangulation() {
        let c = config(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(circuits(&c).unwrap().is_empty());
        assert_eq!(enumerate_triangulations(&c).unwrap().len(), 1);
    }

    #[test]
    fn square_has_two() {
        let c = config(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let zs = circuits(&c).unwrap();
        assert_eq!(zs.len(), 1);
        assert_eq!(enumerate_triangulations(&c).unwrap().len(), 2);
    }

    #[test]
    fn pentagon_has_catalan_many() {
        let c = config(&[&[0, 0], &[2, 0], &[3, 1], &[1, 3], &[0, 2]]);
        assert_eq!(circuits(&c).unwrap().len(), 5);
        assert_eq!(enumerate_triangulations(&c).unwrap().len(), 5);
    }

    #[test]
    fn segment_with_midpoint() {
        // the midpoint may or may not be used
        let c = config(&[&[0], &[1], &[2]]);
        let all = enumerate_triangulations(&c).unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn triangle_with_interior_point() {
        // corank 1: the stellar subdivision and the bare triangle
        let c = config(&[&[0, 0], &[3, 0], &[0, 3], &[1, 1]]);
        assert_eq!(enumerate_triangulations(&c).unwrap().len(), 2);
    }

    #[test]
    fn corank_two_with_coplanar_points() {
        // trapezoid with three collinear points on its base
        let c = config(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1], &[1, 1]]);
        let all = enumerate_triangulations(&c).unwrap();
        let vol = BigInt::from(3);
        let zs = circuits(&c).unwrap();
        for t in &all {
            t.certify(&c, &vol).unwrap();
            for n in flip_neighbours(&c, t, &zs, &vol).unwrap() {
                assert!(all.contains(&n));
            }
        }
        assert!(all.len() >= 3);
    }

    #[test]
    fn too_many_points() {
        let c = config(&[&[0], &[1], &[2], &[3], &[4]]);
        assert!(matches!(circuits(&c), Err(Error::ConfigTooLarge { points: 5, limit: 4 })));
    }
}
