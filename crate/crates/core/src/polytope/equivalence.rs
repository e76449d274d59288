//! Affine unimodular equivalence of full-dimensional lattice polytopes.
//!
//! Cheap invariants are compared first. The search then fixes an affine basis
//! among the vertices of `p` and tries to send it to vertices of `q` with the
//! same signature (edge degree and sorted column of lattice distances to the
//! facets), pruning each new assignment against the earlier ones by
//! adjacency and the multiset of paired facet distances. A complete
//! assignment determines `U` and `t`, which are accepted only if integral,
//! unimodular and onto `q`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{AffineUnimodularMap, LatticePoint, Polytope};
use crate::error::{Error, Result};
use crate::lattice::Enumerator;
use crate::linalg::{rank_of_rows, IntMatrix};
use crate::triangulation::placing_volume;

/// Quantities preserved by every affine unimodular map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceInvariants {
    pub dim: usize,
    pub vertices: usize,
    pub lattice_points: usize,
    pub facets: usize,
    pub normalized_volume: BigInt,
    /// Sorted vertex degrees in the edge graph.
    pub degrees: Vec<usize>,
    /// Sorted per-vertex signatures: degree and sorted facet distances.
    pub signatures: Vec<(usize, Vec<BigInt>)>,
}

impl EquivalenceInvariants {
    /// First invariant on which `self` and `other` differ.
    pub fn mismatch(&self, other: &Self) -> Option<String> {
        let report = |name: &str, a: &dyn std::fmt::Debug, b: &dyn std::fmt::Debug| {
            Some(format!("{name} differ: {a:?} vs {b:?}"))
        };
        if self.dim != other.dim {
            return report("dimensions", &self.dim, &other.dim);
        }
        if self.vertices != other.vertices {
            return report("vertex counts", &self.vertices, &other.vertices);
        }
        if self.lattice_points != other.lattice_points {
            return report("lattice point counts", &self.lattice_points, &other.lattice_points);
        }
        if self.facets != other.facets {
            return report("facet counts", &self.facets, &other.facets);
        }
        if self.normalized_volume != other.normalized_volume {
            return report("normalized volumes", &self.normalized_volume, &other.normalized_volume);
        }
        if self.degrees != other.degrees {
            return report("vertex degrees", &self.degrees, &other.degrees);
        }
        if self.signatures != other.signatures {
            return Some("vertex-facet distance signatures differ".into());
        }
        None
    }
}

#[derive(Debug, Clone)]
pub enum Equivalence {
    Equivalent(AffineUnimodularMap),
    NotEquivalent(String),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn map(&self) -> Option<&AffineUnimodularMap> {
        match self {
            Equivalence::Equivalent(m) => Some(m),
            Equivalence::NotEquivalent(_) => None,
        }
    }
}

type PairKey = (bool, Vec<(BigInt, BigInt)>);

struct Profile {
    verts: Vec<LatticePoint>,
    slack: Vec<Vec<BigInt>>,
    adjacent: Vec<Vec<bool>>,
    signature: Vec<(usize, Vec<BigInt>)>,
    lattice_points: Vec<Vec<i64>>,
    invariants: EquivalenceInvariants,
}

impl Profile {
    fn new(p: &Polytope) -> Result<Self> {
        let verts = p.vertices().to_vec();
        let facets = p.facets()?;
        let m = verts.len();
        let slack: Vec<Vec<BigInt>> = verts.iter().map(|v| facets.iter().map(|h| h.slack(v)).collect()).collect();
        let tight: Vec<Vec<bool>> = slack.iter().map(|row| row.iter().map(Zero::is_zero).collect()).collect();
        let mut adjacent = vec![vec![false; m]; m];
        for u in 0..m {
            for v in u + 1..m {
                // the smallest face containing u and v has only those two vertices
                let common: Vec<usize> = (0..facets.len()).filter(|&f| tight[u][f] && tight[v][f]).collect();
                let edge = (0..m)
                    .filter(|&w| w != u && w != v)
                    .all(|w| common.iter().any(|&f| !tight[w][f]));
                adjacent[u][v] = edge;
                adjacent[v][u] = edge;
            }
        }
        let signature: Vec<(usize, Vec<BigInt>)> = (0..m)
            .map(|v| {
                let mut col = slack[v].clone();
                col.sort();
                (adjacent[v].iter().filter(|&&a| a).count(), col)
            })
            .collect();
        let lattice_points = Enumerator::new(p)?.enumerate(1)?.to_vec();
        let mut degrees: Vec<usize> = signature.iter().map(|s| s.0).collect();
        degrees.sort_unstable();
        let mut signatures = signature.clone();
        signatures.sort();
        let invariants = EquivalenceInvariants {
            dim: p.dim(),
            vertices: m,
            lattice_points: lattice_points.len(),
            facets: facets.len(),
            normalized_volume: placing_volume(p)?,
            degrees,
            signatures,
        };
        Ok(Profile {
            verts,
            slack,
            adjacent,
            signature,
            lattice_points,
            invariants,
        })
    }

    fn pair_key(&self, u: usize, v: usize) -> PairKey {
        let mut pairs: Vec<(BigInt, BigInt)> = self.slack[u]
            .iter()
            .zip(&self.slack[v])
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        pairs.sort();
        (self.adjacent[u][v], pairs)
    }
}

pub fn equivalence_invariants(p: &Polytope) -> Result<EquivalenceInvariants> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    Ok(Profile::new(p)?.invariants)
}

struct Search<'a> {
    p: &'a Profile,
    q: &'a Profile,
    basis: Vec<usize>,
    basis_inverse: Vec<Vec<BigRational>>,
    p_pairs: Vec<Vec<PairKey>>,
    q_pairs: Vec<Vec<PairKey>>,
    candidates: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn extend(&self, images: &mut Vec<usize>) -> Option<AffineUnimodularMap> {
        let i = images.len();
        if i == self.basis.len() {
            return self.solve(images);
        }
        for &c in &self.candidates[i] {
            if images.contains(&c) {
                continue;
            }
            if (0..i).any(|j| self.q_pairs[images[j]][c] != self.p_pairs[j][i]) {
                continue;
            }
            images.push(c);
            if let Some(m) = self.extend(images) {
                return Some(m);
            }
            images.pop();
        }
        None
    }

    /// `U` with `U (b_i - b_0) = (q_i - q_0)`, accepted if integral and onto `q`.
    fn solve(&self, images: &[usize]) -> Option<AffineUnimodularMap> {
        let d = self.basis.len() - 1;
        let p0 = &self.p.verts[self.basis[0]];
        let q0 = &self.q.verts[images[0]];
        // columns of Bq are q_i - q_0; U = Bq * Bp^{-1}
        let bq: Vec<Vec<BigInt>> = (1..=d)
            .map(|i| self.q.verts[images[i]].iter().zip(q0).map(|(a, b)| a - b).collect())
            .collect();
        let mut u = IntMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                let x: BigRational = (0..d)
                    .map(|k| BigRational::from_integer(bq[k][r].clone()) * &self.basis_inverse[k][c])
                    .sum();
                if !x.is_integer() {
                    return None;
                }
                u[(r, c)] = x.to_integer();
            }
        }
        if !u.det_bareiss().ok()?.abs().is_one() {
            return None;
        }
        let up0 = u.mul_vec(p0).ok()?;
        let t: Vec<BigInt> = q0.iter().zip(&up0).map(|(a, b)| a - b).collect();
        let map = AffineUnimodularMap { matrix: u, translation: t };
        let mut image: Vec<LatticePoint> = self.p.verts.iter().map(|v| map.apply(v)).collect();
        image.sort();
        (image == self.q.verts).then_some(map)
    }
}

/// Decides whether some `x -> U x + t` with `|det U| = 1` maps `p` onto `q`.
pub fn unimodular_equivalence(p: &Polytope, q: &Polytope) -> Result<Equivalence> {
    for (name, x) in [("first", p), ("second", q)] {
        if !x.is_full_dimensional() {
            return Ok(Equivalence::NotEquivalent(format!(
                "{name} polytope is not full-dimensional ({} in ambient {})",
                x.dim(),
                x.ambient_dim()
            )));
        }
    }
    if p.ambient_dim() != q.ambient_dim() {
        return Ok(Equivalence::NotEquivalent(format!(
            "dimensions differ: {} vs {}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    let (pp, qq) = rayon::join(|| Profile::new(p), || Profile::new(q));
    let (pp, qq) = (pp?, qq?);
    if let Some(reason) = pp.invariants.mismatch(&qq.invariants) {
        return Ok(Equivalence::NotEquivalent(reason));
    }
    let d = p.ambient_dim();
    if d == 0 {
        return Ok(Equivalence::Equivalent(AffineUnimodularMap::identity(0)));
    }

    // affine basis among p's vertices, rarest signatures first
    let mut freq: BTreeMap<&(usize, Vec<BigInt>), usize> = BTreeMap::new();
    for s in &qq.signature {
        *freq.entry(s).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..pp.verts.len()).collect();
    order.sort_by_key(|&v| (freq.get(&pp.signature[v]).copied().unwrap_or(0), v));
    let mut basis: Vec<usize> = Vec::with_capacity(d + 1);
    for v in order {
        let rows: Vec<Vec<BigInt>> = basis
            .iter()
            .chain(std::iter::once(&v))
            .map(|&b| {
                let mut h = vec![BigInt::one()];
                h.extend(pp.verts[b].iter().cloned());
                h
            })
            .collect();
        if rank_of_rows(rows, d + 1) == basis.len() + 1 {
            basis.push(v);
            if basis.len() == d + 1 {
                break;
            }
        }
    }
    let bp = IntMatrix::from_rows(
        d,
        (0..d).map(|r| {
            (1..=d)
                .map(|i| &pp.verts[basis[i]][r] - &pp.verts[basis[0]][r])
                .collect::<Vec<_>>()
        }),
    )?;
    let basis_inverse = bp
        .rational_inverse()?
        .ok_or_else(|| Error::Integrity("vertex basis is not affinely independent".into()))?;

    let m = qq.verts.len();
    let search = Search {
        p: &pp,
        q: &qq,
        p_pairs: basis.iter().map(|&a| basis.iter().map(|&b| pp.pair_key(a, b)).collect()).collect(),
        q_pairs: (0..m).map(|a| (0..m).map(|b| qq.pair_key(a, b)).collect()).collect(),
        candidates: basis
            .iter()
            .map(|&b| (0..m).filter(|&c| qq.signature[c] == pp.signature[b]).collect())
            .collect(),
        basis,
        basis_inverse,
    };
    let found = search.candidates[0]
        .par_iter()
        .find_map_first(|&c| search.extend(&mut vec![c]));
    let Some(map) = found else {
        return Ok(Equivalence::NotEquivalent("no vertex assignment extends to a unimodular map".into()));
    };

    // the map is onto the vertices; confirm the lattice points correspond as well
    let mut image: Vec<Vec<i64>> = pp
        .lattice_points
        .iter()
        .map(|x| {
            let xb: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
            super::point_to_i64(&map.apply(&xb))
        })
        .collect::<Result<_>>()?;
    image.sort();
    if image != qq.lattice_points {
        return Err(Error::Integrity("vertex bijection does not carry lattice points".into()));
    }
    Ok(Equivalence::Equivalent(map))
}
