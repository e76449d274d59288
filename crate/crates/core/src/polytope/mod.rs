//! Lattice polytopes: vertex/facet descriptions, dimension, lattice
//! normalization and unimodular equivalence.

mod equivalence;
mod hull;
mod normalize;

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use equivalence::{equivalence_invariants, unimodular_equivalence, Equivalence, EquivalenceInvariants};
pub use hull::hull_facets;
pub use normalize::{lattice_normalize, LatticeEmbedding};

use crate::error::{Error, Result};
use crate::linalg::{dot, lp_solve, rank_of_rows, IntMatrix, LpProblem, Sense};

/// A point of `Z^n`.
pub type LatticePoint = Vec<BigInt>;

pub fn lattice_point(coords: &[i64]) -> LatticePoint {
    coords.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn point_to_i64(p: &[BigInt]) -> Result<Vec<i64>> {
    p.iter()
        .map(|x| x.to_i64().ok_or(Error::Overflow("coordinate exceeds i64")))
        .collect()
}

/// The closed halfspace `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl HalfSpace {
    /// `offset - normal · x`; nonnegative iff `x` is inside. For a facet with
    /// primitive normal this is the lattice distance of a lattice point to the
    /// facet hyperplane.
    pub fn slack(&self, x: &[BigInt]) -> BigInt {
        &self.offset - dot(&self.normal, x)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        !self.slack(x).is_negative()
    }

    pub fn is_tight(&self, x: &[BigInt]) -> bool {
        self.slack(x).is_zero()
    }
}

/// Affine map `x -> U x + t` with `|det U| = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineUnimodularMap {
    pub matrix: IntMatrix,
    pub translation: Vec<BigInt>,
}

impl AffineUnimodularMap {
    pub fn new(matrix: IntMatrix, translation: Vec<BigInt>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != translation.len() {
            return Err(Error::Dimension(
                "unimodular map needs a square matrix matching the translation".into(),
            ));
        }
        if !matrix.det_bareiss()?.abs().is_one() {
            return Err(Error::InvalidInput("matrix is not unimodular".into()));
        }
        Ok(AffineUnimodularMap {
            matrix,
            translation,
        })
    }

    pub fn identity(d: usize) -> Self {
        AffineUnimodularMap {
            matrix: IntMatrix::identity(d),
            translation: vec![BigInt::zero(); d],
        }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, x: &[BigInt]) -> LatticePoint {
        (0..self.dim())
            .map(|i| dot(self.matrix.row(i), x) + &self.translation[i])
            .collect()
    }

    pub fn apply_polytope(&self, p: &Polytope) -> Result<Polytope> {
        if p.ambient_dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "map of dimension {} applied in ambient dimension {}",
                self.dim(),
                p.ambient_dim()
            )));
        }
        Polytope::new(
            self.dim(),
            p.generators().iter().map(|g| self.apply(g)).collect(),
        )
    }
}

#[derive(Default)]
struct Cache {
    vertices: OnceLock<Vec<LatticePoint>>,
    dim: OnceLock<usize>,
    facets: OnceLock<Vec<HalfSpace>>,
    normalized: OnceLock<(Polytope, LatticeEmbedding)>,
}

/// Convex hull of finitely many lattice points.
///
/// Derived data (vertices, dimension, facets, normalized image) is computed on
/// first use and shared between clones.
#[derive(Clone)]
pub struct Polytope {
    ambient_dim: usize,
    generators: Vec<LatticePoint>,
    cache: Arc<Cache>,
}

impl std::fmt::Debug for Polytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Polytope")
            .field("ambient_dim", &self.ambient_dim)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl Polytope {
    pub fn new(ambient_dim: usize, generators: Vec<LatticePoint>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Empty("polytope needs at least one point"));
        }
        if let Some(g) = generators.iter().find(|g| g.len() != ambient_dim) {
            return Err(Error::Dimension(format!(
                "point of length {} in ambient dimension {ambient_dim}",
                g.len()
            )));
        }
        Ok(Polytope {
            ambient_dim,
            generators,
            cache: Arc::default(),
        })
    }

    /// Convenience constructor from literal rows.
    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        let n = points.first().map_or(0, |p| p.len());
        Self::new(n, points.iter().map(|p| lattice_point(p)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[LatticePoint] {
        &self.generators
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[LatticePoint] {
        self.cache.vertices.get_or_init(|| {
            vertex_reduce(&self.generators).expect("generators validated on construction")
        })
    }

    pub fn dim(&self) -> usize {
        *self.cache.dim.get_or_init(|| {
            affine_dimension(&self.generators).expect("generators validated on construction")
        })
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Irredundant facet description; requires a full-dimensional polytope.
    pub fn facets(&self) -> Result<&[HalfSpace]> {
        if let Some(f) = self.cache.facets.get() {
            return Ok(f);
        }
        let f = facet_enumeration(self)?;
        Ok(self.cache.facets.get_or_init(|| f))
    }

    /// Full-dimensional image under the affine lattice isomorphism of `aff(P) ∩ Z^n`.
    pub fn normalized(&self) -> &(Polytope, LatticeEmbedding) {
        self.cache
            .normalized
            .get_or_init(|| lattice_normalize(self).expect("generators validated on construction"))
    }

    /// Membership of a point of `Z^n` (any dimension; uses LP when not full-dimensional).
    pub fn contains(&self, x: &[BigInt]) -> bool {
        if self.is_full_dimensional() {
            if let Ok(f) = self.facets() {
                return f.iter().all(|h| h.contains(x));
            }
        }
        in_convex_hull(x, self.vertices())
    }

    /// Lattice points of the polytope on its boundary or in its interior,
    /// relative to its facets. Requires full dimension.
    pub fn is_interior(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.facets()?.iter().all(|h| h.slack(x).is_positive()))
    }
}

/// Affine dimension: rank of the differences to the first point.
pub fn affine_dimension(points: &[LatticePoint]) -> Result<usize> {
    let first = points.first().ok_or(Error::Empty("affine dimension of no points"))?;
    let n = first.len();
    let diffs: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    Ok(rank_of_rows(diffs, n))
}

/// Decides `x ∈ conv(points)` by an exact feasibility LP.
pub fn in_convex_hull(x: &[BigInt], points: &[LatticePoint]) -> bool {
    if points.is_empty() {
        return false;
    }
    let m = points.len();
    let q = |v: &BigInt| BigRational::from_integer(v.clone());
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for j in 0..m {
        let mut row = vec![zero.clone(); m];
        row[j] = -one.clone();
        a.push(row);
        b.push(zero.clone());
    }
    a.push(vec![one.clone(); m]);
    b.push(one.clone());
    a.push(vec![-one.clone(); m]);
    b.push(-one.clone());
    for (i, xi) in x.iter().enumerate() {
        let row: Vec<BigRational> = points.iter().map(|p| q(&p[i])).collect();
        a.push(row.iter().map(|v| -v.clone()).collect());
        b.push(-q(xi));
        a.push(row);
        b.push(q(xi));
    }
    let lp = LpProblem::new(a, b, vec![zero; m], Sense::Maximize).expect("consistent LP");
    lp_solve(&lp).is_feasible()
}

/// The points that are vertices of their convex hull, deduplicated and sorted.
pub fn vertex_reduce(points: &[LatticePoint]) -> Result<Vec<LatticePoint>> {
    if points.is_empty() {
        return Err(Error::Empty("vertex reduction of no points"));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(pts);
    }
    let keep: Vec<bool> = (0..pts.len())
        .map(|i| {
            let others: Vec<LatticePoint> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            !in_convex_hull(&pts[i], &others)
        })
        .collect();
    Ok(pts
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect())
}

/// Facets of a full-dimensional polytope.
pub fn facet_enumeration(p: &Polytope) -> Result<Vec<HalfSpace>> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional {
            dim: p.dim(),
            ambient: p.ambient_dim(),
        });
    }
    hull_facets(p.vertices(), p.ambient_dim())
}
