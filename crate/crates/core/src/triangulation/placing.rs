use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{PointConfig, Triangulation};
use crate::error::{Error, Result};
use crate::linalg::solve_combination;
use crate::polytope::Polytope;

/// Barycentric coordinates of point `p` with respect to `simplex`, or `None`
/// when `p` is outside the affine hull of the simplex.
pub(crate) fn barycentric(c: &PointConfig, simplex: &[usize], p: usize) -> Option<Vec<num_rational::BigRational>> {
    let basis: Vec<Vec<BigInt>> = simplex.iter().map(|&i| c.homogenized(i)).collect();
    solve_combination(&basis, &c.homogenized(p))
}

/// Inserts the points in `order` one at a time. A point outside the current
/// affine hull is joined to every simplex; a point inside it is joined to the
/// boundary facets it sees; a point already covered is skipped.
pub fn placing_triangulation(c: &PointConfig, order: &[usize]) -> Result<Triangulation> {
    let mut seen = vec![false; c.len()];
    for &i in order {
        if i >= c.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidInput("placing order must be a permutation".into()));
        }
    }
    if order.len() != c.len() {
        return Err(Error::InvalidInput("placing order must be a permutation".into()));
    }
    let mut simplices: Vec<Vec<usize>> = vec![vec![order[0]]];
    for &p in &order[1..] {
        if barycentric(c, &simplices[0], p).is_none() {
            for s in simplices.iter_mut() {
                s.push(p);
            }
            continue;
        }
        let mut facets: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (si, s) in simplices.iter().enumerate() {
            for j in 0..s.len() {
                let mut f = s.clone();
                let opp = f.remove(j);
                f.sort_unstable();
                facets.entry(f).or_default().push((si, opp));
            }
        }
        let mut boundary: Vec<(Vec<usize>, usize, usize)> = facets
            .into_iter()
            .filter_map(|(f, owners)| (owners.len() == 1).then(|| (f, owners[0].0, owners[0].1)))
            .collect();
        boundary.sort();
        let mut added = Vec::new();
        for (f, si, opp) in boundary {
            let s = &simplices[si];
            let mu = barycentric(c, s, p).expect("same affine hull");
            let k = s.iter().position(|&x| x == opp).expect("opposite vertex in simplex");
            if mu[k].is_negative() {
                let mut t = f;
                t.push(p);
                added.push(t);
            }
        }
        simplices.extend(added);
    }
    if simplices[0].len() != c.dim() + 1 {
        return Err(Error::Integrity("placing did not reach full dimension".into()));
    }
    Ok(Triangulation::new(simplices))
}

/// Normalized volume of `p` as the sum over a placing triangulation of its vertices.
pub fn placing_volume(p: &Polytope) -> Result<BigInt> {
    let q = &p.normalized().0;
    if q.ambient_dim() == 0 {
        return Ok(BigInt::from(1));
    }
    let c = PointConfig::new(q.ambient_dim(), q.vertices().to_vec())?;
    let order: Vec<usize> = (0..c.len()).collect();
    Ok(placing_triangulation(&c, &order)?.normalized_volume(&c))
}

#[cfg(test)]
mod tests {
    use super::super::tests::config;
    use super::*;

    fn lex(c: &PointConfig) -> Vec<usize> {
        (0..c.len()).collect()
    }

    #[test]
    fn simplex_is_a_single_cell() {
        let c = config(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let t = placing_triangulation(&c, &lex(&c)).unwrap();
        assert_eq!(t.simplices(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn square_has_two_triangles() {
        let c = config(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let t = placing_triangulation(&c, &lex(&c)).unwrap();
        assert_eq!(t.len(), 2);
        t.certify(&c, &BigInt::from(2)).unwrap();
    }

    #[test]
    fn collinear_start_and_interior_points() {
        // first three points are collinear; the centre is covered before it is placed
        let c = config(&[&[0, 0], &[1, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1]]);
        let t = placing_triangulation(&c, &lex(&c)).unwrap();
        t.certify(&c, &BigInt::from(8)).unwrap();
        assert!(!t.used_points().contains(&5));
        let mut rev = lex(&c);
        rev.reverse();
        let t = placing_triangulation(&c, &rev).unwrap();
        t.certify(&c, &BigInt::from(8)).unwrap();
        assert!(t.used_points().contains(&5));
    }

    #[test]
    fn bad_order_is_rejected() {
        let c = config(&[&[0], &[1]]);
        assert!(placing_triangulation(&c, &[0, 0]).is_err());
        assert!(placing_triangulation(&c, &[0]).is_err());
    }

    #[test]
    fn cube_volume() {
        let p = Polytope::from_i64(&[
            &[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1],
        ])
        .unwrap();
        assert_eq!(placing_volume(&p).unwrap(), BigInt::from(6));
    }
}
