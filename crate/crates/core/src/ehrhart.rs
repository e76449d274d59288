//! h*-vectors, Ehrhart polynomials and the sequence predicates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::Enumerator;
use crate::polytope::Polytope;

/// Coefficients `h*_0..h*_d` of the numerator of the Ehrhart series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HStarVector(Vec<BigInt>);

impl HStarVector {
    /// Validates `h*_0 = 1` and nonnegativity. A negative entry is never a
    /// legitimate h*-vector, so it is reported as an integrity failure.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.first().map_or(true, |h0| !h0.is_one()) {
            return Err(Error::Integrity(format!("h*_0 must be 1, got {coeffs:?}")));
        }
        if let Some(i) = coeffs.iter().position(|h| h.is_negative()) {
            return Err(Error::Integrity(format!("negative h*_{i} in {coeffs:?}")));
        }
        Ok(HStarVector(coeffs))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }
}

/// `E(t) = c_0 + c_1 t + ... + c_d t^d` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EhrhartPolynomial(Vec<BigRational>);

impl EhrhartPolynomial {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn evaluate(&self, t: &BigInt) -> BigRational {
        let t = BigRational::from_integer(t.clone());
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * &t + c)
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.0.iter().all(Signed::is_positive)
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `h*_i = sum_{j<=i} (-1)^j C(d+1, j) E(i-j)` from `counts = E(0..d)`.
pub fn hstar_from_counts(counts: &[BigInt]) -> Result<HStarVector> {
    if counts.is_empty() {
        return Err(Error::Empty("h* needs at least E(0)"));
    }
    if !counts[0].is_one() {
        return Err(Error::InvalidInput(format!("E(0) must be 1, got {}", counts[0])));
    }
    let d = counts.len() as u64 - 1;
    let h = (0..counts.len())
        .map(|i| {
            (0..=i)
                .map(|j| {
                    let term = binomial(d + 1, j as u64) * &counts[i - j];
                    if j % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum()
        })
        .collect();
    HStarVector::new(h)
}

/// `E(t) = sum_i h*_i C(t + d - i, d)` in the monomial basis.
pub fn ehrhart_from_hstar(h: &HStarVector) -> EhrhartPolynomial {
    let d = h.dim();
    let mut total = vec![BigRational::zero(); d + 1];
    let fact: BigInt = (1..=d as u64).map(BigInt::from).product();
    for (i, hi) in h.coeffs().iter().enumerate() {
        if hi.is_zero() {
            continue;
        }
        // C(t + m, d) = prod_{j=0}^{d-1} (t + m - j) / d!
        let m = (d - i) as i64;
        let mut poly = vec![BigRational::one()];
        for j in 0..d as i64 {
            let c = BigRational::from_integer(BigInt::from(m - j));
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (e, a) in poly.iter().enumerate() {
                next[e] += a * &c;
                next[e + 1] += a;
            }
            poly = next;
        }
        let scale = BigRational::new(hi.clone(), fact.clone());
        for (t, a) in total.iter_mut().zip(&poly) {
            *t += a * &scale;
        }
    }
    EhrhartPolynomial(total)
}

/// Weakly increasing up to some peak, weakly decreasing after it.
pub fn is_unimodal(v: &[BigInt]) -> bool {
    let mut i = 1;
    while i < v.len() && v[i - 1] <= v[i] {
        i += 1;
    }
    while i < v.len() && v[i - 1] >= v[i] {
        i += 1;
    }
    i >= v.len()
}

/// Interior indices `i` with `v_{i-1} v_{i+1} > v_i^2`.
pub fn log_concavity_violations(v: &[BigInt]) -> Vec<usize> {
    (1..v.len().saturating_sub(1))
        .filter(|&i| &v[i - 1] * &v[i + 1] > &v[i] * &v[i])
        .collect()
}

/// `v_{i-1} v_{i+1} <= v_i^2` at every interior index, zeros included.
pub fn is_log_concave(v: &[BigInt]) -> bool {
    log_concavity_violations(v).is_empty()
}

pub fn has_internal_zeros(v: &[BigInt]) -> bool {
    let first = v.iter().position(|x| !x.is_zero());
    let last = v.iter().rposition(|x| !x.is_zero());
    match (first, last) {
        (Some(a), Some(b)) => v[a..b].iter().any(Zero::is_zero),
        _ => false,
    }
}

pub fn normalized_volume(h: &HStarVector) -> BigInt {
    h.coeffs().iter().sum()
}

/// `E(0), ..., E(upto)` for any polytope, counted in its normalized lattice.
pub fn ehrhart_counts(p: &Polytope, upto: usize) -> Result<Vec<BigInt>> {
    let q = &p.normalized().0;
    let e = Enumerator::new(q)?;
    let mut counts = vec![BigInt::one()];
    for k in 1..=upto as u64 {
        counts.push(BigInt::from(e.count(k)?));
    }
    Ok(counts)
}

/// h*-vector at the polytope's own dimension, from lattice point counts.
pub fn hstar(p: &Polytope) -> Result<HStarVector> {
    hstar_from_counts(&ehrhart_counts(p, p.dim())?)
}

/// Lattice points in the relative interior of `p`.
pub fn interior_point_count(p: &Polytope) -> Result<u64> {
    let q = &p.normalized().0;
    if q.ambient_dim() == 0 {
        return Ok(1);
    }
    let facets = q.facets()?;
    let pts = Enumerator::new(q)?.enumerate(1)?;
    let mut n = 0;
    for x in pts.iter() {
        let x: Vec<BigInt> = x.into_iter().map(BigInt::from).collect();
        if facets.iter().all(|h| h.slack(&x).is_positive()) {
            n += 1;
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn simplex_counts_give_trivial_hstar() {
        for d in 0..=8u64 {
            let counts: Vec<BigInt> = (0..=d).map(|k| binomial(k + d, d)).collect();
            let mut expect = vec![0; d as usize + 1];
            expect[0] = 1;
            assert_eq!(hstar_from_counts(&counts).unwrap().coeffs(), v(&expect).as_slice());
        }
    }

    #[test]
    fn unit_square_counts() {
        assert_eq!(hstar_from_counts(&v(&[1, 4, 9])).unwrap().coeffs(), v(&[1, 1, 0]).as_slice());
    }

    #[test]
    fn invalid_counts() {
        assert!(matches!(hstar_from_counts(&v(&[2, 4])), Err(Error::InvalidInput(_))));
        // E(1) = 1 in dimension 1 would force h*_1 = -1
        assert!(matches!(hstar_from_counts(&v(&[1, 1])), Err(Error::Integrity(_))));
    }

    #[test]
    fn simplex_polynomial_is_binomial() {
        let h = HStarVector::from_i64(&[1, 0, 0]).unwrap();
        let e = ehrhart_from_hstar(&h);
        // C(t+2, 2) = 1 + 3t/2 + t^2/2
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(e.coeffs(), &[q(1, 1), q(3, 2), q(1, 2)]);
    }

    #[test]
    fn sequence_predicates() {
        let thm = v(&[1, 2, 3, 4, 5, 3, 2, 1]);
        assert!(is_unimodal(&thm));
        assert!(!is_log_concave(&thm));
        assert_eq!(log_concavity_violations(&thm), vec![5]);
        let padded = v(&[1, 2, 3, 4, 5, 3, 2, 1, 0, 0, 0, 0, 0]);
        assert!(!is_log_concave(&padded));
        assert_eq!(log_concavity_violations(&padded), vec![5]);
        assert!(!has_internal_zeros(&padded));
        assert!(!is_unimodal(&v(&[1, 3, 1, 3])));
        assert!(is_unimodal(&v(&[1, 1, 1])));
        assert!(is_log_concave(&v(&[1, 3, 3, 1])));
        assert!(has_internal_zeros(&v(&[1, 0, 1])));
        assert!(!has_internal_zeros(&v(&[1, 2, 0, 0])));
    }

    #[test]
    fn volumes() {
        assert_eq!(normalized_volume(&HStarVector::from_i64(&[1, 0, 0]).unwrap()), BigInt::one());
        let thm = HStarVector::from_i64(&[1, 2, 3, 4, 5, 3, 2, 1]).unwrap();
        assert_eq!(normalized_volume(&thm), BigInt::from(21));
    }

    #[test]
    fn polynomial_coefficients_of_the_bundled_vectors_are_positive() {
        let a = ehrhart_from_hstar(&HStarVector::from_i64(&[1, 2, 3, 4, 5, 3, 2, 1]).unwrap());
        assert_eq!(a.coeffs().len(), 8);
        assert!(a.all_coefficients_positive());
        let b = ehrhart_from_hstar(&HStarVector::from_i64(&[1, 2, 3, 4, 5, 3, 2, 1, 0, 0, 0, 0, 0]).unwrap());
        assert_eq!(b.coeffs().len(), 13);
        assert!(b.all_coefficients_positive());
        // E(1) = 13 + 2 and E(2) = 91 + 26 + 3
        assert_eq!(b.evaluate(&1.into()), BigRational::from_integer(15.into()));
        assert_eq!(b.evaluate(&2.into()), BigRational::from_integer(120.into()));
    }

    #[test]
    fn counts_from_polytopes() {
        let square = Polytope::from_i64(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(hstar(&square).unwrap().coeffs(), v(&[1, 1, 0]).as_slice());
        let point = Polytope::from_i64(&[&[3, 4]]).unwrap();
        assert_eq!(hstar(&point).unwrap().coeffs(), v(&[1]).as_slice());
        let seg = Polytope::from_i64(&[&[0, 0], &[2, 2]]).unwrap();
        assert_eq!(hstar(&seg).unwrap().coeffs(), v(&[1, 1]).as_slice());
        let big = Polytope::from_i64(&[&[0, 0], &[3, 0], &[0, 3]]).unwrap();
        assert_eq!(interior_point_count(&big).unwrap(), 1);
    }

    proptest! {
        #[test]
        fn round_trip_through_the_polynomial(tail in prop::collection::vec(0i64..20, 0..7)) {
            let mut c = vec![1];
            c.extend(tail);
            let h = HStarVector::from_i64(&c).unwrap();
            let e = ehrhart_from_hstar(&h);
            let counts: Vec<BigInt> = (0..=h.dim())
                .map(|k| {
                    let val = e.evaluate(&BigInt::from(k));
                    prop_assert!(val.is_integer());
                    Ok(val.to_integer())
                })
                .collect::<Result<_, TestCaseError>>()?;
            prop_assert_eq!(hstar_from_counts(&counts).unwrap(), h);
        }

        #[test]
        fn positive_log_concave_is_unimodal(x in prop::collection::vec(1i64..50, 0..9)) {
            let x = v(&x);
            if is_log_concave(&x) {
                prop_assert!(is_unimodal(&x));
            }
        }
    }
}
