use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;

use ehrhart_core::data::{self, THEOREM2_POINTS};
use ehrhart_core::linalg::IntMatrix;
use ehrhart_core::triangulation::{spanning_simplices, PointConfig};

/// Laplace expansion along the sparsest row, skipping zero entries.
fn laplace(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let r = (0..n).min_by_key(|&i| m[i].iter().filter(|&&x| x != 0).count()).unwrap();
    let mut det = 0;
    for c in 0..n {
        if m[r][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = (0..n)
            .filter(|&i| i != r)
            .map(|i| (0..n).filter(|&j| j != c).map(|j| m[i][j]).collect())
            .collect();
        let sign = if (r + c) % 2 == 0 { 1 } else { -1 };
        det += sign * m[r][c] * laplace(&minor);
    }
    det
}

fn homogenized(idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter().map(|&i| std::iter::once(1).chain(THEOREM2_POINTS[i]).collect()).collect()
}

#[test]
fn all_13_minors_match_cofactor_expansion() {
    let c = PointConfig::new(12, data::theorem2().generators().to_vec()).unwrap();
    let mut nonzero = 0;
    for idx in (0..15).combinations(13) {
        let rows = homogenized(&idx);
        let oracle = laplace(&rows);
        assert!(oracle.abs() <= 1, "{idx:?}");
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        assert_eq!(IntMatrix::from_i64(&refs).det_bareiss().unwrap(), BigInt::from(oracle));
        assert_eq!(c.det(&idx).abs(), BigInt::from(oracle.abs()));
        if oracle != 0 {
            nonzero += 1;
        }
    }
    let report = spanning_simplices(&c).unwrap();
    assert_eq!(report.subsets, 105);
    assert_eq!(report.spanning, nonzero);
    assert!(report.all_unimodular());
}

#[test]
fn full_configuration_has_rank_13() {
    let rows = homogenized(&(0..13).collect::<Vec<_>>());
    assert_eq!(laplace(&rows).abs(), 1);
}
