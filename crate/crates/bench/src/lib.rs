//! Fixtures shared by the benchmarks.

use num_bigint::BigInt;

use ehrhart_core::polytope::Polytope;

/// `[0, 1]^d`.
pub fn cube(d: usize) -> Polytope {
    let pts = (0..1u64 << d)
        .map(|m| (0..d).map(|i| BigInt::from((m >> i) & 1)).collect())
        .collect();
    Polytope::new(d, pts).expect("cube")
}

/// `conv(0, s e_1, ..., s e_d)`.
pub fn simplex(d: usize, s: i64) -> Polytope {
    let mut pts = vec![vec![BigInt::from(0); d]];
    for i in 0..d {
        let mut e = vec![BigInt::from(0); d];
        e[i] = BigInt::from(s);
        pts.push(e);
    }
    Polytope::new(d, pts).expect("simplex")
}
