//! Exact rational linear programming.
//!
//! Problems are stated over free variables as `max/min c·x` subject to
//! `A x <= b`. The solver is a dense two-phase tableau simplex using Bland's
//! rule, so it terminates on degenerate problems and is reproducible.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RatVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    c: Vec<BigRational>,
    sense: Sense,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, witness: RatVector },
    Infeasible,
    /// `ray` satisfies `A r <= 0` and strictly improves the objective.
    Unbounded { ray: RatVector },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LpProblem {
    pub fn new(
        a: Vec<Vec<BigRational>>,
        b: Vec<BigRational>,
        c: Vec<BigRational>,
        sense: Sense,
    ) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!(
                "{} constraint rows but {} right-hand sides",
                a.len(),
                b.len()
            )));
        }
        if let Some((i, row)) = a.iter().enumerate().find(|(_, r)| r.len() != c.len()) {
            return Err(Error::Dimension(format!(
                "constraint row {i} has {} coefficients, objective has {}",
                row.len(),
                c.len()
            )));
        }
        Ok(LpProblem { a, b, c, sense })
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_i64(a: &[&[i64]], b: &[i64], c: &[i64], sense: Sense) -> Result<Self> {
        let r = |x: &i64| BigRational::from_integer((*x).into());
        Self::new(
            a.iter().map(|row| row.iter().map(r).collect()).collect(),
            b.iter().map(r).collect(),
            c.iter().map(r).collect(),
            sense,
        )
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&[BigRational], &BigRational)> {
        self.a.iter().map(Vec::as_slice).zip(self.b.iter())
    }

    pub fn objective(&self) -> &[BigRational] {
        &self.c
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize, zrow: &mut [BigRational], zval: &mut BigRational) {
        let inv = self.rows[r][col].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (d, s) in self.rows[i].iter_mut().zip(prow.iter()) {
                if !s.is_zero() {
                    *d -= &f * s;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !zrow[col].is_zero() {
            let f = zrow[col].clone();
            for (d, s) in zrow.iter_mut().zip(prow.iter()) {
                if !s.is_zero() {
                    *d -= &f * s;
                }
            }
            *zval += &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Maximizes `obj` over the current basis, restricted to `cols` entering columns.
    /// Returns the final reduced-cost row and objective value.
    fn maximize(&mut self, obj: &[BigRational], cols: usize) -> (Phase, BigRational) {
        let mut zrow: Vec<BigRational> = obj.to_vec();
        let mut zval = BigRational::zero();
        for (i, &bcol) in self.basis.iter().enumerate() {
            let cb = &obj[bcol];
            if cb.is_zero() {
                continue;
            }
            for (z, t) in zrow.iter_mut().zip(self.rows[i].iter()) {
                *z -= cb * t;
            }
            zval += cb * &self.rhs[i];
        }
        loop {
            // Bland: lowest-index improving column
            let Some(enter) = (0..cols).find(|&j| zrow[j].is_positive()) else {
                return (Phase::Optimal, zval);
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let t = &self.rows[i][enter];
                if !t.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / t;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return (Phase::Unbounded(enter), zval),
                Some((r, _)) => self.pivot(r, enter, &mut zrow, &mut zval),
            }
        }
    }
}

/// Solves the problem exactly.
pub fn lp_solve(p: &LpProblem) -> LpOutcome {
    let n = p.c.len();
    let m = p.a.len();
    let structural = 2 * n + m;
    let needs_art: Vec<usize> = (0..m).filter(|&i| p.b[i].is_negative()).collect();
    let width = structural + needs_art.len();

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art_iter = 0;
    for i in 0..m {
        let neg = p.b[i].is_negative();
        let mut row = vec![BigRational::zero(); width];
        for j in 0..n {
            let v = if neg { -p.a[i][j].clone() } else { p.a[i][j].clone() };
            row[n + j] = -v.clone();
            row[j] = v;
        }
        row[2 * n + i] = if neg { -BigRational::one() } else { BigRational::one() };
        if neg {
            row[structural + art_iter] = BigRational::one();
            basis.push(structural + art_iter);
            art_iter += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
        rhs.push(p.b[i].abs());
    }
    let mut t = Tableau { rows, rhs, basis };

    if !needs_art.is_empty() {
        let mut obj = vec![BigRational::zero(); width];
        for x in obj[structural..].iter_mut() {
            *x = -BigRational::one();
        }
        let (_, val) = t.maximize(&obj, width);
        if val.is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive zero-level artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= structural {
                let col = (0..structural).find(|&j| !t.rows[i][j].is_zero());
                match col {
                    Some(j) => {
                        let mut dummy = vec![BigRational::zero(); width];
                        let mut dv = BigRational::zero();
                        t.pivot(i, j, &mut dummy, &mut dv);
                    }
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let sign = match p.sense {
        Sense::Maximize => BigRational::one(),
        Sense::Minimize => -BigRational::one(),
    };
    let mut obj = vec![BigRational::zero(); width];
    for j in 0..n {
        obj[j] = &sign * &p.c[j];
        obj[n + j] = -obj[j].clone();
    }
    let (phase, val) = t.maximize(&obj, structural);

    let mut full = vec![BigRational::zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        full[b] = t.rhs[i].clone();
    }
    match phase {
        Phase::Optimal => {
            let x = (0..n).map(|j| &full[j] - &full[n + j]).collect();
            LpOutcome::Optimal {
                value: &sign * val,
                witness: RatVector(x),
            }
        }
        Phase::Unbounded(enter) => {
            let mut dir = vec![BigRational::zero(); width];
            dir[enter] = BigRational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -t.rows[i][enter].clone();
            }
            let r = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
            LpOutcome::Unbounded { ray: RatVector(r) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    fn satisfies(p: &LpProblem, x: &[BigRational]) -> bool {
        p.constraints().all(|(row, b)| {
            let lhs: BigRational = row.iter().zip(x).map(|(a, v)| a * v).sum();
            lhs <= *b
        })
    }

    #[test]
    fn bounded_one_variable() {
        let p = LpProblem::from_i64(&[&[1], &[-1]], &[5, 0], &[1], Sense::Maximize).unwrap();
        match lp_solve(&p) {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, q(5));
                assert_eq!(witness.0, vec![q(5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let p = LpProblem::from_i64(&[&[1], &[-1]], &[5, -6], &[1], Sense::Maximize).unwrap();
        assert_eq!(lp_solve(&p), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_ray_is_certified() {
        let p = LpProblem::from_i64(&[&[-1, 0], &[0, -1], &[1, -1]], &[0, 0, 2], &[1, 1], Sense::Maximize)
            .unwrap();
        match lp_solve(&p) {
            LpOutcome::Unbounded { ray } => {
                for (row, _) in p.constraints() {
                    let v: BigRational = row.iter().zip(ray.iter()).map(|(a, r)| a * r).sum();
                    assert!(!v.is_positive());
                }
                let gain: BigRational = ray.iter().sum();
                assert!(gain.is_positive());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimize_sense() {
        // min x + y with x >= 1, y >= 2
        let p = LpProblem::from_i64(&[&[-1, 0], &[0, -1]], &[-1, -2], &[1, 1], Sense::Minimize).unwrap();
        match lp_solve(&p) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(LpProblem::from_i64(&[&[1, 2]], &[1], &[1], Sense::Maximize).is_err());
        assert!(LpProblem::from_i64(&[&[1]], &[1, 2], &[1], Sense::Maximize).is_err());
    }

    #[test]
    fn degenerate_equalities() {
        // x + y = 1 written twice, x,y >= 0, maximize x
        let p = LpProblem::from_i64(
            &[&[1, 1], &[-1, -1], &[1, 1], &[-1, -1], &[-1, 0], &[0, -1]],
            &[1, -1, 1, -1, 0, 0],
            &[1, 0],
            Sense::Maximize,
        )
        .unwrap();
        match lp_solve(&p) {
            LpOutcome::Optimal { value, witness } => {
                assert_eq!(value, q(1));
                assert!(satisfies(&p, &witness));
            }
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn witness_is_feasible_and_value_attainable(
            seed in prop::collection::vec(-4i64..=4, 12),
            rhs in prop::collection::vec(-3i64..=6, 4),
            obj in prop::collection::vec(-3i64..=3, 3),
        ) {
            // box constraints keep the problem bounded
            let mut a: Vec<Vec<i64>> = (0..4).map(|i| seed[i * 3..i * 3 + 3].to_vec()).collect();
            let mut b = rhs.clone();
            for j in 0..3 {
                let mut e = vec![0; 3];
                e[j] = 1;
                a.push(e.clone());
                b.push(5);
                e[j] = -1;
                a.push(e);
                b.push(5);
            }
            let rows: Vec<&[i64]> = a.iter().map(Vec::as_slice).collect();
            let p = LpProblem::from_i64(&rows, &b, &obj, Sense::Maximize).unwrap();
            if let LpOutcome::Optimal { value, witness } = lp_solve(&p) {
                prop_assert!(satisfies(&p, &witness));
                let v: BigRational = witness.iter().zip(p.objective()).map(|(x, c)| x * c).sum();
                prop_assert_eq!(v.clone(), value.clone());
                // adding c·x >= value keeps the problem feasible
                let mut a2 = a.clone();
                a2.push(obj.iter().map(|c| -c).collect());
                let mut b2: Vec<BigRational> = b.iter().map(|&x| q(x)).collect();
                b2.push(-value);
                let p2 = LpProblem::new(
                    a2.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
                    b2,
                    obj.iter().map(|&x| q(x)).collect(),
                    Sense::Maximize,
                ).unwrap();
                prop_assert!(lp_solve(&p2).is_feasible());
            }
        }
    }
}
