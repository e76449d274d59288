use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense arbitrary-precision integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows<R, T>(cols: usize, rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut data = Vec::new();
        let mut n = 0;
        for row in rows {
            let before = data.len();
            data.extend(row.into_iter().map(Into::into));
            if data.len() - before != cols {
                return Err(Error::Dimension(format!(
                    "row {n} has {} entries, expected {cols}",
                    data.len() - before
                )));
            }
            n += 1;
        }
        Ok(IntMatrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().copied()))
            .expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += factor * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * factor;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += factor * col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * factor;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for x in self.row_mut(i) {
            *x = -std::mem::take(x);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det_bareiss(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = 1;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -det } else { det })
    }

    /// Rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> usize {
        rank_of_rows(self.to_rows(), self.cols)
    }

    /// Exact inverse over the rationals, or `None` when singular.
    pub fn rational_inverse(&self) -> Result<Option<Vec<Vec<BigRational>>>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = self
                    .row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
                return Ok(None);
            };
            a.swap(p, c);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = a[c].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != c && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (d, s) in row.iter_mut().zip(pivot_row.iter()) {
                        *d -= &f * s;
                    }
                }
            }
        }
        Ok(Some(a.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    /// Inverse of a unimodular matrix as an integer matrix.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let inv = self
            .rational_inverse()?
            .ok_or_else(|| Error::Integrity("matrix is singular".into()))?;
        let n = self.rows;
        let mut out = IntMatrix::zeros(n, n);
        for (i, row) in inv.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_integer() {
                    return Err(Error::Integrity("inverse is not integral".into()));
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Ok(out)
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().ok_or(Error::Overflow("matrix entry exceeds i64")))
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Divides a vector by the gcd of its entries. Zero vectors are left alone.
pub fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

pub fn rank_of_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for i in rank + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let piv = a[rank][c].clone();
            for j in c..cols {
                let v = &a[i][j] * &piv - &a[rank][j] * &f;
                a[i][j] = v;
            }
            let mut row = std::mem::take(&mut a[i]);
            make_primitive(&mut row);
            a[i] = row;
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Basis of the rational kernel `{x : m x = 0}`, scaled to primitive integer vectors.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.cols();
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let src = a[r].clone();
                for (d, s) in a[i].iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            rational_to_primitive(&v)
        })
        .collect()
}

/// Scales a rational vector by the lcm of denominators and makes it primitive.
pub fn rational_to_primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

/// Coefficients `mu` with `sum_j mu_j * vectors[j] = target`, for linearly
/// independent `vectors`. `None` when `target` is outside their span.
pub fn solve_combination(vectors: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = vectors.len();
    // one equation per coordinate; unknowns are the mu_j, last column is the target
    let mut a: Vec<Vec<BigRational>> = (0..target.len())
        .map(|i| {
            let mut row: Vec<BigRational> = vectors
                .iter()
                .map(|v| BigRational::from_integer(v[i].clone()))
                .collect();
            row.push(BigRational::from_integer(target[i].clone()));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..n {
        let p = (r..a.len()).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let src = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (d, s) in row.iter_mut().zip(&src) {
                    *d -= &f * s;
                }
            }
        }
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|j| a[j][n].clone()).collect())
}

pub(crate) fn abs_cmp(a: &BigInt, b: &BigInt) -> std::cmp::Ordering {
    a.abs().cmp(&b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_identity_and_diagonal() {
        assert_eq!(IntMatrix::identity(3).det_bareiss().unwrap(), BigInt::one());
        let d = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(d.det_bareiss().unwrap(), BigInt::from(6));
    }

    #[test]
    fn det_rejects_non_square() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(m.det_bareiss(), Err(Error::Dimension(_))));
    }

    #[test]
    fn det_needs_pivoting() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det_bareiss().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.unimodular_inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn kernel_of_row() {
        let m = IntMatrix::from_i64(&[&[1, 1, 1]]);
        let k = integer_kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
        }
    }

    proptest::proptest! {
        #[test]
        fn bareiss_matches_cofactor(n in 1usize..=5, seed in proptest::collection::vec(-6i64..=6, 25)) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
            let m = IntMatrix::from_rows(n, rows.iter().map(|r| r.iter().copied())).unwrap();
            proptest::prop_assert_eq!(m.det_bareiss().unwrap(), BigInt::from(cofactor_det(&rows)));
        }

        #[test]
        fn rank_equals_nonzero_det(seed in proptest::collection::vec(-2i64..=2, 9)) {
            let rows: Vec<Vec<i64>> = (0..3).map(|i| seed[i * 3..(i + 1) * 3].to_vec()).collect();
            let m = IntMatrix::from_rows(3, rows.iter().map(|r| r.iter().copied())).unwrap();
            let full = !m.det_bareiss().unwrap().is_zero();
            proptest::prop_assert_eq!(m.rank() == 3, full);
        }
    }
}
