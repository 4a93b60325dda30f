//! Dense integer matrices over arbitrary-precision integers: exact
//! determinants, leading principal minors, and Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &BigInt) {
        let cur = self.get(r, c).clone();
        self.set(r, c, cur + v);
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]).div_floor(&prev);
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Leading principal minors d_1, ..., d_n.
    pub fn leading_principal_minors(&self) -> Vec<BigInt> {
        assert_eq!(self.rows, self.cols);
        (1..=self.rows)
            .map(|k| {
                let mut sub = ZMatrix::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        sub.set(i, j, self.get(i, j).clone());
                    }
                }
                sub.det()
            })
            .collect()
    }

    /// True when the symmetric matrix is negative definite, decided by exact
    /// leading-minor signs: (-1)^k d_k > 0 for all k.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_principal_minors()
            .iter()
            .enumerate()
            .all(|(i, d)| if i % 2 == 0 { d.is_negative() } else { d.is_positive() })
    }

    /// Smith normal form invariant factors, nonnegative, each dividing the
    /// next, with trailing zeros for rank deficiency.
    pub fn smith_invariant_factors(&self) -> Vec<BigInt> {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let rows = self.rows;
        let cols = self.cols;
        let n = rows.min(cols);
        let mut factors: Vec<BigInt> = Vec::with_capacity(n);
        let mut top = 0usize;
        while top < n {
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(top) {
                for (j, v) in row.iter().enumerate().skip(top) {
                    if !v.is_zero() {
                        let better = match pivot {
                            None => true,
                            Some((pi, pj)) => v.abs() < a[pi][pj].abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break;
            };
            a.swap(top, pi);
            for row in a.iter_mut() {
                row.swap(top, pj);
            }
            // clear the pivot row and column; swaps bring smaller remainders
            // to the pivot until everything divides
            loop {
                let mut dirty = false;
                for i in top + 1..rows {
                    if !a[i][top].is_zero() {
                        let q = a[i][top].div_floor(&a[top][top]);
                        for j in top..cols {
                            let v = &a[i][j] - &q * &a[top][j];
                            a[i][j] = v;
                        }
                        if !a[i][top].is_zero() {
                            a.swap(top, i);
                            dirty = true;
                        }
                    }
                }
                for j in top + 1..cols {
                    if !a[top][j].is_zero() {
                        let q = a[top][j].div_floor(&a[top][top]);
                        for row in a.iter_mut().skip(top) {
                            let v = &row[j] - &q * &row[top];
                            row[j] = v;
                        }
                        if !a[top][j].is_zero() {
                            for row in a.iter_mut() {
                                row.swap(top, j);
                            }
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    break;
                }
            }
            // divisibility fix-up: fold a bad row into the pivot row and redo
            let mut adjusted = false;
            'outer: for i in top + 1..rows {
                for j in top + 1..cols {
                    if !(&a[i][j] % &a[top][top]).is_zero() {
                        for jj in top..cols {
                            let v = &a[top][jj] + &a[i][jj];
                            a[top][jj] = v;
                        }
                        adjusted = true;
                        break 'outer;
                    }
                }
            }
            if adjusted {
                continue;
            }
            factors.push(a[top][top].abs());
            top += 1;
        }
        while factors.len() < n {
            factors.push(BigInt::zero());
        }
        factors
    }
}

/// The tridiagonal matrix with diagonal `-w_i` and off-diagonal 1.
pub fn linear_chain_matrix(weights: &[BigInt]) -> ZMatrix {
    let n = weights.len();
    let mut m = ZMatrix::zeros(n, n);
    for (i, w) in weights.iter().enumerate() {
        m.set(i, i, -w.clone());
        if i + 1 < n {
            m.set(i, i + 1, BigInt::one());
            m.set(i + 1, i, BigInt::one());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = ZMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(m.det(), BigInt::from(3));
        let m = ZMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.det(), BigInt::zero());
        let m = ZMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.det(), BigInt::from(-1));
        assert_eq!(ZMatrix::identity(5).det(), BigInt::one());
    }

    #[test]
    fn det_matches_cofactor_small() {
        let rows = vec![vec![2, -1, 0], vec![-1, 3, -1], vec![0, -1, 4]];
        let m = ZMatrix::from_rows(&rows);
        let cof = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
        assert_eq!(m.det(), BigInt::from(cof));
    }

    #[test]
    fn snf_basics() {
        let m = ZMatrix::identity(2);
        assert_eq!(m.smith_invariant_factors(), vec![BigInt::one(), BigInt::one()]);
        let m = ZMatrix::from_rows(&[vec![2, 0], vec![0, 4]]);
        assert_eq!(
            m.smith_invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        // divisibility fix-up: diag(2, 3) ~ diag(1, 6)
        let m = ZMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(
            m.smith_invariant_factors(),
            vec![BigInt::one(), BigInt::from(6)]
        );
        let m = ZMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(
            m.smith_invariant_factors(),
            vec![BigInt::one(), BigInt::zero()]
        );
    }

    #[test]
    fn snf_divisibility_property() {
        let mats = [
            vec![vec![4, 6, 2], vec![6, 12, 3], vec![2, 3, 9]],
            vec![vec![0, 2, 3], vec![2, 0, 5], vec![3, 5, 0]],
            vec![vec![5, 0, 0], vec![0, 5, 0], vec![0, 0, 5]],
            vec![vec![-3, 1, 0], vec![1, -3, 1], vec![0, 1, -3]],
            vec![vec![6, 4], vec![4, 6]],
        ];
        for rows in &mats {
            let m = ZMatrix::from_rows(rows);
            let f = m.smith_invariant_factors();
            for w in f.windows(2) {
                if !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero(), "{f:?}");
                }
            }
            let prod: BigInt = f.iter().product();
            assert_eq!(prod, m.det().abs(), "{rows:?}");
        }
    }

    #[test]
    fn chain_matrix_shape() {
        let w: Vec<BigInt> = [2i64, 2, 4].iter().map(|&x| BigInt::from(x)).collect();
        let m = linear_chain_matrix(&w);
        assert!(m.is_symmetric());
        assert_eq!(m.det(), BigInt::from(-10));
        assert!(m.is_negative_definite());
    }
}
