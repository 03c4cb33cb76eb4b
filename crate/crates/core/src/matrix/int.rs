use std::fmt;

use super::{check_block, check_nonempty, MatrixError, RatMatrix, Result};

/// Dense integer matrix; the landing type of every sign or 0/1 product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        check_nonempty(rows, cols)?;
        if data.len() != rows * cols {
            return Err(MatrixError::WrongLength { expected: rows * cols, got: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Result<Self> {
        check_nonempty(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| 0)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        IntMatrix::from_raw(self.cols, self.rows, data)
    }

    pub fn trace(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch { op: "trace", left: self.shape(), right: self.shape() });
        }
        (0..self.rows)
            .try_fold(0i64, |acc, i| acc.checked_add(self.get(i, i)).ok_or(MatrixError::Overflow { op: "trace" }))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        let overflow = MatrixError::Overflow { op: "mat_mul" };
        let mut out = vec![0i64; self.rows * rhs.cols];
        for i in 0..self.rows {
            let acc = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (dst, &b) in acc.iter_mut().zip(rhs.row(k)) {
                    let term = a.checked_mul(b).ok_or(overflow.clone())?;
                    *dst = dst.checked_add(term).ok_or(overflow.clone())?;
                }
            }
        }
        Ok(IntMatrix::from_raw(self.rows, rhs.cols, out))
    }

    fn zip_with(&self, rhs: &IntMatrix, op: &'static str, f: impl Fn(i64, i64) -> Option<i64>) -> Result<IntMatrix> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| f(a, b).ok_or(MatrixError::Overflow { op }))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, "add", i64::checked_add)
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, "sub", i64::checked_sub)
    }

    pub fn entrywise_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.zip_with(rhs, "entrywise_mul", i64::checked_mul)
    }

    pub fn scalar_mul(&self, k: i64) -> Result<IntMatrix> {
        let data = self
            .data
            .iter()
            .map(|&a| a.checked_mul(k).ok_or(MatrixError::Overflow { op: "scalar_mul" }))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntMatrix::from_raw(self.rows, self.cols, data))
    }

    /// Divides every entry by `k`, failing unless all divisions are exact.
    pub fn exact_div(&self, k: i64) -> Option<IntMatrix> {
        if k == 0 {
            return None;
        }
        let data = self.data.iter().map(|&a| (a % k == 0).then(|| a / k)).collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_raw(self.rows, self.cols, data))
    }

    pub fn kronecker(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let (ai, bi) = (i / rhs.rows, i % rhs.rows);
            for j in 0..cols {
                let (aj, bj) = (j / rhs.cols, j % rhs.cols);
                let v =
                    self.get(ai, aj).checked_mul(rhs.get(bi, bj)).ok_or(MatrixError::Overflow { op: "kronecker" })?;
                data.push(v);
            }
        }
        Ok(IntMatrix::from_raw(rows, cols, data))
    }

    pub fn block(&self, block_rows: usize, block_cols: usize, i: usize, j: usize) -> Result<IntMatrix> {
        check_block(self.rows, self.cols, block_rows, block_cols, i, j)?;
        Ok(IntMatrix::from_fn(block_rows, block_cols, |r, c| self.get(i * block_rows + r, j * block_cols + c))
            .expect("block dimensions are positive"))
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    /// Principal submatrix on the given index list (in the given order).
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<IntMatrix> {
        IntMatrix::from_fn(indices.len(), indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| super::rat::int(self.get(i, j)))
            .expect("shape already validated")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
