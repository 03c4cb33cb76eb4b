use std::fmt;

use super::bits::{and_popcount, BitPlane};
use super::{check_block, check_nonempty, IntMatrix, MatrixError, Result, SignMatrix};

/// Dense 0/1 matrix stored as one bit plane; relation and adjacency carrier.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    bits: BitPlane,
    rows: usize,
    cols: usize,
}

impl BinMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        check_nonempty(rows, cols)?;
        let mut bits = BitPlane::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    bits.set(i, j, true);
                }
            }
        }
        Ok(BinMatrix { bits, rows, cols })
    }

    pub fn new(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(MatrixError::WrongLength { expected: rows * cols, got: entries.len() });
        }
        Self::from_int(&IntMatrix::new(rows, cols, entries.to_vec())?)
    }

    pub fn from_int(m: &IntMatrix) -> Result<Self> {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                if v != 0 && v != 1 {
                    return Err(MatrixError::InvalidEntry { row: i, col: j, value: v });
                }
            }
        }
        Self::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) == 1)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| true)
    }

    /// `J − I`.
    pub fn complement_of_identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i != j)
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits.get(i, j)
    }

    pub fn count_ones(&self) -> u64 {
        self.bits.count_ones()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.rows).map(|i| self.bits.row(i).iter().map(|w| w.count_ones() as u64).sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.bits == self.bits.transpose()
    }

    pub fn transpose(&self) -> BinMatrix {
        BinMatrix { bits: self.bits.transpose(), rows: self.cols, cols: self.rows }
    }

    /// `self · rhsᵗ` via row popcounts.
    pub fn mul_transposed(&self, rhs: &BinMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch {
                op: "mat_mul_transposed",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Vec::with_capacity(self.rows * rhs.rows);
        for i in 0..self.rows {
            let a = self.bits.row(i);
            for j in 0..rhs.rows {
                out.push(and_popcount(a, rhs.bits.row(j)) as i64);
            }
        }
        Ok(IntMatrix::from_raw(self.rows, rhs.rows, out))
    }

    pub fn mul(&self, rhs: &BinMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        self.mul_transposed(&rhs.transpose())
    }

    pub fn mul_naive(&self, rhs: &BinMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).filter(|&k| self.get(i, k) && rhs.get(k, j)).count() as i64
        })
    }

    pub fn kronecker(&self, rhs: &BinMatrix) -> BinMatrix {
        let (rows, cols) = (self.rows * rhs.rows, self.cols * rhs.cols);
        BinMatrix::from_fn(rows, cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) && rhs.get(i % rhs.rows, j % rhs.cols)
        })
        .expect("nonempty")
    }

    pub fn block(&self, block_rows: usize, block_cols: usize, i: usize, j: usize) -> Result<BinMatrix> {
        check_block(self.rows, self.cols, block_rows, block_cols, i, j)?;
        BinMatrix::from_fn(block_rows, block_cols, |r, c| self.get(i * block_rows + r, j * block_cols + c))
    }

    /// Entrywise OR; fails on shape mismatch.
    pub fn union(&self, rhs: &BinMatrix) -> Result<BinMatrix> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch { op: "union", left: self.shape(), right: rhs.shape() });
        }
        BinMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) || rhs.get(i, j))
    }

    pub fn is_disjoint(&self, rhs: &BinMatrix) -> bool {
        self.shape() == rhs.shape() && (0..self.rows).all(|i| and_popcount(self.bits.row(i), rhs.bits.row(i)) == 0)
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| i64::from(self.get(i, j))).expect("nonempty")
    }

    pub fn to_sign(&self) -> SignMatrix {
        SignMatrix::from_fn(self.rows, self.cols, |i, j| i64::from(self.get(i, j))).expect("nonempty")
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
