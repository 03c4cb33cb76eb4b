use std::fmt;

use super::bits::BitPlane;
use super::{check_block, check_nonempty, IntMatrix, MatrixError, Result};

/// Dense matrix over {−1, 0, +1}, stored as two bit planes.
///
/// `nonzero` marks the support and `negative` marks −1 entries; `negative`
/// is always a subset of `nonzero`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    nonzero: BitPlane,
    negative: BitPlane,
    rows: usize,
    cols: usize,
}

impl SignMatrix {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Result<Self> {
        check_nonempty(rows, cols)?;
        let mut m =
            SignMatrix { nonzero: BitPlane::zeros(rows, cols), negative: BitPlane::zeros(rows, cols), rows, cols };
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                match v {
                    0 => {}
                    1 => m.nonzero.set(i, j, true),
                    -1 => {
                        m.nonzero.set(i, j, true);
                        m.negative.set(i, j, true);
                    }
                    _ => return Err(MatrixError::InvalidEntry { row: i, col: j, value: v }),
                }
            }
        }
        Ok(m)
    }

    /// Builds from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(MatrixError::WrongLength { expected: rows * cols, got: entries.len() });
        }
        Self::from_fn(rows, cols, |i, j| entries[i * cols + j])
    }

    pub fn from_int(m: &IntMatrix) -> Result<Self> {
        Self::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| 1)
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
        if !self.nonzero.get(i, j) {
            0
        } else if self.negative.get(i, j) {
            -1
        } else {
            1
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// True when no entry is zero.
    pub fn is_full(&self) -> bool {
        self.nonzero.count_ones() == (self.rows * self.cols) as u64
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> SignMatrix {
        SignMatrix {
            nonzero: self.nonzero.transpose(),
            negative: self.negative.transpose(),
            rows: self.cols,
            cols: self.rows,
        }
    }

    pub fn neg(&self) -> SignMatrix {
        SignMatrix::from_fn(self.rows, self.cols, |i, j| -self.get(i, j)).expect("negation stays in alphabet")
    }

    /// `self · rhsᵗ` through popcounts of the packed planes.
    pub fn mul_transposed(&self, rhs: &SignMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.cols {
            return Err(MatrixError::DimensionMismatch {
                op: "mat_mul_transposed",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Vec::with_capacity(self.rows * rhs.rows);
        for i in 0..self.rows {
            let (anz, aneg) = (self.nonzero.row(i), self.negative.row(i));
            for j in 0..rhs.rows {
                let (bnz, bneg) = (rhs.nonzero.row(j), rhs.negative.row(j));
                let mut support = 0i64;
                let mut flipped = 0i64;
                for w in 0..anz.len() {
                    let both = anz[w] & bnz[w];
                    support += both.count_ones() as i64;
                    flipped += (both & (aneg[w] ^ bneg[w])).count_ones() as i64;
                }
                out.push(support - 2 * flipped);
            }
        }
        Ok(IntMatrix::from_raw(self.rows, rhs.rows, out))
    }

    pub fn mul(&self, rhs: &SignMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        self.mul_transposed(&rhs.transpose())
    }

    /// Reference triple loop; the packed kernels are tested against it.
    pub fn mul_naive(&self, rhs: &SignMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }

    pub fn kronecker(&self, rhs: &SignMatrix) -> SignMatrix {
        let (rows, cols) = (self.rows * rhs.rows, self.cols * rhs.cols);
        SignMatrix::from_fn(rows, cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
        .expect("product of signs is a sign")
    }

    pub fn block(&self, block_rows: usize, block_cols: usize, i: usize, j: usize) -> Result<SignMatrix> {
        check_block(self.rows, self.cols, block_rows, block_cols, i, j)?;
        SignMatrix::from_fn(block_rows, block_cols, |r, c| self.get(i * block_rows + r, j * block_cols + c))
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j)).expect("nonempty")
    }

    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.rows)
            .map(|i| {
                let nz: i64 = self.nonzero.row(i).iter().map(|w| w.count_ones() as i64).sum();
                let neg: i64 = self.negative.row(i).iter().map(|w| w.count_ones() as i64).sum();
                nz - 2 * neg
            })
            .collect()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        self.transpose().row_sums()
    }

    /// Simultaneous row and column permutation: entry `(a, b)` of the result is
    /// entry `(perm[a], perm[b])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<SignMatrix> {
        SignMatrix::from_fn(perm.len(), perm.len(), |a, b| self.get(perm[a], perm[b]))
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|j| match self.get(i, j) {
                    1 => '+',
                    -1 => '-',
                    _ => '0',
                })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
