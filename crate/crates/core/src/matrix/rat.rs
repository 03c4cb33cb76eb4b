use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use super::{check_block, check_nonempty, MatrixError, Result};

/// Arbitrary-precision exact rational.
pub type Rational = BigRational;

/// Shorthand for `num / den` as an exact rational.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as an exact rational.
pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// Dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        check_nonempty(rows, cols)?;
        if data.len() != rows * cols {
            return Err(MatrixError::WrongLength { expected: rows * cols, got: data.len() });
        }
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Result<Self> {
        check_nonempty(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Ok(RatMatrix { rows, cols, data })
    }

    /// Integer table given as rows.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::WrongLength {
                expected: c,
                got: rows.iter().map(Vec::len).find(|&l| l != c).unwrap_or(0),
            });
        }
        Self::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
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
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).expect("nonempty")
    }

    pub fn trace(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(MatrixError::DimensionMismatch { op: "trace", left: self.shape(), right: self.shape() });
        }
        Ok((0..self.rows).fold(Rational::zero(), |acc, i| acc + self.get(i, i)))
    }

    pub fn mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch { op: "mat_mul", left: self.shape(), right: rhs.shape() });
        }
        let mut out = vec![Rational::zero(); self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        RatMatrix::new(self.rows, rhs.cols, out)
    }

    fn zip_with(
        &self,
        rhs: &RatMatrix,
        op: &'static str,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<RatMatrix> {
        if self.shape() != rhs.shape() {
            return Err(MatrixError::DimensionMismatch { op, left: self.shape(), right: rhs.shape() });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        RatMatrix::new(self.rows, self.cols, data)
    }

    /// Schur (entrywise) product.
    pub fn entrywise_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(rhs, "entrywise_mul", |a, b| a * b)
    }

    pub fn add(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn scalar_mul(&self, k: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn kronecker(&self, rhs: &RatMatrix) -> RatMatrix {
        let (rows, cols) = (self.rows * rhs.rows, self.cols * rhs.cols);
        RatMatrix::from_fn(rows, cols, |i, j| {
            self.get(i / rhs.rows, j / rhs.cols) * rhs.get(i % rhs.rows, j % rhs.cols)
        })
        .expect("nonempty")
    }

    pub fn block(&self, block_rows: usize, block_cols: usize, i: usize, j: usize) -> Result<RatMatrix> {
        check_block(self.rows, self.cols, block_rows, block_cols, i, j)?;
        RatMatrix::from_fn(block_rows, block_cols, |r, c| self.get(i * block_rows + r, j * block_cols + c).clone())
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<RatMatrix> {
        RatMatrix::from_fn(self.rows, perm.len(), |i, j| self.get(i, perm[j]).clone())
    }

    pub fn permute_rows(&self, perm: &[usize]) -> Result<RatMatrix> {
        RatMatrix::from_fn(perm.len(), self.cols, |i, j| self.get(perm[i], j).clone())
    }

    /// Renders every entry as an exact `num/den` (or integer) string.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{}", self.rows, self.cols)?;
        for row in self.to_strings() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
