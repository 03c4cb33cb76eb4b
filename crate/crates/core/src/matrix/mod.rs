//! Exact dense matrices over small integers and rationals.
//!
//! [`SignMatrix`] and [`BinMatrix`] are bit-packed and multiply through
//! popcounts; every product lands in an [`IntMatrix`] with checked `i64`
//! arithmetic. [`RatMatrix`] carries exact rationals for idempotents,
//! eigenmatrices and Krein tables. Kronecker products and block extraction
//! use one row-major block convention throughout: block `(i, j)` of
//! `a ⊗ b` is `a[i][j] · b`.

mod bin;
pub(crate) mod bits;
mod int;
mod rat;
mod sign;

pub use bin::BinMatrix;
pub use int::IntMatrix;
pub use rat::{int, rat, RatMatrix, Rational};
pub use sign::SignMatrix;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("entry {value} at ({row}, {col}) is outside the allowed alphabet")]
    InvalidEntry { row: usize, col: usize, value: i64 },
    #[error("{rows}x{cols} matrix does not split into {block_rows}x{block_cols} blocks at block ({i}, {j})")]
    MisalignedBlock { rows: usize, cols: usize, block_rows: usize, block_cols: usize, i: usize, j: usize },
    #[error("integer overflow in {op}")]
    Overflow { op: &'static str },
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, MatrixError>;

/// Matrix product within one matrix family, always returning exact integers.
pub trait MatMul {
    fn mat_mul(&self, rhs: &Self) -> Result<IntMatrix>;
}

impl MatMul for SignMatrix {
    fn mat_mul(&self, rhs: &Self) -> Result<IntMatrix> {
        self.mul(rhs)
    }
}

impl MatMul for BinMatrix {
    fn mat_mul(&self, rhs: &Self) -> Result<IntMatrix> {
        self.mul(rhs)
    }
}

impl MatMul for IntMatrix {
    fn mat_mul(&self, rhs: &Self) -> Result<IntMatrix> {
        self.mul(rhs)
    }
}

pub(crate) fn check_nonempty(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        Err(MatrixError::Empty { rows, cols })
    } else {
        Ok(())
    }
}

pub(crate) fn check_block(
    rows: usize,
    cols: usize,
    block_rows: usize,
    block_cols: usize,
    i: usize,
    j: usize,
) -> Result<()> {
    let ok = block_rows > 0
        && block_cols > 0
        && rows.is_multiple_of(block_rows)
        && cols.is_multiple_of(block_cols)
        && i < rows / block_rows
        && j < cols / block_cols;
    if ok {
        Ok(())
    } else {
        Err(MatrixError::MisalignedBlock { rows, cols, block_rows, block_cols, i, j })
    }
}
