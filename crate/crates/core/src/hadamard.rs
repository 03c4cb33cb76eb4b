//! Hadamard matrices: Sylvester construction, the regular / Bush-type /
//! unbiased predicates, and the Latin-square block construction of mutually
//! unbiased Bush-type families.

use thiserror::Error;

use crate::gfl::{self, GflError};
use crate::matrix::{IntMatrix, MatrixError, SignMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error("matrix is {0}x{1}, not square")]
    NotSquare(usize, usize),
    #[error("zero entry at ({row}, {col})")]
    ZeroEntry { row: usize, col: usize },
    #[error("rows {r1} and {r2} have inner product {dot}, expected {expected}")]
    RowsNotOrthogonal { r1: usize, r2: usize, dot: i64, expected: i64 },
    #[error("order {0} is not a perfect square")]
    NonSquareOrder(usize),
    #[error("order {0} is not of the form 4n^2")]
    NotBushOrder(usize),
    #[error("orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("pair is not unbiased: entry ({row}, {col}) of HK^t is {value}, expected ±{root}")]
    NotUnbiased { row: usize, col: usize, value: i64, root: i64 },
    #[error("2n = {0} is not a power of two")]
    BlockNotPowerOfTwo(usize),
    #[error("m = {m} outside 1..={max} (at most 2n-1 = {max} mutually unbiased Bush-type matrices of order 4n^2 exist for n = {n})")]
    CountOutOfRange { n: usize, m: usize, max: usize },
    #[error("n must be positive")]
    ZeroN,
    #[error("certification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] GflError),
}

pub type Result<T> = std::result::Result<T, HadamardError>;

/// ±1 matrix `H` of order `N` with `H·Hᵗ = N·I`, checked at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    body: SignMatrix,
}

impl HadamardMatrix {
    pub fn new(body: SignMatrix) -> Result<Self> {
        let (rows, cols) = body.shape();
        if rows != cols {
            return Err(HadamardError::NotSquare(rows, cols));
        }
        if !body.is_full() {
            let (row, col) = (0..rows)
                .flat_map(|i| (0..cols).map(move |j| (i, j)))
                .find(|&(i, j)| body.get(i, j) == 0)
                .expect("a zero entry exists");
            return Err(HadamardError::ZeroEntry { row, col });
        }
        let gram = body.mul_transposed(&body)?;
        let order = rows as i64;
        for i in 0..rows {
            for j in 0..rows {
                let expected = if i == j { order } else { 0 };
                if gram.get(i, j) != expected {
                    return Err(HadamardError::RowsNotOrthogonal { r1: i, r2: j, dot: gram.get(i, j), expected });
                }
            }
        }
        Ok(HadamardMatrix { body })
    }

    pub fn order(&self) -> usize {
        self.body.rows()
    }

    pub fn body(&self) -> &SignMatrix {
        &self.body
    }

    pub fn into_body(self) -> SignMatrix {
        self.body
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.body.get(i, j)
    }

    pub fn transpose(&self) -> HadamardMatrix {
        HadamardMatrix { body: self.body.transpose() }
    }
}

impl std::fmt::Debug for HadamardMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Hadamard{:?}", self.body)
    }
}

/// Normalized Sylvester matrix of order `2^k`; row 0 is all ones.
pub fn sylvester(k: u32) -> HadamardMatrix {
    let order = 1usize << k;
    // H[i][j] = (-1)^{popcount(i & j)}
    let body = SignMatrix::from_fn(order, order, |i, j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
        .expect("order >= 1");
    HadamardMatrix { body }
}

/// Common row/column sum when all row and column sums agree.
pub fn regular_sum(h: &HadamardMatrix) -> Option<i64> {
    let rows = h.body.row_sums();
    let cols = h.body.col_sums();
    let s = rows[0];
    if rows.iter().chain(&cols).all(|&x| x == s) {
        debug_assert_eq!(s * s, h.order() as i64, "regular sum must be ±√N");
        Some(s)
    } else {
        None
    }
}

pub fn is_regular(h: &HadamardMatrix) -> bool {
    regular_sum(h).is_some()
}

pub fn isqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Block geometry of a Bush-type candidate: order `4n²`, blocks of side `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BushLayout {
    order: usize,
    block: usize,
}

impl BushLayout {
    pub fn from_order(order: usize) -> Result<Self> {
        let block = isqrt(order);
        if block * block != order {
            return Err(HadamardError::NonSquareOrder(order));
        }
        if block == 0 || !block.is_multiple_of(2) {
            return Err(HadamardError::NotBushOrder(order));
        }
        Ok(BushLayout { order, block })
    }

    pub fn for_n(n: usize) -> Self {
        BushLayout { order: 4 * n * n, block: 2 * n }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn n(&self) -> usize {
        self.block / 2
    }
}

/// First place where a matrix fails the Bush-type block conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BushViolation {
    DiagonalBlockEntry { block: usize, row: usize, col: usize },
    OffDiagonalRowSum { block_row: usize, block_col: usize, row: usize, sum: i64 },
    OffDiagonalColSum { block_row: usize, block_col: usize, col: usize, sum: i64 },
}

impl std::fmt::Display for BushViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BushViolation::DiagonalBlockEntry { block, row, col } => {
                write!(f, "diagonal block {block} is not all ones (entry ({row}, {col}) is -1)")
            }
            BushViolation::OffDiagonalRowSum { block_row, block_col, row, sum } => {
                write!(f, "block ({block_row}, {block_col}) row {row} sums to {sum}, expected 0")
            }
            BushViolation::OffDiagonalColSum { block_row, block_col, col, sum } => {
                write!(f, "block ({block_row}, {block_col}) column {col} sums to {sum}, expected 0")
            }
        }
    }
}

pub fn bush_violation(h: &HadamardMatrix) -> Result<Option<BushViolation>> {
    let layout = BushLayout::from_order(h.order())?;
    let b = layout.block();
    for bi in 0..b {
        for bj in 0..b {
            let blk = h.body.block(b, b, bi, bj)?;
            if bi == bj {
                for r in 0..b {
                    for c in 0..b {
                        if blk.get(r, c) != 1 {
                            return Ok(Some(BushViolation::DiagonalBlockEntry {
                                block: bi,
                                row: bi * b + r,
                                col: bj * b + c,
                            }));
                        }
                    }
                }
                continue;
            }
            if let Some((row, &sum)) = blk.row_sums().iter().enumerate().find(|(_, &s)| s != 0) {
                return Ok(Some(BushViolation::OffDiagonalRowSum {
                    block_row: bi,
                    block_col: bj,
                    row: bi * b + row,
                    sum,
                }));
            }
            if let Some((col, &sum)) = blk.col_sums().iter().enumerate().find(|(_, &s)| s != 0) {
                return Ok(Some(BushViolation::OffDiagonalColSum {
                    block_row: bi,
                    block_col: bj,
                    col: bj * b + col,
                    sum,
                }));
            }
        }
    }
    Ok(None)
}

/// `H_ii = J` and every off-diagonal block has zero row and column sums.
pub fn is_bush_type(h: &HadamardMatrix) -> Result<bool> {
    Ok(bush_violation(h)?.is_none())
}

/// Outcome of testing `HKᵗ = √N·L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unbiasedness {
    Unbiased(HadamardMatrix),
    Biased { row: usize, col: usize, value: i64, root: i64 },
}

pub fn check_unbiased(h: &HadamardMatrix, k: &HadamardMatrix) -> Result<Unbiasedness> {
    if h.order() != k.order() {
        return Err(HadamardError::OrderMismatch(h.order(), k.order()));
    }
    let n = h.order();
    let root = isqrt(n);
    if root * root != n {
        return Err(HadamardError::NonSquareOrder(n));
    }
    let root = root as i64;
    let product = h.body.mul_transposed(&k.body)?;
    for i in 0..n {
        for j in 0..n {
            let v = product.get(i, j);
            if v != root && v != -root {
                return Ok(Unbiasedness::Biased { row: i, col: j, value: v, root });
            }
        }
    }
    let l = SignMatrix::from_int(&product.exact_div(root).expect("entries are ±root"))?;
    // A ±1 matrix equal to HKᵗ/√N is automatically Hadamard; the constructor re-checks.
    Ok(Unbiasedness::Unbiased(HadamardMatrix::new(l)?))
}

/// The Hadamard `L` with `HKᵗ = √N·L`, if the pair is unbiased.
pub fn unbiased_witness(h: &HadamardMatrix, k: &HadamardMatrix) -> Result<Option<HadamardMatrix>> {
    Ok(match check_unbiased(h, k)? {
        Unbiasedness::Unbiased(l) => Some(l),
        Unbiasedness::Biased { .. } => None,
    })
}

/// Whether the unbiasedness witness of two Bush-type matrices is again Bush-type.
pub fn bush_product_check(h: &HadamardMatrix, k: &HadamardMatrix) -> Result<bool> {
    match check_unbiased(h, k)? {
        Unbiasedness::Unbiased(l) => is_bush_type(&l),
        Unbiasedness::Biased { row, col, value, root } => Err(HadamardError::NotUnbiased { row, col, value, root }),
    }
}

/// `m` mutually unbiased Bush-type Hadamard matrices of order `4n²`.
///
/// Block `(i, j)` of `H_t` is `c_sᵗ c_s` where `s = M_t(i, j)` is read from the
/// `t`-th constant-diagonal Latin square of side `2n` and `c_1, …, c_2n` are
/// the rows of the normalized Sylvester matrix of order `2n`. The family is
/// certified (Bush-type, regular, pairwise unbiased with Bush-type witnesses)
/// before it is returned.
pub fn build_mubh(n: usize, m: usize) -> Result<Vec<HadamardMatrix>> {
    if n == 0 {
        return Err(HadamardError::ZeroN);
    }
    let side = 2 * n;
    if !side.is_power_of_two() {
        return Err(HadamardError::BlockNotPowerOfTwo(side));
    }
    if m == 0 || m > side - 1 {
        return Err(HadamardError::CountOutOfRange { n, m, max: side - 1 });
    }
    let rows = sylvester(side.trailing_zeros());
    let squares = gfl::gen_msls(side)?;
    let order = side * side;

    let family = squares
        .iter()
        .take(m)
        .map(|square| {
            let body = SignMatrix::from_fn(order, order, |x, y| {
                let (bi, r) = (x / side, x % side);
                let (bj, c) = (y / side, y % side);
                let s = square.get(bi, bj) as usize - 1;
                rows.get(s, r) * rows.get(s, c)
            })?;
            HadamardMatrix::new(body)
        })
        .collect::<Result<Vec<_>>>()?;

    certify_family(&family)?;
    Ok(family)
}

/// Re-runs every family-level predicate; the error names the first failure.
pub fn certify_family(family: &[HadamardMatrix]) -> Result<()> {
    for (t, h) in family.iter().enumerate() {
        if let Some(v) = bush_violation(h)? {
            return Err(HadamardError::VerificationFailed(format!("H_{} is not Bush-type: {v}", t + 1)));
        }
        if regular_sum(h).is_none() {
            return Err(HadamardError::VerificationFailed(format!("H_{} is not regular", t + 1)));
        }
    }
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            match check_unbiased(&family[a], &family[b])? {
                Unbiasedness::Biased { row, col, value, .. } => {
                    return Err(HadamardError::VerificationFailed(format!(
                        "H_{} and H_{} are not unbiased: entry ({row}, {col}) of the product is {value}",
                        a + 1,
                        b + 1
                    )))
                }
                Unbiasedness::Unbiased(l) => {
                    if !is_bush_type(&l)? {
                        return Err(HadamardError::VerificationFailed(format!(
                            "witness of H_{} and H_{} is not Bush-type",
                            a + 1,
                            b + 1
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Every Bush-type Hadamard matrix of order 4, by scanning all 2^16 sign matrices.
pub fn enumerate_bush_order4() -> Vec<HadamardMatrix> {
    (0u32..1 << 16)
        .filter_map(|mask| {
            let body = SignMatrix::from_fn(4, 4, |i, j| if mask >> (4 * i + j) & 1 == 1 { -1 } else { 1 }).ok()?;
            let h = HadamardMatrix::new(body).ok()?;
            is_bush_type(&h).ok()?.then_some(h)
        })
        .collect()
}

/// `(I_{2n} ⊗ J_{2n})·H`, used by the block-sum form of the Bush condition.
pub fn block_sum_product(h: &HadamardMatrix) -> Result<IntMatrix> {
    let layout = BushLayout::from_order(h.order())?;
    let b = layout.block();
    let x = SignMatrix::from_fn(h.order(), h.order(), |i, j| i64::from(i / b == j / b))?;
    Ok(x.mul(&h.body)?)
}
