//! From a family of mutually unbiased regular Hadamard matrices to association
//! schemes, and back.
//!
//! [`gramian`] stacks `I, H_1/2n, …, H_m/2n` and keeps `B = 2n(M − I)` split
//! into its positive and negative parts. [`build_three_class`] and
//! [`build_five_class`] turn the bundle into relation maps and compare the
//! counted intersection numbers with their closed forms. [`extract_mubh`]
//! recovers the Hadamard family from a five-class scheme.

use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::hadamard::{self, HadamardError, HadamardMatrix, Unbiasedness};
use crate::matrix::{int, rat, IntMatrix, MatrixError, RatMatrix, Rational, SignMatrix};
use crate::scheme::{quotient_scheme, IntersectionTensor, RelationPartition, Scheme, SchemeError};
use crate::spectral::{self, Family, SpectralError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MubhSchemeError {
    #[error("need at least {min} matrices, got {got}")]
    TooFew { min: usize, got: usize },
    #[error("H_{index} has order {order}, expected {expected}")]
    OrderMismatch { index: usize, order: usize, expected: usize },
    #[error("H_{index} is not regular")]
    NotRegular { index: usize },
    #[error("H_{index} has row sum {sum}, expected {expected}")]
    WrongRegularSum { index: usize, sum: i64, expected: i64 },
    #[error("H_{a} and H_{b} are not unbiased: entry ({row}, {col}) of the product is {value}")]
    NotUnbiased { a: usize, b: usize, row: usize, col: usize, value: i64 },
    #[error("B has entry {value} at ({x}, {y})")]
    UnexpectedEntry { x: usize, y: usize, value: i64 },
    #[error("A_4 = B_1 - A_3 is negative at ({x}, {y}); the input is not of Bush type")]
    A4Negative { x: usize, y: usize },
    #[error(
        "{family}-class tensor differs from the closed form at p_{i}{j}^{k}: counted {counted}, formula {formula}"
    )]
    ClosedFormMismatch { family: usize, i: usize, j: usize, k: usize, counted: u64, formula: u64 },
    #[error("closed-form intersection numbers are not nonnegative integers at (n, m) = ({n}, {m})")]
    ClosedFormNotIntegral { n: usize, m: usize },
    #[error("matrix identity fails: {0}")]
    IdentityFailed(&'static str),
    #[error("extraction failed: {0}")]
    Extraction(String),
    #[error(transparent)]
    Hadamard(#[from] HadamardError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub type Result<T> = std::result::Result<T, MubhSchemeError>;

/// `B = 2n(M − I)` for the Gramian `M` of `I, H_1/2n, …, H_m/2n`, with
/// `B = B_1 − B_2` stored as two disjoint 0/1 matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramianBundle {
    pub n: usize,
    pub m: usize,
    pub hadamards: Vec<HadamardMatrix>,
    pub b: SignMatrix,
    pub b1: crate::matrix::BinMatrix,
    pub b2: crate::matrix::BinMatrix,
    /// Whether every input matrix is of Bush type.
    pub bush: bool,
}

impl GramianBundle {
    /// `(m + 1)·4n²`.
    pub fn size(&self) -> usize {
        (self.m + 1) * self.fiber_size()
    }

    /// `4n²`.
    pub fn fiber_size(&self) -> usize {
        4 * self.n * self.n
    }

    /// The Gramian `M = I + B/2n` as exact rationals.
    pub fn gramian_matrix(&self) -> RatMatrix {
        let scale = rat(1, 2 * self.n as i64);
        let size = self.size();
        RatMatrix::from_fn(size, size, |x, y| {
            let b = int(self.b.get(x, y)) * &scale;
            if x == y {
                b + int(1)
            } else {
                b
            }
        })
        .expect("size > 0")
    }
}

/// Gramian bundle of at least two matrices.
pub fn gramian(hadamards: &[HadamardMatrix], n: usize) -> Result<GramianBundle> {
    if hadamards.len() < 2 {
        return Err(MubhSchemeError::TooFew { min: 2, got: hadamards.len() });
    }
    gramian_relaxed(hadamards, n)
}

/// As [`gramian`] but accepts a single matrix.
pub fn gramian_relaxed(hadamards: &[HadamardMatrix], n: usize) -> Result<GramianBundle> {
    if hadamards.is_empty() || n == 0 {
        return Err(MubhSchemeError::TooFew { min: 1, got: hadamards.len() });
    }
    let m = hadamards.len();
    let q = 4 * n * n;
    let t = 2 * n as i64;
    let mut bush = true;
    for (idx, h) in hadamards.iter().enumerate() {
        let index = idx + 1;
        if h.order() != q {
            return Err(MubhSchemeError::OrderMismatch { index, order: h.order(), expected: q });
        }
        match hadamard::regular_sum(h) {
            None => return Err(MubhSchemeError::NotRegular { index }),
            Some(sum) if sum != t => return Err(MubhSchemeError::WrongRegularSum { index, sum, expected: t }),
            Some(_) => {}
        }
        bush &= hadamard::is_bush_type(h)?;
    }

    // blocks[k][l] is block (k, l) of B; index 0 stands for the identity.
    let mut blocks: Vec<Vec<Option<SignMatrix>>> = vec![vec![None; m + 1]; m + 1];
    for k in 1..=m {
        blocks[k][0] = Some(hadamards[k - 1].body().clone());
        blocks[0][k] = Some(hadamards[k - 1].body().transpose());
        for l in k + 1..=m {
            match hadamard::check_unbiased(&hadamards[k - 1], &hadamards[l - 1])? {
                Unbiasedness::Unbiased(w) => {
                    blocks[l][k] = Some(w.body().transpose());
                    blocks[k][l] = Some(w.into_body());
                }
                Unbiasedness::Biased { row, col, value, .. } => {
                    return Err(MubhSchemeError::NotUnbiased { a: k, b: l, row, col, value })
                }
            }
        }
    }
    let size = (m + 1) * q;
    let b =
        SignMatrix::from_fn(size, size, |x, y| blocks[x / q][y / q].as_ref().map_or(0, |blk| blk.get(x % q, y % q)))?;
    for x in 0..size {
        for y in 0..size {
            let v = b.get(x, y);
            let same = x / q == y / q;
            if (same && v != 0) || (!same && v == 0) || v != b.get(y, x) {
                return Err(MubhSchemeError::UnexpectedEntry { x, y, value: v });
            }
        }
    }
    let b1 = crate::matrix::BinMatrix::from_fn(size, size, |x, y| b.get(x, y) == 1)?;
    let b2 = crate::matrix::BinMatrix::from_fn(size, size, |x, y| b.get(x, y) == -1)?;
    Ok(GramianBundle { n, m, hadamards: hadamards.to_vec(), b, b1, b2, bush })
}

/// Tensor with `A_i A_j = Σ_k coeff(i, j)[k] A_k`, given for `1 ≤ i ≤ j`.
fn tensor_from_products(classes: usize, coeff: impl Fn(usize, usize) -> Vec<Rational>) -> Option<IntersectionTensor> {
    let w = classes + 1;
    let mut p = vec![0u64; w * w * w];
    for i in 0..w {
        for j in 0..w {
            let c = match (i, j) {
                (0, _) => (0..w).map(|k| int(i64::from(k == j))).collect(),
                (_, 0) => (0..w).map(|k| int(i64::from(k == i))).collect(),
                _ => coeff(i.min(j), i.max(j)),
            };
            for (k, v) in c.iter().enumerate() {
                if !v.is_integer() || v.is_negative() {
                    return None;
                }
                p[(i * w + j) * w + k] = v.to_integer().to_u64()?;
            }
        }
    }
    Some(IntersectionTensor::from_fn(classes, |i, j, k| p[(i * w + j) * w + k]))
}

fn coeffs(values: &[Rational]) -> Vec<Rational> {
    values.to_vec()
}

/// Closed-form intersection numbers of the three-class scheme `I, B_1, B_2, B_3`.
///
/// Each of the `m` other fibers contributes `n² ± n` common `B_1` (resp. `B_2`)
/// neighbours to a pair inside one fiber, so the `B_3` coefficient of `B_1²` is
/// `(n² + n)m` and that of `B_2²` is `(n² − n)m`.
pub fn three_class_closed_form(n: usize, m: usize) -> Option<IntersectionTensor> {
    let (nn, mm) = (int(n as i64), int(m as i64));
    let h = rat(1, 2);
    let one = int(1);
    let z = Rational::zero;
    let n2 = &nn * &nn;
    let m1 = &mm - &one;
    let two = int(2);
    let four = int(4);
    tensor_from_products(3, |i, j| match (i, j) {
        (1, 1) => coeffs(&[
            (&two * &n2 + &nn) * &mm,
            (&n2 + int(3) * &h * &nn) * &m1,
            (&n2 + &h * &nn) * &m1,
            (&n2 + &nn) * &mm,
        ]),
        (2, 2) => coeffs(&[
            (&two * &n2 - &nn) * &mm,
            (&n2 - &h * &nn) * &m1,
            (&n2 - int(3) * &h * &nn) * &m1,
            (&n2 - &nn) * &mm,
        ]),
        (1, 2) => coeffs(&[z(), (&n2 - &h * &nn) * &m1, (&n2 + &h * &nn) * &m1, &n2 * &mm]),
        (1, 3) => coeffs(&[z(), &two * &n2 + &nn - &one, &two * &n2 + &nn, z()]),
        (2, 3) => coeffs(&[z(), &two * &n2 - &nn, &two * &n2 - &nn - &one, z()]),
        // B_3 = I ⊗ J − I, so B_3² = (4n² − 1)I + (4n² − 2)B_3.
        (3, 3) => coeffs(&[&four * &n2 - &one, z(), z(), &four * &n2 - &two]),
        _ => unreachable!(),
    })
}

/// Closed-form intersection numbers of the five-class scheme.
pub fn five_class_closed_form(n: usize, m: usize) -> Option<IntersectionTensor> {
    let (nn, mm) = (int(n as i64), int(m as i64));
    let h = rat(1, 2);
    let one = int(1);
    let two = int(2);
    let z = Rational::zero;
    let t = &two * &nn;
    let n2 = &nn * &nn;
    let m1 = &mm - &one;
    let half_a = (&n2 - &h * &nn) * &m1;
    let half_b = (&n2 - int(3) * &h * &nn) * &m1;
    tensor_from_products(5, |i, j| match (i, j) {
        (1, 1) => coeffs(&[&t - &one, &t - &two, z(), z(), z(), z()]),
        (1, 2) => coeffs(&[z(), z(), &t - &one, z(), z(), z()]),
        (1, 3) => coeffs(&[z(), z(), z(), &t - &one, z(), z()]),
        (1, 4) => coeffs(&[z(), z(), z(), z(), &nn - &one, nn.clone()]),
        (1, 5) => coeffs(&[z(), z(), z(), z(), nn.clone(), &nn - &one]),
        (2, 2) => coeffs(&[&t * (&t - &one), &t * (&t - &one), &t * (&t - &two), z(), z(), z()]),
        (2, 3) => coeffs(&[z(), z(), z(), z(), t.clone(), t.clone()]),
        (2, 4) | (2, 5) => coeffs(&[z(), z(), z(), (&t - &one) * &nn, (&t - &two) * &nn, (&t - &two) * &nn]),
        (3, 3) => coeffs(&[&t * &mm, &t * &mm, z(), &t * &m1, z(), z()]),
        (3, 4) | (3, 5) => coeffs(&[z(), z(), &mm * &nn, z(), &m1 * &nn, &m1 * &nn]),
        (4, 5) => coeffs(&[z(), &n2 * &mm, &mm * (&n2 - &nn), half_a.clone(), half_b.clone(), half_a.clone()]),
        (4, 4) | (5, 5) => coeffs(&[
            (&two * &n2 - &nn) * &mm,
            (&n2 - &nn) * &mm,
            (&n2 - &nn) * &mm,
            half_a.clone(),
            half_a.clone(),
            half_b.clone(),
        ]),
        _ => unreachable!(),
    })
}

fn compare(family: usize, counted: &IntersectionTensor, formula: &IntersectionTensor) -> Result<()> {
    match counted.first_difference(formula) {
        None => Ok(()),
        Some((i, j, k, c, f)) => Err(MubhSchemeError::ClosedFormMismatch { family, i, j, k, counted: c, formula: f }),
    }
}

/// `I, B_1, B_2, B_3` with `B_3 = I_{m+1} ⊗ J_{4n²} − I`.
pub fn build_three_class(bundle: &GramianBundle) -> Result<Scheme> {
    if bundle.m < 2 {
        return Err(MubhSchemeError::TooFew { min: 2, got: bundle.m });
    }
    let q = bundle.fiber_size();
    let rels = RelationPartition::from_fn(bundle.size(), 3, |x, y| {
        if x == y {
            0
        } else if x / q == y / q {
            3
        } else if bundle.b.get(x, y) == 1 {
            1
        } else {
            2
        }
    })?;
    let scheme = Scheme::new(rels)?;
    let formula = three_class_closed_form(bundle.n, bundle.m)
        .ok_or(MubhSchemeError::ClosedFormNotIntegral { n: bundle.n, m: bundle.m })?;
    compare(3, scheme.tensor(), &formula)?;
    Ok(scheme)
}

/// The five-class scheme together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiveClassScheme {
    pub n: usize,
    pub m: usize,
    pub scheme: Scheme,
}

impl FiveClassScheme {
    pub fn rels(&self) -> &RelationPartition {
        self.scheme.rels()
    }

    pub fn tensor(&self) -> &IntersectionTensor {
        self.scheme.tensor()
    }
}

/// Class of `(x, y)` in the five-class scheme built from `B`.
///
/// Vertex `x` sits in fiber `x / 4n²`, block `(x mod 4n²) / 2n`.
fn five_class_relation(b: &SignMatrix, n: usize, x: usize, y: usize) -> Result<usize> {
    let q = 4 * n * n;
    let s = 2 * n;
    let same_fiber = x / q == y / q;
    let same_block = (x % q) / s == (y % q) / s;
    Ok(match (x == y, same_fiber, same_block, b.get(x, y)) {
        (true, ..) => 0,
        (_, true, true, _) => 1,
        (_, true, false, _) => 2,
        (_, false, true, 1) => 3,
        (_, false, false, 1) => 4,
        (_, false, true, -1) => return Err(MubhSchemeError::A4Negative { x, y }),
        (_, false, false, -1) => 5,
        (.., v) => return Err(MubhSchemeError::UnexpectedEntry { x, y, value: v }),
    })
}

/// `A_0, …, A_5`: identity, same block, same fiber, `A_3 = (J − I) ⊗ I ⊗ J`,
/// `A_4 = B_1 − A_3` and `A_5 = B_2`.
///
/// For `m ≥ 2` the counted tensor must match the closed forms; at `m = 1`
/// only the axioms are checked.
pub fn build_five_class(bundle: &GramianBundle) -> Result<FiveClassScheme> {
    let size = bundle.size();
    let mut relmap = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            relmap.push(five_class_relation(&bundle.b, bundle.n, x, y)? as u8);
        }
    }
    let scheme = Scheme::new(RelationPartition::new(size, 5, relmap)?)?;
    if bundle.m >= 2 {
        let formula = five_class_closed_form(bundle.n, bundle.m)
            .ok_or(MubhSchemeError::ClosedFormNotIntegral { n: bundle.n, m: bundle.m })?;
        compare(5, scheme.tensor(), &formula)?;
    }
    let five = FiveClassScheme { n: bundle.n, m: bundle.m, scheme };
    check_five_class_identities(five.rels())?;
    Ok(five)
}

/// `(A_4 + A_5)(A_4 − A_5) = 0` and `A_4² = A_5²` as matrices.
pub fn check_five_class_identities(rels: &RelationPartition) -> Result<()> {
    let size = rels.size();
    let sum = SignMatrix::from_fn(size, size, |x, y| i64::from(matches!(rels.get(x, y), 4 | 5)))?;
    let diff = SignMatrix::from_fn(size, size, |x, y| match rels.get(x, y) {
        4 => 1,
        5 => -1,
        _ => 0,
    })?;
    // diff is symmetric, so sum · diff = sum · diffᵗ.
    if sum.mul_transposed(&diff)?.entries().iter().any(|&v| v != 0) {
        return Err(MubhSchemeError::IdentityFailed("(A4 + A5)(A4 - A5) = 0"));
    }
    let a4 = rels.relation(4);
    let a5 = rels.relation(5);
    if a4.mul_transposed(&a4)? != a5.mul_transposed(&a5)? {
        return Err(MubhSchemeError::IdentityFailed("A4^2 = A5^2"));
    }
    Ok(())
}

/// Hadamard family recovered from a five-class scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction {
    pub hadamards: Vec<HadamardMatrix>,
    /// Vertex `a` of the normalized order is vertex `permutation[a]` of the input.
    pub permutation: Vec<usize>,
}

fn extraction(msg: impl Into<String>) -> MubhSchemeError {
    MubhSchemeError::Extraction(msg.into())
}

/// Fibers of `A_0 + A_1 + A_2` in order of least vertex; inside each fiber the
/// blocks of `A_0 + A_1`, with fiber 0 ordered by least vertex and every other
/// fiber ordered so that its `b`-th block is `A_3`-adjacent to block `b` of
/// fiber 0; vertices inside a block in increasing order.
fn normalize(scheme: &Scheme, n: usize, m: usize) -> Result<Vec<usize>> {
    let rels = scheme.rels();
    let fibers = quotient_scheme(scheme, &[0, 1, 2])?.fibers;
    let blocks = quotient_scheme(scheme, &[0, 1])?.fibers;
    if fibers.count() != m + 1 || fibers.fiber_size() != 4 * n * n {
        return Err(extraction(format!(
            "A0 + A1 + A2 has {} components of size {}, expected {} of size {}",
            fibers.count(),
            fibers.fiber_size(),
            m + 1,
            4 * n * n
        )));
    }
    if blocks.fiber_size() != 2 * n {
        return Err(extraction(format!("A0 + A1 has components of size {}, expected {}", blocks.fiber_size(), 2 * n)));
    }
    let blocks_in = |f: usize| -> Vec<usize> {
        (0..blocks.count()).filter(|&b| fibers.fiber_of(blocks.members(b)[0]) == f).collect()
    };
    let base = blocks_in(0);
    let mut perm = Vec::with_capacity(rels.size());
    for f in 0..fibers.count() {
        let own = blocks_in(f);
        for &b0 in &base {
            let block = if f == 0 {
                b0
            } else {
                let x = blocks.members(b0)[0];
                let y = fibers
                    .members(f)
                    .iter()
                    .copied()
                    .find(|&y| rels.get(x, y) == 3)
                    .ok_or_else(|| extraction(format!("vertex {x} has no A3-neighbour in fiber {f}")))?;
                let b = blocks.fiber_of(y);
                debug_assert!(own.contains(&b));
                b
            };
            perm.extend_from_slice(blocks.members(block));
        }
    }
    let mut seen = vec![false; rels.size()];
    if perm.len() != rels.size() || perm.iter().any(|&v| std::mem::replace(&mut seen[v], true)) {
        return Err(extraction("A3 does not match the blocks of distinct fibers one to one"));
    }
    Ok(perm)
}

/// Recovers `m` mutually unbiased Bush-type Hadamard matrices of order `4n²`.
///
/// The scheme is verified, its idempotents are certified against the
/// closed-form `Q`, and the vertices are normalized (see the permutation in
/// the result). Then `G = (m + 1)(E_0 + E_1 + E_2)` must be
/// `A_0 + (A_3 + A_4 − A_5)/2n`, and `H_k` is block `(k, 0)` of `2n·G`.
/// Each `H_k` is certified Hadamard from `Ḡ² = 2Ḡ` on fibers `{0, k}`, Bush
/// type from `(I ⊗ J) H_k = (I ⊗ J) H_kᵗ = 2n (I ⊗ J)`, and each pair
/// unbiased from `Ḡ² = 3Ḡ` on fibers `{0, k, k'}`.
pub fn extract_mubh(rels: &RelationPartition, n: usize, m: usize) -> Result<Extraction> {
    if rels.classes() != 5 {
        return Err(extraction(format!("expected a 5-class scheme, got {} classes", rels.classes())));
    }
    let q = 4 * n * n;
    if rels.size() != (m + 1) * q {
        return Err(extraction(format!("scheme has {} vertices, expected {}", rels.size(), (m + 1) * q)));
    }
    let scheme = Scheme::new(rels.clone())?;
    let table = spectral::closed_form_pq(n, m, Family::Class5)?;
    let eig = spectral::idempotents_from_q(&scheme, &table.q)?;

    let permutation = normalize(&scheme, n, m)?;
    let normal = rels.permuted(&permutation)?;
    let s = 2 * n;
    for x in 0..normal.size() {
        for y in 0..normal.size() {
            let (fx, fy) = (x / q, y / q);
            let (bx, by) = ((x % q) / s, (y % q) / s);
            let want: &[usize] = match (x == y, fx == fy, bx == by) {
                (true, ..) => &[0],
                (false, true, true) => &[1],
                (false, true, false) => &[2],
                (false, false, true) => &[3],
                (false, false, false) => &[4, 5],
            };
            if !want.contains(&normal.get(x, y)) {
                return Err(extraction(format!(
                    "after normalization ({x}, {y}) has class {}, expected one of {want:?}",
                    normal.get(x, y)
                )));
            }
        }
    }

    let mp1 = int(m as i64 + 1);
    let g: Vec<Rational> =
        (0..6).map(|l| (&eig.coefficients[0][l] + &eig.coefficients[1][l] + &eig.coefficients[2][l]) * &mp1).collect();
    let inv = rat(1, s as i64);
    let expected = [int(1), int(0), int(0), inv.clone(), inv.clone(), -inv];
    if g != expected {
        return Err(extraction(format!(
            "G = (m+1)(E0+E1+E2) has coefficients {:?}",
            g.iter().map(ToString::to_string).collect::<Vec<_>>()
        )));
    }
    // 2n·G, entry by entry.
    let scaled: Vec<i64> = g.iter().map(|c| (c * int(s as i64)).to_integer().to_i64().expect("small")).collect();
    let big = IntMatrix::from_fn(normal.size(), normal.size(), |x, y| scaled[normal.get(x, y)])?;
    let block = |k: usize, l: usize| -> Result<SignMatrix> { Ok(SignMatrix::from_int(&big.block(q, q, k, l)?)?) };

    let mut hadamards = Vec::with_capacity(m);
    for k in 1..=m {
        let sub = big.principal_submatrix(&fiber_indices(&[0, k], q))?;
        if sub.mul(&sub)? != sub.scalar_mul(2 * s as i64)? {
            return Err(extraction(format!("G^2 = 2G fails on fibers 0 and {k}")));
        }
        let hk = block(k, 0)?;
        if hk.transpose() != block(0, k)? {
            return Err(extraction(format!("block (0, {k}) is not the transpose of block ({k}, 0)")));
        }
        let h = HadamardMatrix::new(hk)?;
        let xj = SignMatrix::from_fn(q, q, |i, j| i64::from(i / s == j / s))?;
        let want = xj.to_int().scalar_mul(s as i64)?;
        if hadamard::block_sum_product(&h)? != want || hadamard::block_sum_product(&h.transpose())? != want {
            return Err(extraction(format!("(I x J) H_{k} differs from 2n (I x J)")));
        }
        if let Some(v) = hadamard::bush_violation(&h)? {
            return Err(extraction(format!("H_{k} is not of Bush type: {v}")));
        }
        hadamards.push(h);
    }
    for k in 1..=m {
        for l in k + 1..=m {
            let sub = big.principal_submatrix(&fiber_indices(&[0, k, l], q))?;
            if sub.mul(&sub)? != sub.scalar_mul(3 * s as i64)? {
                return Err(extraction(format!("G^2 = 3G fails on fibers 0, {k}, {l}")));
            }
            let hkl = block(k, l)?;
            let prod = hadamards[k - 1].body().mul_transposed(hadamards[l - 1].body())?;
            if prod != hkl.to_int().scalar_mul(s as i64)? {
                return Err(extraction(format!("H_{k} H_{l}^t differs from 2n times block ({k}, {l})")));
            }
            if hadamard::unbiased_witness(&hadamards[k - 1], &hadamards[l - 1])?.is_none() {
                return Err(extraction(format!("H_{k} and H_{l} are not unbiased")));
            }
        }
    }
    Ok(Extraction { hadamards, permutation })
}

fn fiber_indices(fibers: &[usize], q: usize) -> Vec<usize> {
    fibers.iter().flat_map(|&f| f * q..(f + 1) * q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::build_mubh;

    #[test]
    fn gramian_shapes() {
        let hs = build_mubh(2, 3).unwrap();
        let bundle = gramian(&hs, 2).unwrap();
        assert_eq!(bundle.size(), 64);
        assert!(bundle.bush);
        assert!(bundle.b1.is_disjoint(&bundle.b2));
        assert!(bundle.b1.row_sums().iter().all(|&s| s == 30));
        assert_eq!(bundle.b.block(16, 16, 0, 2).unwrap(), hs[1].body().transpose());
        assert!(matches!(gramian(&hs[..1], 2), Err(MubhSchemeError::TooFew { .. })));
    }

    #[test]
    fn gramian_diagonal_blocks_are_identity() {
        let bundle = gramian(&build_mubh(1, 1).unwrap(), 1);
        assert!(bundle.is_err());
        let bundle = gramian_relaxed(&build_mubh(1, 1).unwrap(), 1).unwrap();
        let mm = bundle.gramian_matrix();
        assert_eq!(mm.block(4, 4, 1, 1).unwrap(), RatMatrix::identity(4).unwrap());
    }

    #[test]
    fn closed_forms_are_integral_on_the_grid() {
        for (n, m) in [(1, 1), (2, 1), (2, 2), (2, 3), (4, 7)] {
            assert!(five_class_closed_form(n, m).is_some());
            assert!(three_class_closed_form(n, m).is_some());
        }
        assert!(five_class_closed_form(3, 2).is_none());
    }

    #[test]
    fn five_class_examples() {
        let bundle = gramian(&build_mubh(2, 3).unwrap(), 2).unwrap();
        let five = build_five_class(&bundle).unwrap();
        let t = five.tensor();
        assert_eq!(t.get(1, 1, 0), 3);
        assert_eq!(t.get(1, 2, 2), 3);
        assert_eq!(t.get(1, 4, 4), 1);
        assert_eq!(t.get(3, 3, 0), 12);
        assert_eq!(t.get(4, 5, 1), 12);
    }

    #[test]
    fn non_bush_input_is_caught() {
        // J - 2I is regular Hadamard with row sum 2 but has -1 on its diagonal blocks.
        let body = SignMatrix::from_fn(4, 4, |i, j| if i == j { -1 } else { 1 }).unwrap();
        let h2 = HadamardMatrix::new(body).unwrap();
        assert_eq!(hadamard::regular_sum(&h2), Some(2));
        assert!(!hadamard::is_bush_type(&h2).unwrap());
        let bundle = gramian_relaxed(&[h2], 1).unwrap();
        assert!(!bundle.bush);
        assert!(matches!(build_five_class(&bundle), Err(MubhSchemeError::A4Negative { .. })));
    }
}
