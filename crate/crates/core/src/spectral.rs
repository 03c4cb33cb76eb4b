//! Eigenmatrices, primitive idempotents and Krein parameters.
//!
//! There is no eigensolver here. A candidate second eigenmatrix `Q` defines
//! `E_j = (1/|X|) Σ_l Q_lj A_l`, and [`idempotents_from_q`] certifies the
//! candidate through the intersection tensor of a verified scheme. Idempotents
//! are carried as coefficient vectors in the `A`-basis; [`idempotent_matrix`]
//! expands one into a dense matrix when needed.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::matrix::{int, rat, MatrixError, RatMatrix, Rational};
use crate::scheme::{RelationPartition, Scheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("parameters out of range: need n >= 1 and 1 <= m <= 2n-1, got n = {n}, m = {m}")]
    Parameters { n: i64, m: i64 },
    #[error("unknown scheme family {0:?} (expected 3, 5, 8 or fusion4)")]
    UnknownFamily(String),
    #[error("Q is {got:?}, expected {expected}x{expected}")]
    QShape { expected: usize, got: (usize, usize) },
    #[error("column 0 of Q does not give E_0 = J/|X| (coefficient of A_{0} is wrong)")]
    E0Mismatch(usize),
    #[error("E_{0} is not idempotent")]
    NotIdempotent(usize),
    #[error("E_{0} E_{1} is not zero")]
    NotOrthogonal(usize, usize),
    #[error("idempotents do not sum to I (coefficient of A_{0})")]
    SumNotIdentity(usize),
    #[error("E_{0} has zero trace")]
    ZeroMultiplicity(usize),
    #[error("A_{l} E_{i} is not a multiple of E_{i}")]
    NotEigen { i: usize, l: usize },
    #[error("{which} differs from |X| I at ({i}, {j})")]
    PqMismatch { which: &'static str, i: usize, j: usize },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Class3,
    Class5,
    Class8,
    Fusion4,
}

impl Family {
    pub fn classes(self) -> usize {
        match self {
            Family::Class3 => 3,
            Family::Class5 => 5,
            Family::Class8 => 8,
            Family::Fusion4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Class3 => "3",
            Family::Class5 => "5",
            Family::Class8 => "8",
            Family::Fusion4 => "fusion4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "3" | "class3" => Ok(Family::Class3),
            "5" | "class5" => Ok(Family::Class5),
            "8" | "class8" => Ok(Family::Class8),
            "4" | "fusion4" | "fusion" => Ok(Family::Fusion4),
            _ => Err(SpectralError::UnknownFamily(s.to_string())),
        }
    }
}

/// Parameterized eigenmatrices; `p` is absent where only `Q` is tabulated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub p: Option<RatMatrix>,
    pub q: RatMatrix,
}

fn table(rows: Vec<Vec<i64>>) -> RatMatrix {
    RatMatrix::from_int_rows(&rows).expect("tables are square and nonempty")
}

fn check_params(n: usize, m: usize) -> Result<(i64, i64)> {
    let (n, m) = (n as i64, m as i64);
    if n < 1 || m < 1 || m > 2 * n - 1 {
        return Err(SpectralError::Parameters { n, m });
    }
    Ok((n, m))
}

/// Exact `P` and `Q` for the given family at `(n, m)`.
pub fn closed_form_pq(n: usize, m: usize, family: Family) -> Result<ClosedForm> {
    let (n, m) = check_params(n, m)?;
    let t = 2 * n;
    let s = 2 * n - 1;
    Ok(match family {
        Family::Class5 => ClosedForm {
            p: Some(table(vec![
                vec![1, s, t * s, t * m, n * s * m, n * s * m],
                vec![1, -1, 0, 0, n * m, -n * m],
                vec![1, s, -t, t * m, -n * m, -n * m],
                vec![1, s, -t, -t, n, n],
                vec![1, -1, 0, 0, -n, n],
                vec![1, s, t * s, -t, -n * s, -n * s],
            ])),
            q: table(vec![
                vec![1, t * s, s, s * m, t * s * m, m],
                vec![1, -t, s, s * m, -t * m, m],
                vec![1, 0, -1, -m, 0, m],
                vec![1, 0, s, -s, 0, -1],
                vec![1, t, -1, 1, -t, -1],
                vec![1, -t, -1, 1, t, -1],
            ]),
        },
        Family::Class3 => {
            let v = 4 * n * n;
            ClosedForm {
                p: Some(table(vec![
                    vec![1, n * (t + 1) * m, n * s * m, v - 1],
                    vec![1, n * m, -n * m, -1],
                    vec![1, -n, n, -1],
                    vec![1, -n * (t + 1), -n * s, v - 1],
                ])),
                q: table(vec![
                    vec![1, v - 1, (v - 1) * m, m],
                    vec![1, s, -s, -1],
                    vec![1, -t - 1, t + 1, -1],
                    vec![1, -1, -m, m],
                ]),
            }
        }
        Family::Class8 => ClosedForm {
            p: None,
            q: table(vec![
                vec![1, t * s, t, s, t * s * (m + 1), s * m, t * m, t * s * m, m],
                vec![1, -t, t, s, -t * (m + 1), s * m, t * m, -t * m, m],
                vec![1, t, -t, s, -t * (m + 1), s * m, -t * m, t * m, m],
                vec![1, 0, 0, -1, 0, -m, 0, 0, m],
                vec![1, 0, t, s, 0, -s, -t, 0, -1],
                vec![1, 0, -t, s, 0, -s, t, 0, -1],
                vec![1, t, 0, -1, 0, 1, 0, -t, -1],
                vec![1, -t, 0, -1, 0, 1, 0, t, -1],
                vec![1, -t * s, -t, s, t * s * (m + 1), s * m, -t * m, -t * s * m, m],
            ]),
        },
        Family::Fusion4 => {
            let v = 4 * n * n;
            ClosedForm {
                p: None,
                q: table(vec![
                    vec![1, v, (v - 1) * (m + 1), v * m, m],
                    vec![1, 0, -m - 1, 0, m],
                    vec![1, t, 0, -t, -1],
                    vec![1, -t, 0, t, -1],
                    vec![1, -v, (v - 1) * (m + 1), -v * m, m],
                ]),
            }
        }
    })
}

/// The class-3 `Q` with the last column of rows 1 and 2 flipped to `+1`.
/// It is not an eigenmatrix; kept as a negative control.
pub fn class3_q_sign_variant(n: usize, m: usize) -> Result<RatMatrix> {
    let mut rows: Vec<Vec<Rational>> = {
        let q = closed_form_pq(n, m, Family::Class3)?.q;
        (0..4).map(|i| q.row(i).to_vec()).collect()
    };
    rows[1][3] = int(1);
    rows[2][3] = int(1);
    Ok(RatMatrix::new(4, 4, rows.concat())?)
}

/// The tabulated Krein matrix for a family, if one is tabulated, and the index
/// `i` of the `B_i*` it is expected to be under the natural idempotent order.
pub fn closed_form_krein(n: usize, m: usize, family: Family) -> Result<Option<(usize, RatMatrix)>> {
    let (n, m) = check_params(n, m)?;
    let d = family.classes();
    let anti = |d: usize| -> RatMatrix {
        // 1 on the anti-diagonal in the first rows, then m and m-1 in the
        // remaining rows; the middle row (odd d+1) has a single m.
        RatMatrix::from_fn(d + 1, d + 1, |j, k| {
            let half = d.div_ceil(2);
            if j < half {
                int(i64::from(k == d - j))
            } else if !(d + 1).is_multiple_of(2) && j == half {
                int(if k == j { m } else { 0 })
            } else if k == d - j {
                int(m)
            } else if k == j {
                int(m - 1)
            } else {
                int(0)
            }
        })
        .expect("d > 0")
    };
    Ok(match family {
        Family::Class5 => Some((5, anti(d))),
        Family::Class8 => Some((8, anti(d))),
        Family::Class3 => {
            let v = 4 * n * n;
            let r = |a: i64| rat(a, m + 1);
            let b = RatMatrix::new(
                4,
                4,
                vec![
                    int(0),
                    int(1),
                    int(0),
                    int(0),
                    int(v - 1),
                    r(2 * (2 * n * n - m - 1)),
                    r(v),
                    int(0),
                    int(0),
                    r(v * m),
                    r((v - 2) * m - 2),
                    int(v - 1),
                    int(0),
                    int(0),
                    int(1),
                    int(0),
                ],
            )?;
            Some((1, b))
        }
        Family::Fusion4 => None,
    })
}

/// Certified idempotents of a scheme.
///
/// `coefficients[j][l]` is the coefficient of `A_l` in `E_j`, i.e. `Q_lj / |X|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub size: usize,
    pub p: RatMatrix,
    pub q: RatMatrix,
    pub coefficients: Vec<Vec<Rational>>,
    pub multiplicities: Vec<Rational>,
    pub valencies: Vec<u64>,
}

impl EigenData {
    pub fn classes(&self) -> usize {
        self.coefficients.len() - 1
    }
}

fn unit(w: usize, l: usize) -> Vec<Rational> {
    (0..w).map(|i| if i == l { Rational::one() } else { Rational::zero() }).collect()
}

/// Builds `E_j` from `Q` and certifies that they are the primitive idempotents.
///
/// Checks, in order: `E_0 = J/|X|`, `E_j E_k = δ_jk E_j`, `Σ E_j = I`, that
/// each `A_l E_i` is a multiple `P_il E_i`, and `PQ = QP = |X| I`.
pub fn idempotents_from_q(scheme: &Scheme, q: &RatMatrix) -> Result<EigenData> {
    let d = scheme.classes();
    let w = d + 1;
    if q.shape() != (w, w) {
        return Err(SpectralError::QShape { expected: w, got: q.shape() });
    }
    let tensor = scheme.tensor();
    let size = int(scheme.size() as i64);
    let coefficients: Vec<Vec<Rational>> = (0..w).map(|j| (0..w).map(|l| q.get(l, j) / &size).collect()).collect();

    let inv = Rational::one() / &size;
    if let Some(l) = coefficients[0].iter().position(|c| *c != inv) {
        return Err(SpectralError::E0Mismatch(l));
    }
    for j in 0..w {
        for k in j..w {
            let prod = tensor.multiply(&coefficients[j], &coefficients[k]);
            if j == k && prod != coefficients[j] {
                return Err(SpectralError::NotIdempotent(j));
            }
            if j != k && prod.iter().any(|c| !c.is_zero()) {
                return Err(SpectralError::NotOrthogonal(j, k));
            }
        }
    }
    for l in 0..w {
        let total = coefficients.iter().fold(Rational::zero(), |acc, c| acc + &c[l]);
        let want = if l == 0 { Rational::one() } else { Rational::zero() };
        if total != want {
            return Err(SpectralError::SumNotIdentity(l));
        }
    }
    let multiplicities: Vec<Rational> = (0..w).map(|j| &coefficients[j][0] * &size).collect();
    if let Some(j) = multiplicities.iter().position(|mj| mj.is_zero()) {
        return Err(SpectralError::ZeroMultiplicity(j));
    }

    let mut p = vec![Rational::zero(); w * w];
    for i in 0..w {
        for l in 0..w {
            let prod = tensor.multiply(&unit(w, l), &coefficients[i]);
            let lambda = &prod[0] / &coefficients[i][0];
            if prod.iter().zip(&coefficients[i]).any(|(a, c)| *a != &lambda * c) {
                return Err(SpectralError::NotEigen { i, l });
            }
            p[i * w + l] = lambda;
        }
    }
    let p = RatMatrix::new(w, w, p)?;
    let scaled = RatMatrix::identity(w)?.scalar_mul(&size);
    for (which, prod) in [("PQ", p.mul(q)?), ("QP", q.mul(&p)?)] {
        if let Some(pos) = prod.entries().iter().zip(scaled.entries()).position(|(a, b)| a != b) {
            return Err(SpectralError::PqMismatch { which, i: pos / w, j: pos % w });
        }
    }
    Ok(EigenData { size: scheme.size(), p, q: q.clone(), coefficients, multiplicities, valencies: tensor.valencies() })
}

/// Dense `E_j` on the scheme's vertex set.
pub fn idempotent_matrix(rels: &RelationPartition, eig: &EigenData, j: usize) -> RatMatrix {
    let c = &eig.coefficients[j];
    RatMatrix::from_fn(rels.size(), rels.size(), |x, y| c[rels.get(x, y)].clone()).expect("size > 0")
}

/// Krein parameters `q_ij^k`.
#[derive(Clone, PartialEq, Eq)]
pub struct KreinTensor {
    classes: usize,
    q: Vec<Rational>,
}

impl KreinTensor {
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        let w = self.classes + 1;
        &self.q[(i * w + j) * w + k]
    }

    /// `B_i*` with entry `(j, k)` equal to `q_ij^k`.
    pub fn krein_matrix(&self, i: usize) -> RatMatrix {
        self.krein_matrix_ordered(i, &(0..=self.classes).collect::<Vec<_>>())
    }

    /// `B_i*` with idempotents relabelled: entry `(a, b)` is `q_{i, o_a}^{o_b}`.
    pub fn krein_matrix_ordered(&self, i: usize, ordering: &[usize]) -> RatMatrix {
        let w = self.classes + 1;
        RatMatrix::from_fn(w, w, |a, b| self.get(i, ordering[a], ordering[b]).clone()).expect("w > 0")
    }

    pub fn min_entry(&self) -> Rational {
        self.q.iter().min().cloned().expect("nonempty")
    }

    /// First negative `q_ij^k`, if any.
    pub fn first_negative(&self) -> Option<(usize, usize, usize, Rational)> {
        let w = self.classes + 1;
        self.q
            .iter()
            .position(Signed::is_negative)
            .map(|pos| (pos / (w * w), pos / w % w, pos % w, self.q[pos].clone()))
    }

    /// Krein conditions `q_ij^k ≥ 0`.
    pub fn is_admissible(&self) -> bool {
        self.first_negative().is_none()
    }
}

impl fmt::Debug for KreinTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KreinTensor (d = {})", self.classes)?;
        for i in 0..=self.classes {
            write!(f, "  B_{i}* = {:?}", self.krein_matrix(i))?;
        }
        Ok(())
    }
}

/// `q_ij^k = (|X| / m_k) · trace((E_i ∘ E_j) E_k)`, evaluated through the
/// coefficient vectors: the trace is `|X| Σ_l k_l e_i[l] e_j[l] e_k[l]`.
pub fn krein_params(eig: &EigenData) -> KreinTensor {
    let w = eig.coefficients.len();
    let size = int(eig.size as i64);
    let weights: Vec<Rational> = eig.valencies.iter().map(|&k| int(k as i64) * &size).collect();
    let mut q = Vec::with_capacity(w * w * w);
    for i in 0..w {
        for j in 0..w {
            let ij: Vec<Rational> =
                (0..w).map(|l| &weights[l] * &eig.coefficients[i][l] * &eig.coefficients[j][l]).collect();
            for k in 0..w {
                let trace = (0..w).fold(Rational::zero(), |acc, l| acc + &ij[l] * &eig.coefficients[k][l]);
                q.push(trace * &size / &eig.multiplicities[k]);
            }
        }
    }
    KreinTensor { classes: w - 1, q }
}

/// The Krein number that bounds the number of matrices in a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KreinBound {
    /// `(2n − m − 1) / (m + 1)`.
    pub value: Rational,
    /// `m ≤ 2n − 1`, equivalently `value ≥ 0`.
    pub pass: bool,
}

pub fn krein_bound_check(n: usize, m: usize) -> KreinBound {
    let (n, m) = (n as i64, m as i64);
    let value = rat(2 * n - m - 1, m + 1);
    let pass = !value.is_negative();
    debug_assert_eq!(pass, m < 2 * n);
    KreinBound { value, pass }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QStructure {
    pub q_polynomial: bool,
    pub q_bipartite: bool,
    pub q_antipodal: bool,
}

/// Q-polynomial, Q-bipartite and Q-antipodal tests on `B_1*` under an ordering.
///
/// With `B = B_1*` in the given order: Q-polynomial means `B` is tridiagonal
/// with nonzero sub- and super-diagonal, Q-bipartite additionally needs a
/// zero diagonal, and Q-antipodal means `b*_j = c*_{d−j}` for every
/// `j ≠ ⌊d/2⌋`, where `b*_j = B[j+1][j]`, `c*_j = B[j−1][j]`, `b*_d = c*_0 = 0`.
pub fn q_structure(krein: &KreinTensor, ordering: &[usize]) -> QStructure {
    let d = krein.classes;
    let b = krein.krein_matrix_ordered(ordering[1], ordering);
    let zero = Rational::zero();
    let tridiagonal = (0..=d).all(|j| (0..=d).all(|k| j.abs_diff(k) <= 1 || b.get(j, k).is_zero()))
        && (0..d).all(|j| !b.get(j + 1, j).is_zero() && !b.get(j, j + 1).is_zero());
    let bstar = |j: usize| if j < d { b.get(j + 1, j) } else { &zero };
    let cstar = |j: usize| if j > 0 { b.get(j - 1, j) } else { &zero };
    let antipodal = (0..=d).filter(|&j| j != d / 2).all(|j| bstar(j) == cstar(d - j));
    QStructure {
        q_polynomial: tridiagonal,
        q_bipartite: tridiagonal && (0..=d).all(|j| b.get(j, j).is_zero()),
        q_antipodal: antipodal,
    }
}

fn orderings(d: usize) -> impl Iterator<Item = Vec<usize>> {
    // Lexicographic next-permutation on 1..=d, with 0 fixed in front.
    let mut current: Option<Vec<usize>> = Some((0..=d).collect());
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        let tail = &mut next[1..];
        if let Some(i) = (0..tail.len().saturating_sub(1)).rev().find(|&i| tail[i] < tail[i + 1]) {
            let j = (i + 1..tail.len()).rev().find(|&j| tail[j] > tail[i]).expect("pivot has a successor");
            tail.swap(i, j);
            tail[i + 1..].reverse();
            current = Some(next);
        }
        Some(out)
    })
}

/// First ordering (lexicographic, `E_0` fixed) under which the scheme is Q-polynomial.
pub fn find_q_polynomial_ordering(krein: &KreinTensor) -> Option<Vec<usize>> {
    orderings(krein.classes).find(|o| q_structure(krein, o).q_polynomial)
}

/// Which `B_i*` reproduces a tabulated Krein matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KreinMatch {
    pub index: usize,
    pub ordering: Vec<usize>,
}

/// Searches the natural order first, then every ordering with `E_0` fixed.
pub fn match_krein_display(krein: &KreinTensor, display: &RatMatrix) -> Option<KreinMatch> {
    let w = krein.classes + 1;
    if display.shape() != (w, w) {
        return None;
    }
    let natural: Vec<usize> = (0..w).collect();
    if let Some(index) = (0..w).find(|&i| krein.krein_matrix(i) == *display) {
        return Some(KreinMatch { index, ordering: natural });
    }
    for ordering in orderings(krein.classes) {
        for i in 0..w {
            if krein.krein_matrix_ordered(ordering[i], &ordering) == *display {
                return Some(KreinMatch { index: ordering[i], ordering });
            }
        }
    }
    None
}
