//! The nine-relation double cover of the five-class scheme and its class-4 fusion.
//!
//! The cover lives on two copies of the base vertex set, the first copy at
//! indices `0..|X|`. Each cover relation is a 2×2 block pattern of base
//! relations:
//!
//! | class | same copy | across copies |
//! |-------|-----------|---------------|
//! | 0     | A0        | -             |
//! | 1     | A1        | -             |
//! | 2     | -         | A1            |
//! | 3     | A2        | A2            |
//! | 4     | A3        | -             |
//! | 5     | -         | A3            |
//! | 6     | A4        | A5            |
//! | 7     | A5        | A4            |
//! | 8     | -         | A0            |

use thiserror::Error;

use crate::matrix::RatMatrix;
use crate::mubh_scheme::FiveClassScheme;
use crate::scheme::{is_uniform, quotient_scheme, RelationPartition, Scheme, SchemeError, UniformityReport};
use crate::spectral::{
    self, closed_form_krein, closed_form_pq, krein_params, match_krein_display, q_structure, EigenData, Family,
    KreinMatch, KreinTensor, QStructure, SpectralError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("vertex set of size {0} cannot be split into two copies")]
    OddSize(usize),
    #[error("pair ({x}, {y}) inside the first copy has class {class}, which has no base counterpart")]
    NotACover { x: usize, y: usize, class: usize },
    #[error("tabulated Krein matrix not found; closest B_{index}* differs at ({row}, {col}): computed {computed}, table {table}")]
    KreinDisplay { index: usize, row: usize, col: usize, computed: String, table: String },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, CoverError>;

/// Base class to cover class for pairs within one copy.
pub const SAME_COPY: [usize; 6] = [0, 1, 3, 4, 6, 7];
/// Base class to cover class for pairs across the copies.
pub const ACROSS_COPIES: [usize; 6] = [8, 2, 3, 5, 7, 6];
/// Cover class to fusion class.
pub const FUSION_MAP: [usize; 9] = [0, 1, 1, 1, 2, 3, 2, 3, 4];
/// Relation indices whose union has the fibers of the uniform structure.
pub const COVER_FIBER_INDICES: [usize; 5] = [0, 1, 2, 3, 8];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverScheme {
    pub n: usize,
    pub m: usize,
    pub scheme: Scheme,
}

impl CoverScheme {
    pub fn rels(&self) -> &RelationPartition {
        self.scheme.rels()
    }
}

pub fn double_cover(base: &FiveClassScheme) -> Result<CoverScheme> {
    let rels = base.rels();
    let size = rels.size();
    let cover = RelationPartition::from_fn(2 * size, 8, |u, v| {
        let c = rels.get(u % size, v % size);
        if u / size == v / size {
            SAME_COPY[c]
        } else {
            ACROSS_COPIES[c]
        }
    })?;
    Ok(CoverScheme { n: base.n, m: base.m, scheme: Scheme::new(cover)? })
}

/// Restricts a cover to its first copy and relabels back to `A_0, …, A_5`.
pub fn project_to_base(cover: &RelationPartition) -> Result<RelationPartition> {
    if !cover.size().is_multiple_of(2) {
        return Err(CoverError::OddSize(cover.size()));
    }
    let half = cover.size() / 2;
    let mut back = [usize::MAX; 9];
    for (base, &c) in SAME_COPY.iter().enumerate() {
        back[c] = base;
    }
    for x in 0..half {
        for y in 0..half {
            let class = cover.get(x, y);
            if back[class] == usize::MAX {
                return Err(CoverError::NotACover { x, y, class });
            }
        }
    }
    Ok(RelationPartition::from_fn(half, 5, |x, y| back[cover.get(x, y)])?)
}

/// `B̃_1 = Ã_1 + Ã_2 + Ã_3`, `B̃_2 = Ã_4 + Ã_6`, `B̃_3 = Ã_5 + Ã_7`, `B̃_4 = Ã_8`.
pub fn fusion_four(cover: &CoverScheme) -> Result<Scheme> {
    Ok(Scheme::new(cover.rels().fuse(&FUSION_MAP)?)?)
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub eigen: EigenData,
    pub krein: KreinTensor,
    /// Index and ordering under which the tabulated Krein matrix appears.
    pub krein_match: KreinMatch,
    pub uniformity: UniformityReport,
}

fn first_entry_difference(a: &RatMatrix, b: &RatMatrix) -> (usize, usize, String, String) {
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            if a.get(r, c) != b.get(r, c) {
                return (r, c, a.get(r, c).to_string(), b.get(r, c).to_string());
            }
        }
    }
    (0, 0, String::new(), String::new())
}

/// Certifies the class-8 `Q` table and the tabulated Krein matrix, and tests
/// uniformity with respect to the fibers of `Ã_0 + Ã_1 + Ã_2 + Ã_3 + Ã_8`.
pub fn verify_cover_tables(cover: &CoverScheme) -> Result<CoverReport> {
    let q = closed_form_pq(cover.n, cover.m, Family::Class8)?.q;
    let eigen = spectral::idempotents_from_q(&cover.scheme, &q)?;
    let krein = krein_params(&eigen);
    let (expected, display) = closed_form_krein(cover.n, cover.m, Family::Class8)?.expect("class 8 has a table");
    let krein_match = match match_krein_display(&krein, &display) {
        Some(found) => found,
        None => {
            let (row, col, computed, table) = first_entry_difference(&krein.krein_matrix(expected), &display);
            return Err(CoverError::KreinDisplay { index: expected, row, col, computed, table });
        }
    };
    let fibers = quotient_scheme(&cover.scheme, &COVER_FIBER_INDICES)?.fibers;
    let uniformity = is_uniform(cover.rels(), &fibers)?;
    Ok(CoverReport { eigen, krein, krein_match, uniformity })
}

#[derive(Debug, Clone)]
pub struct FusionReport {
    pub eigen: EigenData,
    pub krein: KreinTensor,
    pub structure: QStructure,
}

/// Certifies the class-4 `Q` table and computes the Q-structure flags in the
/// table's idempotent order.
pub fn certify_fusion(fusion: &Scheme, n: usize, m: usize) -> Result<FusionReport> {
    let q = closed_form_pq(n, m, Family::Fusion4)?.q;
    let eigen = spectral::idempotents_from_q(fusion, &q)?;
    let krein = krein_params(&eigen);
    let structure = q_structure(&krein, &[0, 1, 2, 3, 4]);
    Ok(FusionReport { eigen, krein, structure })
}
