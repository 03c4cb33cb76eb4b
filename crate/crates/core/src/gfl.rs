//! GF(2^k) arithmetic and the Latin squares built over it.
//!
//! Field elements are polynomials over GF(2) packed into the low `k` bits of
//! a `u32`, reduced modulo a fixed irreducible polynomial per degree (the
//! Conway polynomials for p = 2, see [`MODULI`]). Elements enumerate as the
//! integers `0..2^k`, and that enumeration fixes every row order and symbol
//! mapping below: element `v` becomes Latin symbol `v + 1`, so `0 ↦ 1`.

use thiserror::Error;

/// Modulus for GF(2^k), indexed by `k - 1`, bit `i` = coefficient of `x^i`.
pub const MODULI: [u32; 16] = [
    0b11,                  // x + 1
    0b111,                 // x^2 + x + 1
    0b1011,                // x^3 + x + 1
    0b1_0011,              // x^4 + x + 1
    0b10_0101,             // x^5 + x^2 + 1
    0b101_1011,            // x^6 + x^4 + x^3 + x + 1
    0b1000_0011,           // x^7 + x + 1
    0b1_0001_1101,         // x^8 + x^4 + x^3 + x^2 + 1
    0b10_0001_0001,        // x^9 + x^4 + 1
    0b100_0110_1111,       // x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
    0b1000_0000_0101,      // x^11 + x^2 + 1
    0b1_0000_1110_1011,    // x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
    0b10_0000_0001_1011,   // x^13 + x^4 + x^3 + x + 1
    0b100_0000_1010_1001,  // x^14 + x^7 + x^5 + x^3 + 1
    0b1000_0000_0011_0101, // x^15 + x^5 + x^4 + x^2 + 1
    0x1_002D,              // x^16 + x^5 + x^3 + x^2 + 1
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GflError {
    #[error("field degree {0} outside 1..=16")]
    DegreeOutOfRange(u32),
    #[error("modulus {0:#b} is reducible over GF(2)")]
    Reducible(u32),
    #[error("{0} is not a power of two at least 2")]
    NotPowerOfTwo(usize),
    #[error("value {value} is not an element of GF(2^{degree})")]
    ElementOutOfRange { value: u32, degree: u32 },
    #[error("Latin squares of different sides {0} and {1}")]
    SideMismatch(usize, usize),
    #[error("malformed square: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, GflError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u32);

impl FieldElem {
    pub fn value(self) -> u32 {
        self.0
    }
}

/// GF(2^k) with a fixed modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    degree: u32,
    modulus: u32,
}

impl Field {
    pub fn new(degree: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(GflError::DegreeOutOfRange(degree));
        }
        Self::with_modulus(degree, MODULI[degree as usize - 1])
    }

    /// Field with an explicit modulus of exact degree `degree`; rejects reducible moduli.
    pub fn with_modulus(degree: u32, modulus: u32) -> Result<Self> {
        if !(1..=16).contains(&degree) {
            return Err(GflError::DegreeOutOfRange(degree));
        }
        if poly_degree(modulus) != Some(degree) || !is_irreducible(modulus) {
            return Err(GflError::Reducible(modulus));
        }
        Ok(Field { degree, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        1 << self.degree
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if (value as usize) < self.order() {
            Ok(FieldElem(value))
        } else {
            Err(GflError::ElementOutOfRange { value, degree: self.degree })
        }
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    /// All elements in enumeration order `0, 1, …, 2^k − 1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order() as u32).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    /// Characteristic 2: subtraction is addition.
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, b)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (mut a, mut b, mut acc) = (a.0, b.0, 0u32);
        let top = 1u32 << self.degree;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        FieldElem(acc)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let (mut base, mut acc) = (a, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        (a.0 != 0).then(|| self.pow(a, self.order() as u64 - 2))
    }
}

fn poly_degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    (2u32..(1 << (deg / 2 + 1))).all(|d| poly_rem(p, d) != 0)
}

/// Side `s` array over symbols `1..=s`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    side: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    /// Accepts any `s × s` array over `1..=s`; the Latin property is checked by [`is_latin`].
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let side = rows.len();
        if side == 0 {
            return Err(GflError::Malformed("empty square".into()));
        }
        let mut cells = Vec::with_capacity(side * side);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != side {
                return Err(GflError::Malformed(format!("row {r} has length {}", row.len())));
            }
            for &v in row {
                if v == 0 || v as usize > side {
                    return Err(GflError::Malformed(format!("symbol {v} outside 1..={side}")));
                }
            }
            cells.extend_from_slice(row);
        }
        Ok(LatinSquare { side, cells })
    }

    fn from_fn(side: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let cells = (0..side * side).map(|x| f(x / side, x % side)).collect();
        LatinSquare { side, cells }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    /// Symbol at `(r, c)`, in `1..=side`.
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.cells[r * self.side + c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.cells[r * self.side..(r + 1) * self.side]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.side).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<u32> {
        (0..self.side).map(|i| self.get(i, i)).collect()
    }
}

impl std::fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries((0..self.side).map(|r| self.row(r))).finish()
    }
}

pub fn is_latin(square: &LatinSquare) -> bool {
    let s = square.side;
    let is_perm = |cells: Vec<u32>| {
        let mut seen = vec![false; s + 1];
        cells.into_iter().all(|v| !std::mem::replace(&mut seen[v as usize], true))
    };
    (0..s).all(|r| is_perm((0..s).map(|c| square.get(r, c)).collect()))
        && (0..s).all(|c| is_perm((0..s).map(|r| square.get(r, c)).collect()))
}

/// Superposition yields every ordered symbol pair exactly once.
pub fn is_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.side != b.side {
        return Err(GflError::SideMismatch(a.side, b.side));
    }
    let s = a.side;
    let mut seen = vec![false; s * s];
    for (&x, &y) in a.cells.iter().zip(&b.cells) {
        let idx = (x as usize - 1) * s + (y as usize - 1);
        if std::mem::replace(&mut seen[idx], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every row of `a` agrees with every row of `b` in exactly one column.
pub fn is_suitable(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.side != b.side {
        return Err(GflError::SideMismatch(a.side, b.side));
    }
    let s = a.side;
    Ok((0..s).all(|r| (0..s).all(|r2| a.row(r).iter().zip(b.row(r2)).filter(|(x, y)| x == y).count() == 1)))
}

fn field_for_side(q: usize) -> Result<Field> {
    if q < 2 || !q.is_power_of_two() {
        return Err(GflError::NotPowerOfTwo(q));
    }
    Field::new(q.trailing_zeros())
}

/// The `q − 1` squares `L_α(i, j) = α·i + j` over GF(q), α ≠ 0.
///
/// Rows are indexed by field elements in enumeration order, so row 0 is the
/// row of `0 ∈ GF(q)` and reads `1, 2, …, q` after the symbol map.
pub fn gen_mols_field(q: usize) -> Result<Vec<LatinSquare>> {
    let field = field_for_side(q)?;
    Ok(field
        .elements()
        .skip(1)
        .map(|alpha| {
            LatinSquare::from_fn(q, |i, j| {
                let v = field.add(field.mul(alpha, FieldElem(i as u32)), FieldElem(j as u32));
                v.0 + 1
            })
        })
        .collect())
}

/// The `s − 1` squares `M_α(i, j) = α·(j − i)` over GF(s), α ≠ 0.
///
/// Each has constant diagonal symbol 1, and distinct α, β give suitable
/// squares: `α(c − i) = β(c − k)` has the single solution
/// `c = (α − β)⁻¹(αi − βk)`.
pub fn gen_msls(s: usize) -> Result<Vec<LatinSquare>> {
    let field = field_for_side(s)?;
    Ok(field
        .elements()
        .skip(1)
        .map(|alpha| {
            LatinSquare::from_fn(s, |i, j| {
                let diff = field.sub(FieldElem(j as u32), FieldElem(i as u32));
                field.mul(alpha, diff).0 + 1
            })
        })
        .collect())
}
