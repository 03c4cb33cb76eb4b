//! Symmetric association schemes stored as a single relation map.
//!
//! A [`RelationPartition`] assigns a class index to every ordered pair of
//! vertices. [`verify_scheme`] checks the axioms exactly and returns the
//! intersection numbers; the other functions here build on a verified
//! [`Scheme`]: imprimitivity systems and quotients, uniformity, and the
//! strongly regular / Deza predicates used for individual relations.

use num::Zero;
use thiserror::Error;

use crate::matrix::bits::BitPlane;
use crate::matrix::{BinMatrix, IntMatrix, MatrixError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("relation map has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("a scheme needs at least one vertex and one non-identity class")]
    Empty,
    #[error("entry ({x}, {y}) has class {class}, outside 0..={classes}")]
    ClassOutOfRange { x: usize, y: usize, class: usize, classes: usize },
    #[error("not symmetric: ({x}, {y}) has class {xy} but ({y}, {x}) has class {yx}")]
    NotSymmetric { x: usize, y: usize, xy: usize, yx: usize },
    #[error("class 0 is not the identity relation: ({x}, {y}) has class {class}")]
    IdentityViolation { x: usize, y: usize, class: usize },
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error(
        "(A_{i} A_{j}) is not constant on class {k}: entry ({x}, {y}) is {found} \
         but ({x0}, {y0}) gives {expected}"
    )]
    IntersectionNotConstant {
        i: usize,
        j: usize,
        k: usize,
        x: usize,
        y: usize,
        found: u64,
        expected: u64,
        x0: usize,
        y0: usize,
    },
    #[error("index set is invalid: {0}")]
    InvalidIndexSet(String),
    #[error("index set does not induce an imprimitivity system: {0}")]
    NotImprimitive(String),
    #[error("invalid fiber partition: {0}")]
    InvalidFibers(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub type Result<T> = std::result::Result<T, SchemeError>;

/// Class assignment on `X × X`; class indices run over `0..=classes`.
///
/// Construction only checks shape and index range so that malformed input
/// can be handed to [`verify_scheme`] and rejected with a counterexample.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelationPartition {
    size: usize,
    classes: usize,
    relmap: Vec<u8>,
}

impl RelationPartition {
    pub fn new(size: usize, classes: usize, relmap: Vec<u8>) -> Result<Self> {
        if size == 0 || classes == 0 {
            return Err(SchemeError::Empty);
        }
        if classes > u8::MAX as usize {
            return Err(SchemeError::ClassOutOfRange { x: 0, y: 0, class: classes, classes: u8::MAX as usize });
        }
        if relmap.len() != size * size {
            return Err(SchemeError::WrongLength { expected: size * size, got: relmap.len() });
        }
        if let Some(pos) = relmap.iter().position(|&c| c as usize > classes) {
            return Err(SchemeError::ClassOutOfRange {
                x: pos / size,
                y: pos % size,
                class: relmap[pos] as usize,
                classes,
            });
        }
        Ok(RelationPartition { size, classes, relmap })
    }

    pub fn from_fn(size: usize, classes: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut relmap = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                let c = f(x, y);
                if c > classes || c > u8::MAX as usize {
                    return Err(SchemeError::ClassOutOfRange { x, y, class: c, classes });
                }
                relmap.push(c as u8);
            }
        }
        Self::new(size, classes, relmap)
    }

    /// `|X|`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of non-identity classes `d`.
    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.relmap[x * self.size + y] as usize
    }

    pub fn row(&self, x: usize) -> &[u8] {
        &self.relmap[x * self.size..(x + 1) * self.size]
    }

    pub fn relmap(&self) -> &[u8] {
        &self.relmap
    }

    /// Adjacency matrix `A_i`.
    pub fn relation(&self, i: usize) -> BinMatrix {
        BinMatrix::from_fn(self.size, self.size, |x, y| self.get(x, y) == i).expect("size > 0")
    }

    /// Sum of `A_i` over `indices`.
    pub fn relation_union(&self, indices: &[usize]) -> BinMatrix {
        BinMatrix::from_fn(self.size, self.size, |x, y| indices.contains(&self.get(x, y))).expect("size > 0")
    }

    /// Number of ordered pairs in each class.
    pub fn class_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.classes + 1];
        for &c in &self.relmap {
            counts[c as usize] += 1;
        }
        counts
    }

    /// Relabels vertices: pair `(a, b)` of the result is pair `(perm[a], perm[b])` here.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.size)?;
        Self::from_fn(self.size, self.classes, |a, b| self.get(perm[a], perm[b]))
    }

    /// Merges classes: old class `c` becomes `map[c]`.
    pub fn fuse(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.classes + 1 {
            return Err(SchemeError::InvalidIndexSet(format!(
                "fusion map has {} entries for {} classes",
                map.len(),
                self.classes + 1
            )));
        }
        let target = map.iter().copied().max().unwrap_or(0);
        Self::from_fn(self.size, target, |x, y| map[self.get(x, y)])
    }
}

impl std::fmt::Debug for RelationPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "RelationPartition {{ size: {}, classes: {}, counts: {:?} }}",
            self.size,
            self.classes,
            self.class_counts()
        )
    }
}

fn check_permutation(perm: &[usize], size: usize) -> Result<()> {
    let mut seen = vec![false; size];
    if perm.len() != size || perm.iter().any(|&p| p >= size || std::mem::replace(&mut seen[p], true)) {
        return Err(SchemeError::Precondition(format!("not a permutation of 0..{size}")));
    }
    Ok(())
}

/// Intersection numbers `p_ij^k` for `0 ≤ i, j, k ≤ d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntersectionTensor {
    classes: usize,
    p: Vec<u64>,
}

impl IntersectionTensor {
    pub fn from_fn(classes: usize, f: impl Fn(usize, usize, usize) -> u64) -> Self {
        let w = classes + 1;
        let mut p = Vec::with_capacity(w * w * w);
        for i in 0..w {
            for j in 0..w {
                for k in 0..w {
                    p.push(f(i, j, k));
                }
            }
        }
        IntersectionTensor { classes, p }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        let w = self.classes + 1;
        self.p[(i * w + j) * w + k]
    }

    /// `k_i = p_ii^0`.
    pub fn valencies(&self) -> Vec<u64> {
        (0..=self.classes).map(|i| self.get(i, i, 0)).collect()
    }

    /// Intersection matrix `B_i` with `(B_i)_{kj} = p_ij^k`.
    pub fn intersection_matrix(&self, i: usize) -> IntMatrix {
        let w = self.classes + 1;
        IntMatrix::from_fn(w, w, |k, j| self.get(i, j, k) as i64).expect("w > 0")
    }

    /// First `(i, j, k)` where the two tensors differ, with both values.
    pub fn first_difference(&self, other: &IntersectionTensor) -> Option<(usize, usize, usize, u64, u64)> {
        if self.classes != other.classes {
            return Some((self.classes, other.classes, 0, 0, 0));
        }
        let w = self.classes + 1;
        for i in 0..w {
            for j in 0..w {
                for k in 0..w {
                    let (a, b) = (self.get(i, j, k), other.get(i, j, k));
                    if a != b {
                        return Some((i, j, k, a, b));
                    }
                }
            }
        }
        None
    }

    /// Product of `Σ a_i A_i` and `Σ b_j A_j` in the `A`-basis of the Bose–Mesner algebra.
    pub fn multiply(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let w = self.classes + 1;
        let mut out = vec![Rational::zero(); w];
        for i in 0..w {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..w {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for (k, slot) in out.iter_mut().enumerate() {
                    let p = self.get(i, j, k);
                    if p != 0 {
                        *slot += &ab * Rational::from_integer(p.into());
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for IntersectionTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntersectionTensor (d = {})", self.classes)?;
        for i in 0..=self.classes {
            writeln!(f, "  B_{i} = {:?}", self.intersection_matrix(i))?;
        }
        Ok(())
    }
}

/// Which kernel establishes axiom (3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyPath {
    /// Products up to 256 vertices, counting above.
    Auto,
    /// Bit-packed products `A_i A_j`.
    Products,
    /// Per-pair counting over a third vertex.
    Counting,
}

pub const PRODUCTS_PATH_LIMIT: usize = 256;

pub fn verify_scheme(rels: &RelationPartition) -> Result<IntersectionTensor> {
    verify_scheme_with(rels, VerifyPath::Auto)
}

/// Checks symmetry, `A_0 = I`, that no class is empty, and that every
/// `(A_i A_j)_{xy}` depends only on the class of `(x, y)`.
///
/// Pairs are scanned row by row over `x ≤ y` and, within a pair, by `(i, j)`;
/// the first failure in that order is reported.
pub fn verify_scheme_with(rels: &RelationPartition, path: VerifyPath) -> Result<IntersectionTensor> {
    let n = rels.size;
    let d = rels.classes;
    for x in 0..n {
        for y in x + 1..n {
            let (xy, yx) = (rels.get(x, y), rels.get(y, x));
            if xy != yx {
                return Err(SchemeError::NotSymmetric { x, y, xy, yx });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let c = rels.get(x, y);
            if (x == y) != (c == 0) {
                return Err(SchemeError::IdentityViolation { x, y, class: c });
            }
        }
    }
    if let Some(k) = rels.class_counts().iter().position(|&c| c == 0) {
        return Err(SchemeError::EmptyClass(k));
    }

    let path = match path {
        VerifyPath::Auto if n <= PRODUCTS_PATH_LIMIT => VerifyPath::Products,
        VerifyPath::Auto => VerifyPath::Counting,
        p => p,
    };
    let w = d + 1;
    let mut checker = Checker::new(w);
    match path {
        VerifyPath::Products => {
            let mats: Vec<BinMatrix> = (0..w).map(|i| rels.relation(i)).collect();
            // A_j is symmetric, so A_i A_j = A_i A_jᵗ.
            let mut products = Vec::with_capacity(w * w);
            for i in 0..w {
                for j in 0..w {
                    products.push(mats[i].mul_transposed(&mats[j])?);
                }
            }
            let mut counts = vec![0u64; w * w];
            for x in 0..n {
                for y in x..n {
                    for (c, p) in counts.iter_mut().zip(&products) {
                        *c = p.get(x, y) as u64;
                    }
                    checker.observe(x, y, rels.get(x, y), &counts)?;
                }
            }
        }
        _ => {
            let mut counts = vec![0u64; w * w];
            for x in 0..n {
                let rx = rels.row(x);
                for y in x..n {
                    let ry = rels.row(y);
                    counts.iter_mut().for_each(|c| *c = 0);
                    for z in 0..n {
                        counts[rx[z] as usize * w + ry[z] as usize] += 1;
                    }
                    checker.observe(x, y, rels.get(x, y), &counts)?;
                }
            }
        }
    }
    Ok(checker.finish())
}

/// Records the first value seen for each `(k, i, j)` and compares the rest.
struct Checker {
    w: usize,
    expected: Vec<Option<(u64, usize, usize)>>,
}

impl Checker {
    fn new(w: usize) -> Self {
        Checker { w, expected: vec![None; w * w * w] }
    }

    fn observe(&mut self, x: usize, y: usize, k: usize, counts: &[u64]) -> Result<()> {
        let w = self.w;
        for i in 0..w {
            for j in 0..w {
                let found = counts[i * w + j];
                let slot = &mut self.expected[(i * w + j) * w + k];
                match *slot {
                    None => *slot = Some((found, x, y)),
                    Some((expected, x0, y0)) if expected != found => {
                        return Err(SchemeError::IntersectionNotConstant { i, j, k, x, y, found, expected, x0, y0 })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }

    fn finish(self) -> IntersectionTensor {
        let w = self.w;
        IntersectionTensor::from_fn(w - 1, |i, j, k| {
            self.expected[(i * w + j) * w + k].expect("every class is nonempty").0
        })
    }
}

/// A verified scheme together with its intersection numbers.
#[derive(Clone, PartialEq, Eq)]
pub struct Scheme {
    rels: RelationPartition,
    tensor: IntersectionTensor,
}

impl Scheme {
    pub fn new(rels: RelationPartition) -> Result<Self> {
        let tensor = verify_scheme(&rels)?;
        Ok(Scheme { rels, tensor })
    }

    pub fn rels(&self) -> &RelationPartition {
        &self.rels
    }

    pub fn tensor(&self) -> &IntersectionTensor {
        &self.tensor
    }

    pub fn size(&self) -> usize {
        self.rels.size
    }

    pub fn classes(&self) -> usize {
        self.rels.classes
    }

    pub fn into_parts(self) -> (RelationPartition, IntersectionTensor) {
        (self.rels, self.tensor)
    }
}

impl std::fmt::Debug for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Scheme {{ {:?}, valencies: {:?} }}", self.rels, self.tensor.valencies())
    }
}

/// Vertices split into `count` fibers of equal `size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPartition {
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl FiberPartition {
    /// `assignment[x]` is the fiber of vertex `x`; fibers are `0..count`.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let count = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (x, &f) in assignment.iter().enumerate() {
            members[f].push(x);
        }
        if count == 0 {
            return Err(SchemeError::InvalidFibers("no vertices".into()));
        }
        let size = members[0].len();
        if let Some(f) = members.iter().position(|m| m.len() != size) {
            return Err(SchemeError::InvalidFibers(format!(
                "fiber {f} has {} vertices, fiber 0 has {size}",
                members[f].len()
            )));
        }
        Ok(FiberPartition { assignment, members })
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn fiber_size(&self) -> usize {
        self.members[0].len()
    }

    pub fn fiber_of(&self, x: usize) -> usize {
        self.assignment[x]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, f: usize) -> &[usize] {
        &self.members[f]
    }

    /// Vertex order listing fiber 0 first, then fiber 1, and so on.
    pub fn ordering(&self) -> Vec<usize> {
        self.members.iter().flatten().copied().collect()
    }
}

/// Result of [`quotient_scheme`].
#[derive(Debug, Clone)]
pub struct Quotient {
    pub rels: RelationPartition,
    pub fibers: FiberPartition,
    /// `I_0, …, I_t`, each sorted, ordered by least element; `I_0` is the index set.
    pub index_classes: Vec<Vec<usize>>,
}

/// Fibers of the equivalence `Σ_{j∈I} A_j` and the scheme they carry.
///
/// Fibers are numbered by their least vertex. Relation indices are grouped
/// by `j ∼ k ⇔ p_ij^k ≠ 0` for some `i ∈ I`.
pub fn quotient_scheme(scheme: &Scheme, index_set: &[usize]) -> Result<Quotient> {
    let rels = &scheme.rels;
    let d = rels.classes;
    if !index_set.contains(&0) {
        return Err(SchemeError::InvalidIndexSet("must contain 0".into()));
    }
    if let Some(&bad) = index_set.iter().find(|&&i| i > d) {
        return Err(SchemeError::InvalidIndexSet(format!("index {bad} exceeds {d}")));
    }
    let in_set = |c: usize| index_set.contains(&c);

    let n = rels.size;
    let mut fiber = vec![usize::MAX; n];
    let mut count = 0;
    for x in 0..n {
        if fiber[x] != usize::MAX {
            continue;
        }
        let mut stack = vec![x];
        fiber[x] = count;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if fiber[v] == usize::MAX && in_set(rels.get(u, v)) {
                    fiber[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    for x in 0..n {
        for y in 0..n {
            if fiber[x] == fiber[y] && !in_set(rels.get(x, y)) {
                return Err(SchemeError::NotImprimitive(format!(
                    "({x}, {y}) share a component but have class {}",
                    rels.get(x, y)
                )));
            }
        }
    }
    let fibers = FiberPartition::new(fiber).map_err(|e| SchemeError::NotImprimitive(e.to_string()))?;

    let mut parent: Vec<usize> = (0..=d).collect();
    fn root(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for &i in index_set {
        for j in 0..=d {
            for k in 0..=d {
                if scheme.tensor.get(i, j, k) != 0 {
                    let (a, b) = (root(&mut parent, j), root(&mut parent, k));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut index_classes: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![0usize; d + 1];
    for j in 0..=d {
        let r = root(&mut parent, j);
        if r == j {
            group_of[j] = index_classes.len();
            index_classes.push(vec![j]);
        } else {
            group_of[j] = group_of[r];
            index_classes[group_of[r]].push(j);
        }
    }
    if index_classes[0] != {
        let mut s = index_set.to_vec();
        s.sort_unstable();
        s.dedup();
        s
    } {
        return Err(SchemeError::NotImprimitive(format!("index set closes to {:?}", index_classes[0])));
    }

    let p = fibers.count();
    let mut table = vec![usize::MAX; p * p];
    for x in 0..n {
        for y in 0..n {
            let (u, v) = (fibers.fiber_of(x), fibers.fiber_of(y));
            let g = group_of[rels.get(x, y)];
            let slot = &mut table[u * p + v];
            if *slot == usize::MAX {
                *slot = g;
            } else if *slot != g {
                return Err(SchemeError::NotImprimitive(format!(
                    "fibers {u} and {v} meet index classes {} and {g}",
                    *slot
                )));
            }
        }
    }
    let t = index_classes.len() - 1;
    let quotient = if t == 0 {
        // A single fiber: the quotient is the trivial one-vertex structure.
        RelationPartition { size: p, classes: 0, relmap: table.iter().map(|&g| g as u8).collect() }
    } else {
        RelationPartition::new(p, t, table.iter().map(|&g| g as u8).collect())?
    };
    Ok(Quotient { rels: quotient, fibers, index_classes })
}

/// Why a scheme failed the uniformity test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniformityFailure {
    /// Fiber `u` sees a different set of classes internally than fiber 0.
    FiberIndexSet { fiber: usize, classes: Vec<usize> },
    /// Fibers `u ≠ v` are joined by a different set of classes than fibers 0 and 1,
    /// so the quotient is not of class 1.
    QuotientNotClass1 { u: usize, v: usize, classes: Vec<usize> },
    /// `(A_i^{UV} A_j^{VW})_{xy}` differs from the value seen earlier for class `k`.
    Coefficient {
        i: usize,
        j: usize,
        k: usize,
        fibers: (usize, usize, usize),
        x: usize,
        y: usize,
        found: u64,
        expected: u64,
    },
}

impl std::fmt::Display for UniformityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UniformityFailure::FiberIndexSet { fiber, classes } => {
                write!(f, "fiber {fiber} carries classes {classes:?}, unlike fiber 0")
            }
            UniformityFailure::QuotientNotClass1 { u, v, classes } => {
                write!(f, "fibers {u} and {v} are joined by classes {classes:?}; quotient is not class 1")
            }
            UniformityFailure::Coefficient { i, j, k, fibers, x, y, found, expected } => write!(
                f,
                "a_{{{i}{j}}}^{k} not uniform: fibers {fibers:?}, pair ({x}, {y}) gives {found}, expected {expected}"
            ),
        }
    }
}

/// Outcome of [`is_uniform`]. `coefficients[(i·w + j)·w + k]` holds `a_ij^k`
/// wherever some fiber triple defines it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub uniform: bool,
    pub classes: usize,
    pub coefficients: Vec<Option<u64>>,
    pub counterexample: Option<UniformityFailure>,
}

impl UniformityReport {
    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> Option<u64> {
        let w = self.classes + 1;
        self.coefficients[(i * w + j) * w + k]
    }
}

fn classes_between(rels: &RelationPartition, fibers: &FiberPartition, u: usize, v: usize) -> Vec<usize> {
    let mut seen = vec![false; rels.classes + 1];
    for &x in fibers.members(u) {
        for &y in fibers.members(v) {
            seen[rels.get(x, y)] = true;
        }
    }
    (0..seen.len()).filter(|&c| seen[c]).collect()
}

/// Tests the uniform-scheme condition for the given fibers.
///
/// The quotient must be of class 1 (all distinct fiber pairs joined by the
/// same classes), and for all fibers `U, V, W`, `i ∈ I(U,V)`, `j ∈ I(V,W)`
/// the block product `A_i^{UV} A_j^{VW}` must expand as `Σ_k a_ij^k A_k^{UW}`
/// with coefficients independent of the triple.
pub fn is_uniform(rels: &RelationPartition, fibers: &FiberPartition) -> Result<UniformityReport> {
    if fibers.assignment().len() != rels.size {
        return Err(SchemeError::InvalidFibers(format!(
            "partition covers {} vertices, scheme has {}",
            fibers.assignment().len(),
            rels.size
        )));
    }
    let d = rels.classes;
    let w = d + 1;
    let p = fibers.count();
    let q = fibers.fiber_size();
    let fail = |c: UniformityFailure| UniformityReport {
        uniform: false,
        classes: d,
        coefficients: vec![None; w * w * w],
        counterexample: Some(c),
    };

    let inner = classes_between(rels, fibers, 0, 0);
    for u in 1..p {
        let c = classes_between(rels, fibers, u, u);
        if c != inner {
            return Ok(fail(UniformityFailure::FiberIndexSet { fiber: u, classes: c }));
        }
    }
    let outer = if p > 1 { classes_between(rels, fibers, 0, 1) } else { Vec::new() };
    for u in 0..p {
        for v in 0..p {
            if u != v {
                let c = classes_between(rels, fibers, u, v);
                if c != outer {
                    return Ok(fail(UniformityFailure::QuotientNotClass1 { u, v, classes: c }));
                }
            }
        }
    }

    // local[(x * p + v) * w + i]: the vertices z of fiber v with class(x, z) = i,
    // as a bitset over positions within v.
    let mut position = vec![0usize; rels.size];
    for f in 0..p {
        for (pos, &z) in fibers.members(f).iter().enumerate() {
            position[z] = pos;
        }
    }
    let mut local = BitPlane::zeros(rels.size * p * w, q);
    for x in 0..rels.size {
        for z in 0..rels.size {
            let row = (x * p + fibers.fiber_of(z)) * w + rels.get(x, z);
            local.set(row, position[z], true);
        }
    }

    let mut coefficients: Vec<Option<u64>> = vec![None; w * w * w];
    let between = |a: usize, b: usize| if a == b { &inner } else { &outer };
    for u in 0..p {
        for v in 0..p {
            for wf in 0..p {
                let (iu, jv) = (between(u, v), between(v, wf));
                for &x in fibers.members(u) {
                    for &y in fibers.members(wf) {
                        let k = rels.get(x, y);
                        for &i in iu {
                            let a = local.row((x * p + v) * w + i);
                            for &j in jv {
                                let b = local.row((y * p + v) * w + j);
                                let found = u64::from(crate::matrix::bits::and_popcount(a, b));
                                let slot = &mut coefficients[(i * w + j) * w + k];
                                match *slot {
                                    None => *slot = Some(found),
                                    Some(expected) if expected != found => {
                                        return Ok(fail(UniformityFailure::Coefficient {
                                            i,
                                            j,
                                            k,
                                            fibers: (u, v, wf),
                                            x,
                                            y,
                                            found,
                                            expected,
                                        }))
                                    }
                                    Some(_) => {}
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(UniformityReport { uniform: true, classes: d, coefficients, counterexample: None })
}

fn adjacency_shape(a: &BinMatrix) -> Option<()> {
    if a.rows() != a.cols() || !a.is_symmetric() || (0..a.rows()).any(|x| a.get(x, x)) {
        return None;
    }
    Some(())
}

/// `(v, k, λ, μ)` when `A² = kI + λA + μ(J − I − A)`.
///
/// Complete and edgeless graphs are not reported: one of `λ`, `μ` is undefined.
pub fn is_srg(a: &BinMatrix) -> Option<(u64, u64, u64, u64)> {
    adjacency_shape(a)?;
    let v = a.rows();
    let sums = a.row_sums();
    let k = sums[0];
    if sums.iter().any(|&s| s != k) {
        return None;
    }
    let sq = a.mul_transposed(a).ok()?;
    let (mut lambda, mut mu) = (None, None);
    for x in 0..v {
        for y in 0..v {
            if x == y {
                continue;
            }
            let slot = if a.get(x, y) { &mut lambda } else { &mut mu };
            let c = sq.get(x, y) as u64;
            match *slot {
                None => *slot = Some(c),
                Some(prev) if prev != c => return None,
                Some(_) => {}
            }
        }
    }
    Some((v as u64, k, lambda?, mu?))
}

/// `(v, k, b, a)` with `b ≥ a` when distinct vertices have `a` or `b` common neighbours.
///
/// Errors unless `A` is a symmetric, zero-diagonal, regular adjacency matrix.
pub fn is_deza(a: &BinMatrix) -> Result<Option<(u64, u64, u64, u64)>> {
    if adjacency_shape(a).is_none() {
        return Err(SchemeError::Precondition("not a symmetric zero-diagonal adjacency matrix".into()));
    }
    let v = a.rows();
    let sums = a.row_sums();
    if let Some(x) = sums.iter().position(|&s| s != sums[0]) {
        return Err(SchemeError::Precondition(format!(
            "graph is not regular: vertex 0 has degree {}, vertex {x} has degree {}",
            sums[0], sums[x]
        )));
    }
    if v < 2 {
        return Ok(None);
    }
    let sq = a.mul_transposed(a)?;
    let mut values: Vec<u64> = Vec::with_capacity(2);
    for x in 0..v {
        for y in 0..v {
            if x == y {
                continue;
            }
            let c = sq.get(x, y) as u64;
            if !values.contains(&c) {
                if values.len() == 2 {
                    return Ok(None);
                }
                values.push(c);
            }
        }
    }
    let b = *values.iter().max().expect("v ≥ 2");
    let lo = *values.iter().min().expect("v ≥ 2");
    Ok(Some((v as u64, sums[0], b, lo)))
}
