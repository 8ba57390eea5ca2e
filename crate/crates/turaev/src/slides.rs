//! Machine verification of the matrix identities behind handle slides.
//!
//! Matrices carry entries in the ground ring and are rewritten by elementary
//! row and column operations. A column operation is right multiplication by
//! a transvection `I + s*E(from, to)`, a row operation is left multiplication
//! by `I + s*E(to, from)`; words of operations act left to right. The three
//! verifiers below replay, entirely symbolically,
//!
//! * the two-operation exchange trick that commutes a row past a column
//!   through a zero entry without net effect,
//! * the four-operation word that moves the factor `1 - v` across an edge
//!   of a graph while transposing the off-diagonal labels, and
//! * the nine-operation word around a trivalent vertex that multiplies out
//!   to the identity exactly when the labels satisfy the vertex relations
//!   `c_i = -b_i`, `a_i = b_j * b_k` (indices cyclic).

use rand::Rng;
use std::fmt;
use thiserror::Error;

use crate::ring::{RingElem, Sign};

/// Square matrix over the ground ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMatrixR {
    n: usize,
    entries: Vec<RingElem>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SlideError {
    #[error("the exchange word needs entry ({row}, {col}) to vanish, found {found}")]
    ExchangeNeedsZeroEntry { row: usize, col: usize, found: String },
}

/// One elementary operation. Indices are 0-based. `AddColumn` sends
/// `col[to] += coeff * col[from]`; `AddRow` sends `row[to] += coeff *
/// row[from]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    AddColumn { from: usize, to: usize, coeff: RingElem },
    AddRow { from: usize, to: usize, coeff: RingElem },
}

impl ElementaryOp {
    /// The operation undoing this one (same slots, negated coefficient).
    pub fn inverse(&self) -> ElementaryOp {
        match self {
            ElementaryOp::AddColumn { from, to, coeff } => {
                ElementaryOp::AddColumn { from: *from, to: *to, coeff: -coeff }
            }
            ElementaryOp::AddRow { from, to, coeff } => {
                ElementaryOp::AddRow { from: *from, to: *to, coeff: -coeff }
            }
        }
    }
}

impl fmt::Display for ElementaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryOp::AddColumn { from, to, coeff } => {
                write!(f, "col[{to}] += ({coeff}) * col[{from}]")
            }
            ElementaryOp::AddRow { from, to, coeff } => {
                write!(f, "row[{to}] += ({coeff}) * row[{from}]")
            }
        }
    }
}

impl SquareMatrixR {
    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![RingElem::one(); n])
    }

    pub fn diagonal(diag: Vec<RingElem>) -> Self {
        let n = diag.len();
        let mut entries = vec![RingElem::zero(); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d;
        }
        SquareMatrixR { n, entries }
    }

    /// # Panics
    ///
    /// Panics when the rows are not all of length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<RingElem>>) -> Self {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "rows of a square matrix have length n");
            entries.extend(row);
        }
        SquareMatrixR { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &RingElem {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: RingElem) {
        self.entries[row * self.n + col] = value;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }
            })
        })
    }

    /// Apply one elementary operation in place.
    ///
    /// # Panics
    ///
    /// Panics when an index is out of range or `from == to` (a transvection
    /// never targets its own slot).
    pub fn apply(&mut self, op: &ElementaryOp) {
        match op {
            ElementaryOp::AddColumn { from, to, coeff } => {
                assert!(*from < self.n && *to < self.n && from != to);
                for i in 0..self.n {
                    let add = self.get(i, *from) * coeff;
                    let sum = self.get(i, *to) + &add;
                    self.set(i, *to, sum);
                }
            }
            ElementaryOp::AddRow { from, to, coeff } => {
                assert!(*from < self.n && *to < self.n && from != to);
                for j in 0..self.n {
                    let add = coeff * self.get(*from, j);
                    let sum = self.get(*to, j) + &add;
                    self.set(*to, j, sum);
                }
            }
        }
    }

    /// Apply a word of operations left to right and return the result.
    pub fn applied_word(&self, word: &[ElementaryOp]) -> SquareMatrixR {
        let mut m = self.clone();
        for op in word {
            m.apply(op);
        }
        m
    }

    /// Plain matrix product (used to cross-check the operation semantics).
    pub fn matmul(&self, other: &SquareMatrixR) -> SquareMatrixR {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut entries = vec![RingElem::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = RingElem::zero();
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries[i * n + j] = acc;
            }
        }
        SquareMatrixR { n, entries }
    }

    /// Determinant by cofactor expansion along the first row. Exact; meant
    /// for the small matrices these identities live on.
    pub fn det(&self) -> RingElem {
        match self.n {
            0 => RingElem::one(),
            1 => self.get(0, 0).clone(),
            _ => {
                let mut acc = RingElem::zero();
                for j in 0..self.n {
                    if self.get(0, j).is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j).det();
                    let term = self.get(0, j) * &minor;
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> SquareMatrixR {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        SquareMatrixR { n: n - 1, entries }
    }
}

impl fmt::Display for SquareMatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The word that exchanges a row operation past the zero entry at
/// `(row, col)`: first a batch of column operations sourced at `col`, then
/// the row operations sourced at `row` that undo them. Net effect on the
/// matrix: none — which is exactly what [`verify_exchange`] checks.
pub fn exchange_word(
    m: &SquareMatrixR,
    row: usize,
    col: usize,
    s: &RingElem,
) -> Result<Vec<ElementaryOp>, SlideError> {
    if !m.get(row, col).is_zero() {
        return Err(SlideError::ExchangeNeedsZeroEntry {
            row,
            col,
            found: m.get(row, col).to_string(),
        });
    }
    let mut word = Vec::new();
    for q in 0..m.size() {
        if q == col {
            continue;
        }
        let coeff = s * m.get(row, q);
        if !coeff.is_zero() {
            word.push(ElementaryOp::AddColumn { from: col, to: q, coeff });
        }
    }
    for p in 0..m.size() {
        if p == row {
            continue;
        }
        let coeff = -&(m.get(p, col) * s);
        if !coeff.is_zero() {
            word.push(ElementaryOp::AddRow { from: row, to: p, coeff });
        }
    }
    Ok(word)
}

/// Check that the exchange word really leaves `m` untouched.
pub fn verify_exchange(
    m: &SquareMatrixR,
    row: usize,
    col: usize,
    s: &RingElem,
) -> Result<bool, SlideError> {
    let word = exchange_word(m, row, col, s)?;
    Ok(&m.applied_word(&word) == m)
}

/// Outcome of replaying the edge word on `diag(1 - v, 1)`.
#[derive(Clone, Debug)]
pub struct EdgeSlideReport {
    /// The product `v = a * b` forced by the word.
    pub v: RingElem,
    /// Whether the word carried `diag(1 - v, 1)` to `diag(1, 1 - v)` with the
    /// expected matrix at the halfway point.
    pub ok: bool,
}

/// The four-operation word sliding `1 - v` across an edge whose two ends
/// carry the labels `a` and `b` (with `v = a * b`).
pub fn edge_word(a: &RingElem, b: &RingElem) -> Vec<ElementaryOp> {
    vec![
        ElementaryOp::AddRow { from: 1, to: 0, coeff: -b },
        ElementaryOp::AddColumn { from: 1, to: 0, coeff: -a },
        ElementaryOp::AddColumn { from: 0, to: 1, coeff: b.clone() },
        ElementaryOp::AddRow { from: 0, to: 1, coeff: a.clone() },
    ]
}

/// Replay the edge word and check both the halfway matrix
/// `[[1, -b], [-a, 1]]` and the final `diag(1, 1 - v)`.
pub fn verify_edge_identity(a: &RingElem, b: &RingElem) -> EdgeSlideReport {
    let v = a * b;
    let word = edge_word(a, b);
    let start = SquareMatrixR::diagonal(vec![&RingElem::one() - &v, RingElem::one()]);
    let halfway = start.applied_word(&word[..2]);
    let expected_halfway = SquareMatrixR::from_rows(vec![
        vec![RingElem::one(), -b],
        vec![-a, RingElem::one()],
    ]);
    let finish = halfway.applied_word(&word[2..]);
    let expected_finish =
        SquareMatrixR::diagonal(vec![RingElem::one(), &RingElem::one() - &v]);
    EdgeSlideReport { v, ok: halfway == expected_halfway && finish == expected_finish }
}

/// Outcome of replaying the vertex word on the 3x3 identity.
#[derive(Clone, Debug)]
pub struct VertexSlideReport {
    /// `v = b1 * b2 * b3`.
    pub v: RingElem,
    /// `a_i = b_j * b_k` for `(i, j, k)` cyclic.
    pub a: [RingElem; 3],
    /// `c_i = -b_i`.
    pub c: [RingElem; 3],
    /// Whether the nine-operation word multiplied out to the identity.
    pub ok: bool,
}

/// The nine column operations around a trivalent vertex with branch labels
/// `b`, derived labels `a`, and closing labels `c`, in the fixed left-to-right
/// order that makes the product collapse.
pub fn vertex_word(
    b: &[RingElem; 3],
    a: &[RingElem; 3],
    c: &[RingElem; 3],
) -> Vec<ElementaryOp> {
    vec![
        ElementaryOp::AddColumn { from: 1, to: 2, coeff: c[0].clone() },
        ElementaryOp::AddColumn { from: 1, to: 0, coeff: -&a[2] },
        ElementaryOp::AddColumn { from: 0, to: 1, coeff: b[2].clone() },
        ElementaryOp::AddColumn { from: 2, to: 0, coeff: c[1].clone() },
        ElementaryOp::AddColumn { from: 2, to: 1, coeff: -&a[0] },
        ElementaryOp::AddColumn { from: 1, to: 2, coeff: b[0].clone() },
        ElementaryOp::AddColumn { from: 0, to: 1, coeff: c[2].clone() },
        ElementaryOp::AddColumn { from: 0, to: 2, coeff: -&a[1] },
        ElementaryOp::AddColumn { from: 2, to: 0, coeff: b[1].clone() },
    ]
}

/// Derive `a` and `c` from the branch labels, replay the word on the
/// identity, and report whether it closed up.
pub fn verify_vertex_identity(b1: &RingElem, b2: &RingElem, b3: &RingElem) -> VertexSlideReport {
    let b = [b1.clone(), b2.clone(), b3.clone()];
    let a = [b2 * b3, b3 * b1, b1 * b2];
    let c = [-b1, -b2, -b3];
    let v = &(b1 * b2) * b3;
    debug_assert_eq!(&(&a[0] * &a[1]) * &a[2], &v * &v);
    let word = vertex_word(&b, &a, &c);
    let ok = SquareMatrixR::identity(3).applied_word(&word).is_identity();
    VertexSlideReport { v, a, c, ok }
}

/// A uniformly mixed unit `±u^j (1-u)^k` with small exponents, for feeding
/// the identity verifiers random instances.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> RingElem {
    let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
    RingElem::unit(sign, rng.gen_range(-3..=3), rng.gen_range(-2..=2))
}
