//! Torsion of based free acyclic chain complexes, computed exactly.
//!
//! A complex enters as a list of ranks and boundary matrices over a
//! coefficient field. The engine checks `∂∂ = 0`, certifies acyclicity by
//! exact rank counting, builds a chain contraction `δ` (with `∂δ + δ∂ = 1`)
//! from elimination pivots, and reports the determinant of the assembled
//! odd-to-even map `∂ + δ` as a unit defined up to sign. An independent
//! second algorithm — the alternating product of pivotal minors — serves as
//! a cross-check, and quotient helpers coarsen values from "up to sign" to
//! "up to sign and a unit subgroup" with a deterministic canonical
//! representative.

pub mod field;
pub mod matrix;

pub use field::{CycField, FieldOps, Rationals};
pub use matrix::{Matrix, PivotStrategy};

use num_traits::Signed;
use num_traits::Zero;
use thiserror::Error;

use crate::ring::{Cyclotomic, RingElem, Sign, UnitUpToSign};
use crate::slides::SquareMatrixR;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("expected {expected} boundary matrices for {degrees} degrees, got {found}")]
    BoundaryCountMismatch { degrees: usize, expected: usize, found: usize },
    #[error(
        "boundary {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}"
    )]
    ShapeMismatch {
        degree: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("composite of the boundaries into degree {degree} is nonzero")]
    CompositionNonzero { degree: usize },
    #[error("not acyclic: homology of rank {homology_rank} survives in degree {degree}")]
    NotAcyclic { degree: usize, homology_rank: usize },
    #[error("total odd rank {odd} differs from total even rank {even}")]
    RankMismatch { odd: usize, even: usize },
    #[error("determinant {det} is not a unit of the ground ring")]
    NonUnitDeterminant { det: String },
    #[error("{elem} is not a unit of the ground ring")]
    NotAUnit { elem: String },
    #[error("degree {degree} has {found} basis labels, expected {expected}")]
    LabelCountMismatch { degree: usize, expected: usize, found: usize },
    #[error("partition part {part} has {even} even and {odd} odd generators")]
    UnbalancedPartition { part: usize, even: usize, odd: usize },
    #[error("partition must list every generator exactly once")]
    PartitionNotAPartition,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Based free chain complex `C_0 .. C_d` with boundaries `∂_k: C_k →
/// C_{k−1}`. Basis labels and a partition of the generators may ride along
/// as metadata; they never influence the arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex<F: FieldOps> {
    field: F,
    ranks: Vec<usize>,
    boundaries: Vec<Matrix<F>>,
    basis_labels: Option<Vec<Vec<String>>>,
    partition: Option<Vec<Vec<(usize, usize)>>>,
}

impl<F: FieldOps> ChainComplex<F> {
    /// Build and validate: boundary count, shapes, and `∂∂ = 0`.
    pub fn new(
        field: F,
        ranks: Vec<usize>,
        boundaries: Vec<Matrix<F>>,
    ) -> Result<Self, TorsionError> {
        let expected = ranks.len().saturating_sub(1);
        if boundaries.len() != expected {
            return Err(TorsionError::BoundaryCountMismatch {
                degrees: ranks.len(),
                expected,
                found: boundaries.len(),
            });
        }
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            if b.rows() != ranks[k - 1] || b.cols() != ranks[k] {
                return Err(TorsionError::ShapeMismatch {
                    degree: k,
                    rows: b.rows(),
                    cols: b.cols(),
                    expected_rows: ranks[k - 1],
                    expected_cols: ranks[k],
                });
            }
        }
        for k in 1..expected {
            // ∂_k ∘ ∂_{k+1} lands in degree k−1
            if !boundaries[k - 1].matmul(&boundaries[k]).is_zero_matrix() {
                return Err(TorsionError::CompositionNonzero { degree: k - 1 });
            }
        }
        Ok(ChainComplex { field, ranks, boundaries, basis_labels: None, partition: None })
    }

    /// Attach one label per generator, degree by degree.
    pub fn with_basis_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, TorsionError> {
        if labels.len() != self.ranks.len() {
            return Err(TorsionError::LabelCountMismatch {
                degree: labels.len().min(self.ranks.len()),
                expected: self.ranks.len(),
                found: labels.len(),
            });
        }
        for (degree, (per_degree, &rank)) in labels.iter().zip(&self.ranks).enumerate() {
            if per_degree.len() != rank {
                return Err(TorsionError::LabelCountMismatch {
                    degree,
                    expected: rank,
                    found: per_degree.len(),
                });
            }
        }
        self.basis_labels = Some(labels);
        Ok(self)
    }

    /// Attach a partition of the generators (pairs `(degree, index)`); every
    /// part must balance its even- and odd-degree members.
    pub fn with_partition(
        mut self,
        parts: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self, TorsionError> {
        let mut seen = vec![false; self.ranks.iter().sum()];
        let flat_index = |degree: usize, index: usize, ranks: &[usize]| -> Option<usize> {
            if degree >= ranks.len() || index >= ranks[degree] {
                return None;
            }
            Some(ranks[..degree].iter().sum::<usize>() + index)
        };
        for (p, part) in parts.iter().enumerate() {
            let mut even = 0usize;
            let mut odd = 0usize;
            for &(degree, index) in part {
                let Some(flat) = flat_index(degree, index, &self.ranks) else {
                    return Err(TorsionError::PartitionNotAPartition);
                };
                if seen[flat] {
                    return Err(TorsionError::PartitionNotAPartition);
                }
                seen[flat] = true;
                if degree % 2 == 0 {
                    even += 1;
                } else {
                    odd += 1;
                }
            }
            if even != odd {
                return Err(TorsionError::UnbalancedPartition { part: p, even, odd });
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(TorsionError::PartitionNotAPartition);
        }
        self.partition = Some(parts);
        Ok(self)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn basis_labels(&self) -> Option<&[Vec<String>]> {
        self.basis_labels.as_deref()
    }

    pub fn partition(&self) -> Option<&[Vec<(usize, usize)>]> {
        self.partition.as_deref()
    }

    fn rank_at(&self, degree: usize) -> usize {
        self.ranks.get(degree).copied().unwrap_or(0)
    }

    /// The boundary `∂_k`, materialized as a zero map outside `1..=d`.
    pub fn boundary(&self, k: usize) -> Matrix<F> {
        if k >= 1 && k <= self.boundaries.len() {
            self.boundaries[k - 1].clone()
        } else {
            let rows = if k == 0 { 0 } else { self.rank_at(k - 1) };
            Matrix::zero(self.field.clone(), rows, self.rank_at(k))
        }
    }

    /// Replace one boundary matrix, revalidating the whole complex.
    pub fn with_boundary(&self, k: usize, m: Matrix<F>) -> Result<Self, TorsionError> {
        self.with_boundaries([(k, m)])
    }

    /// Replace several boundary maps at once and revalidate. A basis change
    /// in degree `k` touches `∂_k` and `∂_{k+1}` together, and the complex
    /// is only well formed again after both replacements.
    pub fn with_boundaries(
        &self,
        replacements: impl IntoIterator<Item = (usize, Matrix<F>)>,
    ) -> Result<Self, TorsionError> {
        let mut boundaries = self.boundaries.clone();
        for (k, m) in replacements {
            assert!(k >= 1 && k <= boundaries.len(), "degree {k} has no stored boundary");
            boundaries[k - 1] = m;
        }
        let rebuilt = ChainComplex::new(self.field.clone(), self.ranks.clone(), boundaries)?;
        Ok(ChainComplex {
            basis_labels: self.basis_labels.clone(),
            partition: self.partition.clone(),
            ..rebuilt
        })
    }

    fn pivot_sets(&self, strategy: PivotStrategy) -> Vec<Vec<usize>> {
        // index k holds the pivot columns of ∂_k; k = 0 and k = d+1 stay empty
        let mut sets = vec![Vec::new(); self.ranks.len() + 2];
        for k in 1..=self.boundaries.len() {
            sets[k] = self.boundaries[k - 1].pivot_columns(strategy);
        }
        sets
    }

    fn check_acyclic(&self, pivots: &[Vec<usize>]) -> Result<(), TorsionError> {
        for (degree, &n) in self.ranks.iter().enumerate() {
            let below = pivots[degree].len();
            let above = pivots[degree + 1].len();
            if below + above != n {
                return Err(TorsionError::NotAcyclic {
                    degree,
                    homology_rank: n - below - above,
                });
            }
        }
        Ok(())
    }
}

/// A chain contraction: maps `δ_k: C_k → C_{k+1}` with `∂δ + δ∂ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contraction<F: FieldOps> {
    /// `maps[k]` is `δ_k`, of shape `n_{k+1} × n_k` (the last one has no
    /// rows).
    pub maps: Vec<Matrix<F>>,
}

/// Build a contraction from elimination pivots: in each degree the pivot
/// columns of `∂_k` split off a complement of the cycles, and the pivot
/// columns of `∂_{k+1}` give a basis of the cycles to invert against.
pub fn find_contraction<F: FieldOps>(
    c: &ChainComplex<F>,
) -> Result<Contraction<F>, TorsionError> {
    find_contraction_with(c, PivotStrategy::Forward)
}

/// As [`find_contraction`], with an explicit pivot-scanning strategy; the
/// resulting contractions differ but every torsion class downstream agrees.
pub fn find_contraction_with<F: FieldOps>(
    c: &ChainComplex<F>,
    strategy: PivotStrategy,
) -> Result<Contraction<F>, TorsionError> {
    let pivots = c.pivot_sets(strategy);
    c.check_acyclic(&pivots)?;
    let f = c.field().clone();
    let mut maps = Vec::with_capacity(c.ranks().len());
    for degree in 0..c.ranks().len() {
        let n = c.rank_at(degree);
        let up = &pivots[degree + 1]; // pivot columns of ∂_{degree+1}
        let own = &pivots[degree]; // pivot columns of ∂_degree
        let next = c.boundary(degree + 1);
        // square change-of-basis matrix: images of the upper pivots, then
        // unit vectors at this degree's own pivots
        let mut basis = Matrix::zero(f.clone(), n, n);
        for (t, &col) in up.iter().enumerate() {
            for r in 0..n {
                basis.set(r, t, next.get(r, col).clone());
            }
        }
        for (t, &row) in own.iter().enumerate() {
            basis.set(row, up.len() + t, f.one());
        }
        let inv = basis
            .inverse()
            .expect("pivot complement must be invertible once acyclicity is certified");
        let mut delta = Matrix::zero(f.clone(), c.rank_at(degree + 1), n);
        for (t, &target) in up.iter().enumerate() {
            for i in 0..n {
                delta.set(target, i, inv.get(t, i).clone());
            }
        }
        maps.push(delta);
    }
    Ok(Contraction { maps })
}

/// Entrywise check of `∂δ + δ∂ = 1` in every degree (and of the shapes).
pub fn verify_contraction<F: FieldOps>(c: &ChainComplex<F>, delta: &Contraction<F>) -> bool {
    if delta.maps.len() != c.ranks().len() {
        return false;
    }
    for (k, map) in delta.maps.iter().enumerate() {
        if map.rows() != c.rank_at(k + 1) || map.cols() != c.rank_at(k) {
            return false;
        }
    }
    for k in 0..c.ranks().len() {
        let mut sum = c.boundary(k + 1).matmul(&delta.maps[k]);
        if k > 0 {
            let other = delta.maps[k - 1].matmul(&c.boundary(k));
            for i in 0..sum.rows() {
                for j in 0..sum.cols() {
                    let v = c.field().add(sum.get(i, j), other.get(i, j));
                    sum.set(i, j, v);
                }
            }
        }
        if !sum.is_identity() {
            return false;
        }
    }
    true
}

/// How much ambiguity a torsion value is reported with.
#[derive(Clone, Debug, PartialEq)]
pub enum Indeterminacy<T> {
    /// Defined up to multiplication by −1.
    PlusMinusOne,
    /// Defined up to −1 and the subgroup generated by the listed units.
    PlusMinusSubgroup(Vec<T>),
}

/// A nonzero torsion value together with its declared ambiguity.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue<T> {
    pub value: T,
    pub modulo: Indeterminacy<T>,
}

fn assemble_odd_to_even<F: FieldOps>(
    c: &ChainComplex<F>,
    delta: &Contraction<F>,
) -> Matrix<F> {
    let degrees = c.ranks().len();
    let mut even_offset = vec![usize::MAX; degrees];
    let mut odd_offset = vec![usize::MAX; degrees];
    let mut even_total = 0;
    let mut odd_total = 0;
    for k in 0..degrees {
        if k % 2 == 0 {
            even_offset[k] = even_total;
            even_total += c.rank_at(k);
        } else {
            odd_offset[k] = odd_total;
            odd_total += c.rank_at(k);
        }
    }
    let mut m = Matrix::zero(c.field().clone(), even_total, odd_total);
    for q in (1..degrees).step_by(2) {
        let col0 = odd_offset[q];
        let down = c.boundary(q);
        let row0 = even_offset[q - 1];
        for i in 0..down.rows() {
            for j in 0..down.cols() {
                m.set(row0 + i, col0 + j, down.get(i, j).clone());
            }
        }
        if q + 1 < degrees {
            let up = &delta.maps[q];
            let row0 = even_offset[q + 1];
            for i in 0..up.rows() {
                for j in 0..up.cols() {
                    m.set(row0 + i, col0 + j, up.get(i, j).clone());
                }
            }
        }
    }
    m
}

fn check_rank_balance<F: FieldOps>(c: &ChainComplex<F>) -> Result<(), TorsionError> {
    let (mut odd, mut even) = (0usize, 0usize);
    for (k, &n) in c.ranks().iter().enumerate() {
        if k % 2 == 0 {
            even += n;
        } else {
            odd += n;
        }
    }
    if odd != even {
        return Err(TorsionError::RankMismatch { odd, even });
    }
    Ok(())
}

/// Torsion as the determinant of `∂ + δ: C_odd → C_even`, up to sign.
pub fn torsion_det<F: FieldOps>(
    c: &ChainComplex<F>,
) -> Result<TorsionValue<F::Elem>, TorsionError> {
    torsion_det_with(c, PivotStrategy::Forward)
}

/// As [`torsion_det`] with an explicit pivot strategy for the contraction.
pub fn torsion_det_with<F: FieldOps>(
    c: &ChainComplex<F>,
    strategy: PivotStrategy,
) -> Result<TorsionValue<F::Elem>, TorsionError> {
    check_rank_balance(c)?;
    let delta = find_contraction_with(c, strategy)?;
    let det = assemble_odd_to_even(c, &delta).det();
    assert!(!c.field().is_zero(&det), "the assembled odd-to-even map must be invertible");
    Ok(TorsionValue { value: det, modulo: Indeterminacy::PlusMinusOne })
}

/// The independent second algorithm: the alternating product over degrees of
/// the minor of `∂_k` on rows complementary to the lower pivot set and
/// columns equal to its own pivot set.
pub fn torsion_minors<F: FieldOps>(
    c: &ChainComplex<F>,
) -> Result<TorsionValue<F::Elem>, TorsionError> {
    torsion_minors_with(c, PivotStrategy::Forward)
}

/// As [`torsion_minors`] with an explicit pivot strategy.
pub fn torsion_minors_with<F: FieldOps>(
    c: &ChainComplex<F>,
    strategy: PivotStrategy,
) -> Result<TorsionValue<F::Elem>, TorsionError> {
    check_rank_balance(c)?;
    let pivots = c.pivot_sets(strategy);
    c.check_acyclic(&pivots)?;
    let f = c.field();
    let mut acc = f.one();
    for k in 1..c.ranks().len() {
        let rows = complement(c.rank_at(k - 1), &pivots[k - 1]);
        let minor = c.boundary(k).submatrix(&rows, &pivots[k]);
        let det = minor.det();
        assert!(!f.is_zero(&det), "pivotal minor in degree {k} must be invertible");
        acc = if k % 2 == 1 { f.mul(&acc, &det) } else { f.div(&acc, &det) };
    }
    Ok(TorsionValue { value: acc, modulo: Indeterminacy::PlusMinusOne })
}

fn complement(n: usize, sorted_subset: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(n - sorted_subset.len());
    let mut it = sorted_subset.iter().peekable();
    for i in 0..n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    out
}

/// Degree shift by one. Torsion inverts; shifting twice restores it.
pub fn suspend<F: FieldOps>(c: &ChainComplex<F>) -> ChainComplex<F> {
    if c.ranks().is_empty() {
        return c.clone();
    }
    let mut ranks = Vec::with_capacity(c.ranks().len() + 1);
    ranks.push(0);
    ranks.extend_from_slice(c.ranks());
    let mut boundaries = Vec::with_capacity(c.boundaries.len() + 1);
    boundaries.push(Matrix::zero(c.field().clone(), 0, c.rank_at(0)));
    boundaries.extend(c.boundaries.iter().cloned());
    let mut out = ChainComplex::new(c.field().clone(), ranks, boundaries)
        .expect("a shifted complex stays valid");
    if let Some(labels) = &c.basis_labels {
        let mut shifted = Vec::with_capacity(labels.len() + 1);
        shifted.push(Vec::new());
        shifted.extend(labels.iter().cloned());
        out = out.with_basis_labels(shifted).expect("shifted labels stay aligned");
    }
    if let Some(parts) = &c.partition {
        let shifted = parts
            .iter()
            .map(|part| part.iter().map(|&(d, i)| (d + 1, i)).collect())
            .collect();
        // a degree shift swaps the even/odd counts within each part, so a
        // balanced partition stays balanced
        out = out.with_partition(shifted).expect("shifted partition stays balanced");
    }
    out
}

// ---------------------------------------------------------------------------
// Quotient bookkeeping for cyclotomic torsion values
// ---------------------------------------------------------------------------

/// Flip the overall sign so the first nonzero coefficient is positive.
pub fn sign_normalize(c: &Cyclotomic) -> Cyclotomic {
    match c.coeffs().iter().find(|q| !q.is_zero()) {
        Some(q) if q.is_negative() => -c,
        _ => c.clone(),
    }
}

/// All products of the generators and their inverses. The generators must
/// have finite multiplicative order (roots of unity); the closure is capped
/// to keep a bad generator from spinning forever.
///
/// # Panics
///
/// Panics when a generator is zero or the closure exceeds 4096 elements.
pub fn enumerate_unit_subgroup(gens: &[Cyclotomic]) -> Vec<Cyclotomic> {
    assert!(!gens.is_empty(), "use the sign-only quotient for an empty generator list");
    let order = gens[0].order();
    let mut steps = Vec::with_capacity(gens.len() * 2);
    for g in gens {
        assert!(!g.is_zero(), "subgroup generators must be nonzero");
        steps.push(g.clone());
        steps.push(g.inv().expect("nonzero elements of a field are invertible"));
    }
    let mut elems = vec![Cyclotomic::one(order)];
    let mut queue = elems.clone();
    while let Some(x) = queue.pop() {
        for s in &steps {
            let y = &x * s;
            if !elems.contains(&y) {
                assert!(
                    elems.len() < 4096,
                    "unit subgroup closure exceeded 4096 elements; generators must have finite order"
                );
                elems.push(y.clone());
                queue.push(y);
            }
        }
    }
    elems
}

impl TorsionValue<Cyclotomic> {
    /// A nonzero value defined up to sign.
    pub fn up_to_sign(value: Cyclotomic) -> Self {
        assert!(!value.is_zero(), "torsion values are nonzero");
        TorsionValue { value, modulo: Indeterminacy::PlusMinusOne }
    }

    /// The canonical representative of the declared coset: every candidate
    /// is sign-normalized, and the lexicographically smallest coefficient
    /// vector wins.
    pub fn canonical_rep(&self) -> Cyclotomic {
        match &self.modulo {
            Indeterminacy::PlusMinusOne => sign_normalize(&self.value),
            Indeterminacy::PlusMinusSubgroup(gens) if gens.is_empty() => {
                sign_normalize(&self.value)
            }
            Indeterminacy::PlusMinusSubgroup(gens) => {
                let mut best: Option<Cyclotomic> = None;
                for g in enumerate_unit_subgroup(gens) {
                    let candidate = sign_normalize(&(&g * &self.value));
                    let better = match &best {
                        None => true,
                        Some(b) => candidate.coeffs() < b.coeffs(),
                    };
                    if better {
                        best = Some(candidate);
                    }
                }
                best.expect("subgroup contains the identity")
            }
        }
    }

    /// Equality in the declared quotient (both sides must declare the same
    /// ambiguity).
    pub fn same_class(&self, other: &Self) -> bool {
        assert_eq!(self.modulo, other.modulo, "comparing values with different ambiguity");
        self.canonical_rep() == other.canonical_rep()
    }
}

/// Coarsen a torsion value to the quotient by sign and the given unit
/// subgroup, storing the canonical representative.
pub fn reidemeister_class(
    t: &TorsionValue<Cyclotomic>,
    subgroup_gens: &[Cyclotomic],
) -> TorsionValue<Cyclotomic> {
    let coarse = TorsionValue {
        value: t.value.clone(),
        modulo: Indeterminacy::PlusMinusSubgroup(subgroup_gens.to_vec()),
    };
    TorsionValue { value: coarse.canonical_rep(), modulo: coarse.modulo }
}

// ---------------------------------------------------------------------------
// The direct ground-ring route (no field evaluation)
// ---------------------------------------------------------------------------

/// Torsion of a complex whose assembled odd-to-even matrix is already over
/// the ground ring: take the determinant and insist it is a unit.
pub fn torsion_det_over_ground_ring(
    m: &SquareMatrixR,
) -> Result<TorsionValue<RingElem>, TorsionError> {
    let det = m.det();
    if det.is_unit().is_none() {
        return Err(TorsionError::NonUnitDeterminant { det: det.to_string() });
    }
    Ok(TorsionValue { value: det, modulo: Indeterminacy::PlusMinusOne })
}

impl TorsionValue<RingElem> {
    /// A nonzero value defined up to sign.
    pub fn up_to_sign_units(value: RingElem) -> Self {
        assert!(!value.is_zero(), "torsion values are nonzero");
        TorsionValue { value, modulo: Indeterminacy::PlusMinusOne }
    }

    /// The sign-free exponent pair of the canonical representative.
    ///
    /// Errors when the value is not a unit (no unit canonical form exists).
    pub fn canonical_rep(&self) -> Result<UnitUpToSign, TorsionError> {
        let parts = self
            .value
            .is_unit()
            .ok_or_else(|| TorsionError::NotAUnit { elem: self.value.to_string() })?;
        let (a, b) = match &self.modulo {
            Indeterminacy::PlusMinusOne => (parts.u_exp, parts.one_minus_u_exp),
            Indeterminacy::PlusMinusSubgroup(gens) => {
                let mut vectors = Vec::with_capacity(gens.len());
                for g in gens {
                    let gp = g
                        .is_unit()
                        .ok_or_else(|| TorsionError::NotAUnit { elem: g.to_string() })?;
                    vectors.push((gp.u_exp, gp.one_minus_u_exp));
                }
                reduce_unit_exponents(parts.u_exp, parts.one_minus_u_exp, &vectors)
            }
        };
        Ok(UnitUpToSign { u_exp: a, one_minus_u_exp: b })
    }

    /// Equality in the declared quotient.
    ///
    /// # Panics
    ///
    /// Panics when a value under a subgroup quotient is not a unit; torsion
    /// values over the ground ring are units by construction.
    pub fn same_class(&self, other: &Self) -> bool {
        assert_eq!(self.modulo, other.modulo, "comparing values with different ambiguity");
        match &self.modulo {
            Indeterminacy::PlusMinusOne => {
                self.value == other.value || self.value == -&other.value
            }
            Indeterminacy::PlusMinusSubgroup(_) => {
                let a = self.canonical_rep().expect("unit torsion value");
                let b = other.canonical_rep().expect("unit torsion value");
                a == b
            }
        }
    }
}

/// Coarsen a unit torsion value over the ground ring by the exponent lattice
/// of the generators.
pub fn reidemeister_class_units(
    t: &TorsionValue<RingElem>,
    subgroup_gens: &[RingElem],
) -> Result<TorsionValue<RingElem>, TorsionError> {
    let coarse = TorsionValue {
        value: t.value.clone(),
        modulo: Indeterminacy::PlusMinusSubgroup(subgroup_gens.to_vec()),
    };
    let rep = coarse.canonical_rep()?;
    Ok(TorsionValue {
        value: RingElem::unit(Sign::Plus, rep.u_exp, rep.one_minus_u_exp),
        modulo: coarse.modulo,
    })
}

/// Reduce an exponent pair modulo the lattice spanned by the generator
/// exponent pairs: first make the `u`-exponent minimal in absolute value
/// (preferring the non-negative one on ties), then do the same for the
/// `1−u` exponent with what freedom remains.
fn reduce_unit_exponents(a: i64, b: i64, gens: &[(i64, i64)]) -> (i64, i64) {
    let mut rows: Vec<(i64, i64)> = gens.iter().copied().filter(|&r| r != (0, 0)).collect();
    // Euclid sweep on the first coordinates until at most one row keeps a
    // nonzero first coordinate
    loop {
        let nonzero: Vec<usize> =
            (0..rows.len()).filter(|&i| rows[i].0 != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let &pivot = nonzero
            .iter()
            .min_by_key(|&&i| rows[i].0.abs())
            .expect("nonzero list is nonempty");
        let (pa, pb) = rows[pivot];
        for &i in &nonzero {
            if i == pivot {
                continue;
            }
            let q = rows[i].0 / pa;
            rows[i].0 -= q * pa;
            rows[i].1 -= q * pb;
        }
    }
    let primary = rows.iter().find(|r| r.0 != 0).map(|&(x, y)| if x < 0 { (-x, -y) } else { (x, y) });
    let mut secondary = 0i64;
    for r in rows.iter().filter(|r| r.0 == 0) {
        secondary = gcd_i64(secondary, r.1);
    }
    let (mut a, mut b) = (a, b);
    if let Some((d1, e1)) = primary {
        let reduced = minimal_residue(a, d1);
        let k = (a - reduced) / d1;
        a = reduced;
        b -= k * e1;
    }
    if secondary > 0 {
        b = minimal_residue(b, secondary);
    }
    (a, b)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The residue of `x` modulo `m > 0` with minimal absolute value, preferring
/// the non-negative representative on ties.
fn minimal_residue(x: i64, m: i64) -> i64 {
    let r = x.rem_euclid(m);
    if 2 * r > m {
        r - m
    } else {
        r
    }
}

// ---------------------------------------------------------------------------
// Plain-text serialization for golden tests
// ---------------------------------------------------------------------------

/// Render a complex as a ranks header plus one `boundary k` section per
/// nonempty boundary matrix, rows comma-separated. Metadata is not
/// serialized.
pub fn render_complex<F: FieldOps>(c: &ChainComplex<F>) -> String {
    let mut out = String::from("ranks");
    for r in c.ranks() {
        out.push_str(&format!(" {r}"));
    }
    out.push('\n');
    for k in 1..c.ranks().len() {
        if c.rank_at(k - 1) == 0 || c.rank_at(k) == 0 {
            continue;
        }
        out.push_str(&format!("boundary {k}\n"));
        let b = c.boundary(k);
        for i in 0..b.rows() {
            let row: Vec<String> = (0..b.cols()).map(|j| b.get(i, j).to_string()).collect();
            out.push_str(&row.join(", "));
            out.push('\n');
        }
    }
    out
}

/// Parse the [`render_complex`] format. Boundary sections may be omitted for
/// zero matrices; `#` starts a comment. Entries are handed to the supplied
/// scalar parser.
pub fn parse_complex<F: FieldOps>(
    field: F,
    text: &str,
    parse_entry: impl Fn(&str) -> Result<F::Elem, String>,
) -> Result<ChainComplex<F>, TorsionError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines
        .next()
        .ok_or(TorsionError::Parse { line: 1, msg: "empty document".into() })?;
    let Some(rest) = header.strip_prefix("ranks") else {
        return Err(TorsionError::Parse { line, msg: "expected a `ranks` header".into() });
    };
    let ranks: Vec<usize> = rest
        .split_whitespace()
        .map(|w| {
            w.parse::<usize>().map_err(|_| TorsionError::Parse {
                line,
                msg: format!("bad rank `{w}`"),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut boundaries: Vec<Matrix<F>> = (1..ranks.len())
        .map(|k| Matrix::zero(field.clone(), ranks[k - 1], ranks[k]))
        .collect();
    while let Some((line, header)) = lines.next() {
        let Some(rest) = header.strip_prefix("boundary") else {
            return Err(TorsionError::Parse {
                line,
                msg: format!("expected `boundary <k>`, found `{header}`"),
            });
        };
        let k: usize = rest.trim().parse().map_err(|_| TorsionError::Parse {
            line,
            msg: format!("bad boundary degree `{}`", rest.trim()),
        })?;
        if k == 0 || k >= ranks.len() {
            return Err(TorsionError::Parse {
                line,
                msg: format!("boundary degree {k} out of range"),
            });
        }
        let (rows, cols) = (ranks[k - 1], ranks[k]);
        for i in 0..rows {
            let (line, row) = lines.next().ok_or(TorsionError::Parse {
                line,
                msg: format!("boundary {k} needs {rows} rows"),
            })?;
            let cells: Vec<&str> = row.split(',').map(str::trim).collect();
            if cells.len() != cols {
                return Err(TorsionError::Parse {
                    line,
                    msg: format!("expected {cols} entries, found {}", cells.len()),
                });
            }
            for (j, cell) in cells.iter().enumerate() {
                let value = parse_entry(cell)
                    .map_err(|msg| TorsionError::Parse { line, msg })?;
                boundaries[k - 1].set(i, j, value);
            }
        }
    }
    ChainComplex::new(field, ranks, boundaries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::cyc_equal_up_to_sign;
    use crate::samples;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn two_term<F: FieldOps>(field: F, entry: F::Elem) -> ChainComplex<F> {
        let m = Matrix::from_rows(field.clone(), vec![vec![entry]], 1);
        ChainComplex::new(field, vec![1, 1], vec![m]).unwrap()
    }

    fn zeta(order: u32) -> Cyclotomic {
        Cyclotomic::zeta(order)
    }

    fn one_minus_zeta_pow(order: u32, k: i64) -> Cyclotomic {
        &Cyclotomic::one(order) - &Cyclotomic::zeta_pow(order, k)
    }

    #[test]
    fn contraction_of_scalar_complexes() {
        let c = two_term(Rationals, q(2));
        let delta = find_contraction(&c).unwrap();
        assert_eq!(delta.maps[0].get(0, 0), &BigRational::new(1.into(), 2.into()));
        assert!(verify_contraction(&c, &delta));

        let f = CycField { order: 3 };
        let c = two_term(f, one_minus_zeta_pow(3, 1));
        let delta = find_contraction(&c).unwrap();
        assert_eq!(delta.maps[0].get(0, 0), &one_minus_zeta_pow(3, 1).inv().unwrap());
        assert!(verify_contraction(&c, &delta));

        let c = two_term(Rationals, q(0));
        assert_eq!(
            find_contraction(&c).unwrap_err(),
            TorsionError::NotAcyclic { degree: 0, homology_rank: 1 }
        );
    }

    #[test]
    fn circle_complex_torsion_for_small_orders() {
        for n in [2u32, 3, 5] {
            let f = CycField { order: n };
            let c = two_term(f, one_minus_zeta_pow(n, 1));
            let t = torsion_det(&c).unwrap();
            assert!(t.same_class(&TorsionValue::up_to_sign(one_minus_zeta_pow(n, 1))), "n={n}");
            let m = torsion_minors(&c).unwrap();
            assert!(t.same_class(&m), "n={n}");
        }
    }

    #[test]
    fn block_diagonal_and_identity_examples() {
        let f = CycField { order: 5 };
        let one = Cyclotomic::one(5);
        let v = zeta(5);
        let mut m = Matrix::identity(f, 3);
        m.set(0, 0, f.sub(&one, &v));
        let c = ChainComplex::new(f, vec![3, 3], vec![m]).unwrap();
        let t = torsion_det(&c).unwrap();
        assert!(t.same_class(&TorsionValue::up_to_sign(f.sub(&one, &v))));

        let id = Matrix::identity(f, 4);
        let c = ChainComplex::new(f, vec![4, 4], vec![id]).unwrap();
        let t = torsion_det(&c).unwrap();
        assert!(t.same_class(&TorsionValue::up_to_sign(one)));
    }

    #[test]
    fn suspension_inverts_and_double_suspension_restores() {
        let f = CycField { order: 5 };
        let tau = one_minus_zeta_pow(5, 1);
        let c = two_term(f, tau.clone());
        let once = suspend(&c);
        let twice = suspend(&once);
        let t1 = torsion_det(&once).unwrap();
        assert!(t1.same_class(&TorsionValue::up_to_sign(tau.inv().unwrap())));
        let t2 = torsion_det(&twice).unwrap();
        assert!(t2.same_class(&TorsionValue::up_to_sign(tau.clone())));
        // the product of a torsion and its suspension's torsion is ±1
        let t0 = torsion_det(&c).unwrap();
        let prod = &t0.value * &t1.value;
        assert!(cyc_equal_up_to_sign(&prod, &Cyclotomic::one(5)));
    }

    #[test]
    fn empty_complex_has_unit_torsion() {
        let c = ChainComplex::new(Rationals, vec![], vec![]).unwrap();
        let t = torsion_det(&c).unwrap();
        assert_eq!(t.value, q(1));
        let s = suspend(&c);
        assert!(s.ranks().is_empty());
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let m = Matrix::zero(Rationals, 2, 1);
        let c = ChainComplex::new(Rationals, vec![2, 1], vec![m]).unwrap();
        assert_eq!(
            torsion_det(&c).unwrap_err(),
            TorsionError::RankMismatch { odd: 1, even: 2 }
        );
    }

    #[test]
    fn lens_style_complex_agrees_across_algorithms() {
        let f = CycField { order: 5 };
        let d3 = Matrix::from_rows(f, vec![vec![one_minus_zeta_pow(5, 1)]], 1);
        let d2 = Matrix::zero(f, 1, 1);
        let d1 = Matrix::from_rows(f, vec![vec![one_minus_zeta_pow(5, 2)]], 1);
        let c = ChainComplex::new(f, vec![1, 1, 1, 1], vec![d1, d2, d3]).unwrap();
        let t = torsion_det(&c).unwrap();
        let m = torsion_minors(&c).unwrap();
        assert!(t.same_class(&m));
        let expected = &one_minus_zeta_pow(5, 2) * &one_minus_zeta_pow(5, 1);
        assert!(t.same_class(&TorsionValue::up_to_sign(expected)));
    }

    #[test]
    fn random_complexes_are_contractible_and_cross_checked() {
        for seed in 0..50 {
            let (c, expected) = samples::random_acyclic_complex(5, seed);
            let delta = find_contraction(&c).unwrap();
            assert!(verify_contraction(&c, &delta), "seed {seed}");
            // δ ∘ δ = 0 degree by degree
            for k in 0..c.ranks().len().saturating_sub(1) {
                assert!(
                    delta.maps[k + 1].matmul(&delta.maps[k]).is_zero_matrix(),
                    "seed {seed} degree {k}"
                );
            }
            let t = torsion_det(&c).unwrap();
            let m = torsion_minors(&c).unwrap();
            assert!(t.same_class(&m), "seed {seed}");
            assert!(t.same_class(&TorsionValue::up_to_sign(expected)), "seed {seed}");
            // suspension inverts the class
            let s = torsion_det(&suspend(&c)).unwrap();
            let prod = &t.value * &s.value;
            assert!(cyc_equal_up_to_sign(&prod, &Cyclotomic::one(5)), "seed {seed}");
        }
    }

    #[test]
    fn contraction_strategy_does_not_change_the_class() {
        for seed in 0..10 {
            let (c, _) = samples::random_acyclic_complex(5, seed);
            let a = torsion_det_with(&c, PivotStrategy::Forward).unwrap();
            let b = torsion_det_with(&c, PivotStrategy::Backward).unwrap();
            assert!(a.same_class(&b), "seed {seed}");
            let ma = torsion_minors_with(&c, PivotStrategy::Forward).unwrap();
            let mb = torsion_minors_with(&c, PivotStrategy::Backward).unwrap();
            assert!(ma.same_class(&mb), "seed {seed}");
        }
    }

    #[test]
    fn sliding_a_boundary_word_preserves_the_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..10 {
            let (c, _) = samples::random_acyclic_complex(5, seed);
            let before = torsion_det(&c).unwrap();
            // basis change in an internal degree k: columns of ∂_k move,
            // rows of ∂_{k+1} compensate
            let k = 1 + (seed as usize % (c.ranks().len() - 2));
            let n = c.ranks()[k];
            if n < 2 {
                continue;
            }
            let from = rng.gen_range(0..n);
            let mut to = rng.gen_range(0..n - 1);
            if to >= from {
                to += 1;
            }
            let coeff = samples::random_cyclotomic(5, &mut rng);
            let mut dk = c.boundary(k);
            dk.add_col_multiple(from, to, &coeff);
            let mut dk1 = c.boundary(k + 1);
            let neg = CycField { order: 5 }.neg(&coeff);
            dk1.add_row_multiple(to, from, &neg);
            let moved = c.with_boundaries([(k, dk), (k + 1, dk1)]).unwrap();
            let after = torsion_det(&moved).unwrap();
            assert!(before.same_class(&after), "seed {seed}");
        }
    }

    #[test]
    fn permuting_generators_changes_at_most_the_sign() {
        for seed in 0..10 {
            let (c, _) = samples::random_acyclic_complex(5, seed);
            let before = torsion_det(&c).unwrap();
            let k = 1 + (seed as usize % (c.ranks().len() - 2));
            let n = c.ranks()[k];
            // rotate the basis of degree k by one slot
            let perm: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let all_rows: Vec<usize> = (0..c.ranks()[k - 1]).collect();
            let dk = c.boundary(k).submatrix(&all_rows, &perm);
            let all_cols: Vec<usize> = (0..c.ranks()[k + 1]).collect();
            let dk1 = c.boundary(k + 1).submatrix(&perm, &all_cols);
            let moved = c.with_boundaries([(k, dk), (k + 1, dk1)]).unwrap();
            let after = torsion_det(&moved).unwrap();
            assert!(before.same_class(&after), "seed {seed}");
        }
    }

    #[test]
    fn reidemeister_classes_identify_the_expected_cosets() {
        let gens = [zeta(3)];
        let tau = TorsionValue::up_to_sign(one_minus_zeta_pow(3, 1));
        let shifted = TorsionValue::up_to_sign(&zeta(3) * &one_minus_zeta_pow(3, 1));
        let a = reidemeister_class(&tau, &gens);
        let b = reidemeister_class(&shifted, &gens);
        assert_eq!(a.value, b.value);

        // the conjugate pair: distinct up to sign, same Reidemeister class
        let conj = TorsionValue::up_to_sign(one_minus_zeta_pow(3, -1));
        assert!(!cyc_equal_up_to_sign(&tau.value, &conj.value));
        let c = reidemeister_class(&conj, &gens);
        assert_eq!(a.value, c.value);

        // the trivial subgroup only sign-normalizes
        let untouched = reidemeister_class(&tau, &[]);
        assert_eq!(untouched.value, sign_normalize(&tau.value));
    }

    #[test]
    fn ground_ring_route_recognizes_units() {
        let m = SquareMatrixR::diagonal(vec![
            &RingElem::one() - &RingElem::u_pow(1),
            RingElem::one(),
        ]);
        let t = torsion_det_over_ground_ring(&m).unwrap();
        assert_eq!(t.value, &RingElem::one() - &RingElem::u_pow(1));

        let bad = SquareMatrixR::diagonal(vec![RingElem::constant(2)]);
        assert_eq!(
            torsion_det_over_ground_ring(&bad).unwrap_err(),
            TorsionError::NonUnitDeterminant { det: "2".into() }
        );
    }

    #[test]
    fn unit_exponent_reduction_drops_the_generated_directions() {
        let t = TorsionValue::up_to_sign_units(RingElem::unit(Sign::Minus, 5, 1));
        let reduced = reidemeister_class_units(&t, &[RingElem::u_pow(1)]).unwrap();
        assert_eq!(reduced.value, RingElem::one_minus_u_pow(1));

        // a ±u^a(1-u) value is in the same coarse class for any a
        let other = TorsionValue::up_to_sign_units(RingElem::unit(Sign::Plus, -2, 1));
        let reduced2 = reidemeister_class_units(&other, &[RingElem::u_pow(1)]).unwrap();
        assert_eq!(reduced.value, reduced2.value);

        // minimal-|exponent| rule with a coarser generator u^3
        let t = TorsionValue::up_to_sign_units(RingElem::u_pow(7));
        let r = reidemeister_class_units(&t, &[RingElem::u_pow(3)]).unwrap();
        assert_eq!(r.value, RingElem::u_pow(1));
        let t = TorsionValue::up_to_sign_units(RingElem::u_pow(8));
        let r = reidemeister_class_units(&t, &[RingElem::u_pow(3)]).unwrap();
        assert_eq!(r.value, RingElem::u_pow(-1));

        let nonunit = TorsionValue::up_to_sign_units(RingElem::constant(3));
        assert!(matches!(
            reidemeister_class_units(&nonunit, &[RingElem::u_pow(1)]),
            Err(TorsionError::NotAUnit { .. })
        ));
    }

    #[test]
    fn metadata_is_validated() {
        let f = Rationals;
        let m = Matrix::from_rows(f, vec![vec![q(1)]], 1);
        let c = ChainComplex::new(f, vec![1, 1], vec![m]).unwrap();
        let labeled = c
            .clone()
            .with_basis_labels(vec![vec!["p".into()], vec!["q".into()]])
            .unwrap();
        assert_eq!(labeled.basis_labels().unwrap()[1][0], "q");
        assert!(matches!(
            c.clone().with_basis_labels(vec![vec!["p".into()]]),
            Err(TorsionError::LabelCountMismatch { .. })
        ));

        let balanced = c.clone().with_partition(vec![vec![(0, 0), (1, 0)]]).unwrap();
        assert_eq!(balanced.partition().unwrap().len(), 1);
        assert_eq!(
            c.clone().with_partition(vec![vec![(0, 0)], vec![(1, 0)]]).unwrap_err(),
            TorsionError::UnbalancedPartition { part: 0, even: 1, odd: 0 }
        );
        assert_eq!(
            c.clone().with_partition(vec![vec![(0, 0), (1, 0), (1, 0)]]).unwrap_err(),
            TorsionError::PartitionNotAPartition
        );
        // suspension keeps the partition balanced by swapping parities
        let s = suspend(&balanced);
        assert_eq!(s.partition().unwrap()[0], vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn invalid_complexes_are_rejected() {
        let f = Rationals;
        let wrong_shape = Matrix::zero(f, 2, 1);
        assert!(matches!(
            ChainComplex::new(f, vec![1, 1], vec![wrong_shape]),
            Err(TorsionError::ShapeMismatch { degree: 1, .. })
        ));
        let id = Matrix::identity(f, 1);
        assert_eq!(
            ChainComplex::new(f, vec![1, 1, 1], vec![id.clone(), id]).unwrap_err(),
            TorsionError::CompositionNonzero { degree: 0 }
        );
        assert!(matches!(
            ChainComplex::new(f, vec![1, 1], vec![]),
            Err(TorsionError::BoundaryCountMismatch { .. })
        ));
    }

    #[test]
    fn text_format_round_trips_with_a_golden_rendering() {
        let f = CycField { order: 3 };
        let c = two_term(f, one_minus_zeta_pow(3, 1));
        let text = render_complex(&c);
        assert_eq!(text, "ranks 1 1\nboundary 1\n1 - z\n");
        let parsed = parse_complex(f, &text, |s| {
            Cyclotomic::parse(3, s).map_err(|e| e.to_string())
        })
        .unwrap();
        assert_eq!(parsed, c);

        // omitted boundary sections mean zero matrices
        let sparse = parse_complex(f, "ranks 1 1\n", |s| {
            Cyclotomic::parse(3, s).map_err(|e| e.to_string())
        })
        .unwrap();
        assert!(sparse.boundary(1).is_zero_matrix());
    }

    #[test]
    fn text_format_reports_line_numbers() {
        let f = CycField { order: 3 };
        let parse = |text: &str| {
            parse_complex(f, text, |s| Cyclotomic::parse(3, s).map_err(|e| e.to_string()))
        };
        assert_eq!(
            parse("boundary 1\n").unwrap_err(),
            TorsionError::Parse { line: 1, msg: "expected a `ranks` header".into() }
        );
        let err = parse("# intro\nranks 1 1\nboundary 1\n1 - w\n").unwrap_err();
        match err {
            TorsionError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected error {other:?}"),
        }
        assert_eq!(
            parse("ranks 1 1\nboundary 5\n").unwrap_err(),
            TorsionError::Parse { line: 2, msg: "boundary degree 5 out of range".into() }
        );
    }
}
