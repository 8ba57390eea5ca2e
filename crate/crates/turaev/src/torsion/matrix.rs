//! Dense exact matrices over a [`FieldOps`](super::field::FieldOps) context,
//! with the Gaussian elimination the torsion engine is built on. No floats
//! anywhere: rank, pivots, determinants, and inverses are all exact.

use super::field::FieldOps;

/// Which way the elimination scans for pivot columns. Both give valid pivot
/// sets; having two lets the engine check that its answers do not depend on
/// the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Scan columns left to right (the default).
    Forward,
    /// Scan columns right to left.
    Backward,
}

/// Row-major matrix with entries in the field `F::Elem`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: FieldOps> {
    field: F,
    rows: usize,
    cols: usize,
    entries: Vec<F::Elem>,
}

impl<F: FieldOps> Matrix<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        Matrix { field, rows, cols, entries }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    /// # Panics
    ///
    /// Panics when the rows have uneven lengths.
    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Self {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "all rows must have length {cols}");
            entries.extend(row);
        }
        Matrix { field, rows: nrows, cols, entries }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &F::Elem {
        assert!(row < self.rows && col < self.cols);
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: F::Elem) {
        assert!(row < self.rows && col < self.cols);
        self.entries[row * self.cols + col] = value;
    }

    pub fn matmul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let f = self.field.clone();
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = out.field.zero();
                for k in 0..self.cols {
                    let term = out.field.mul(self.get(i, k), other.get(k, j));
                    acc = out.field.add(&acc, &term);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `col[to] += coeff * col[from]`.
    pub fn add_col_multiple(&mut self, from: usize, to: usize, coeff: &F::Elem) {
        assert!(from != to && from < self.cols && to < self.cols);
        for i in 0..self.rows {
            let add = self.field.mul(self.get(i, from), coeff);
            let sum = self.field.add(self.get(i, to), &add);
            self.set(i, to, sum);
        }
    }

    /// `row[to] += coeff * row[from]`.
    pub fn add_row_multiple(&mut self, from: usize, to: usize, coeff: &F::Elem) {
        assert!(from != to && from < self.rows && to < self.rows);
        for j in 0..self.cols {
            let add = self.field.mul(coeff, self.get(from, j));
            let sum = self.field.add(self.get(to, j), &add);
            self.set(to, j, sum);
        }
    }

    /// The submatrix picking out the given rows and columns, in the given
    /// order (indices may repeat or permute).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let mut out = Matrix::zero(self.field.clone(), rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Pivot columns of an exact row elimination, sorted ascending. The
    /// selected columns are linearly independent and span the column space,
    /// whichever strategy is used.
    pub fn pivot_columns(&self, strategy: PivotStrategy) -> Vec<usize> {
        let order: Vec<usize> = match strategy {
            PivotStrategy::Forward => (0..self.cols).collect(),
            PivotStrategy::Backward => (0..self.cols).rev().collect(),
        };
        let f = &self.field;
        let mut work = self.entries.clone();
        let at = |w: &Vec<F::Elem>, r: usize, c: usize| w[r * self.cols + c].clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for &col in &order {
            if pivot_row == self.rows {
                break;
            }
            let Some(r) = (pivot_row..self.rows).find(|&r| !f.is_zero(&at(&work, r, col)))
            else {
                continue;
            };
            for c in 0..self.cols {
                work.swap(r * self.cols + c, pivot_row * self.cols + c);
            }
            let pivot = at(&work, pivot_row, col);
            for r2 in (pivot_row + 1)..self.rows {
                let lead = at(&work, r2, col);
                if f.is_zero(&lead) {
                    continue;
                }
                let factor = f.div(&lead, &pivot);
                for c in 0..self.cols {
                    let sub = f.mul(&factor, &at(&work, pivot_row, c));
                    let val = f.sub(&at(&work, r2, c), &sub);
                    work[r2 * self.cols + c] = val;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        pivots.sort_unstable();
        pivots
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns(PivotStrategy::Forward).len()
    }

    /// Exact determinant (square matrices).
    pub fn det(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols, "determinant of a square matrix");
        let f = &self.field;
        let n = self.rows;
        let mut work = self.entries.clone();
        let at = |w: &Vec<F::Elem>, r: usize, c: usize| w[r * n + c].clone();
        let mut negate = false;
        let mut det = f.one();
        for col in 0..n {
            let Some(r) = (col..n).find(|&r| !f.is_zero(&at(&work, r, col))) else {
                return f.zero();
            };
            if r != col {
                for c in 0..n {
                    work.swap(r * n + c, col * n + c);
                }
                negate = !negate;
            }
            let pivot = at(&work, col, col);
            det = f.mul(&det, &pivot);
            for r2 in (col + 1)..n {
                let lead = at(&work, r2, col);
                if f.is_zero(&lead) {
                    continue;
                }
                let factor = f.div(&lead, &pivot);
                for c in col..n {
                    let sub = f.mul(&factor, &at(&work, col, c));
                    let val = f.sub(&at(&work, r2, c), &sub);
                    work[r2 * n + c] = val;
                }
            }
        }
        if negate {
            det = f.neg(&det);
        }
        det
    }

    /// Exact inverse, or `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "inverse of a square matrix");
        let f = self.field.clone();
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Matrix::identity(f, n);
        let f = &self.field;
        for col in 0..n {
            let r = (col..n).find(|&r| !f.is_zero(work.get(r, col)))?;
            if r != col {
                for c in 0..n {
                    let a = work.get(r, c).clone();
                    let b = work.get(col, c).clone();
                    work.set(r, c, b);
                    work.set(col, c, a);
                    let a = inv.get(r, c).clone();
                    let b = inv.get(col, c).clone();
                    inv.set(r, c, b);
                    inv.set(col, c, a);
                }
            }
            let pivot_inv = f.inv(work.get(col, col));
            for c in 0..n {
                let w = f.mul(work.get(col, c), &pivot_inv);
                work.set(col, c, w);
                let v = f.mul(inv.get(col, c), &pivot_inv);
                inv.set(col, c, v);
            }
            for r2 in 0..n {
                if r2 == col {
                    continue;
                }
                let lead = work.get(r2, col).clone();
                if f.is_zero(&lead) {
                    continue;
                }
                for c in 0..n {
                    let sub = f.mul(&lead, work.get(col, c));
                    let val = f.sub(work.get(r2, c), &sub);
                    work.set(r2, c, val);
                    let sub = f.mul(&lead, inv.get(col, c));
                    let val = f.sub(inv.get(r2, c), &sub);
                    inv.set(r2, c, val);
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.field.is_one(self.get(i, j))
                    } else {
                        self.field.is_zero(self.get(i, j))
                    }
                })
            })
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }
}
