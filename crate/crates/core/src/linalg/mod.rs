//! Dense matrices over GF(2^m).
//!
//! Elimination routines ([`ge_solve`], [`rank`]) take their matrix by value
//! and use it as the working buffer; clone first if the original is still
//! needed. Everything else borrows.

mod elim;
mod vandermonde;

use std::fmt;

use thiserror::Error;

use crate::galois::{FieldCtx, Gf};

pub use elim::{ge_solve, ge_solve_counted, rank, rank_counted, Gf2Basis, SolveOutcome};
pub use vandermonde::{
    vandermonde_inverse, vandermonde_l_inverse, vandermonde_u_inverse, VandermondeFactors,
    VandermondeSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inconsistent linear system (augmented rank exceeds coefficient rank)")]
    Inconsistent,
    #[error("Vandermonde nodes are not pairwise distinct")]
    DegenerateNodes,
    #[error("Vandermonde nodes must be non-zero")]
    ZeroNode,
    #[error("{nodes} distinct non-zero nodes do not exist in GF({order})")]
    TooManyNodes { nodes: usize, order: u32 },
    #[error("entry {value} is not an element of GF({order})")]
    EntryOutOfRange { value: u8, order: u32 },
    #[error("operands live in different fields")]
    FieldMismatch,
}

/// Row-major dense matrix over a fixed field.
#[derive(Clone)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
    field: &'static FieldCtx,
}

impl PartialEq for MatrixGF {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field == other.field
            && self.data == other.data
    }
}

impl Eq for MatrixGF {}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixGF {}x{} over GF({}) [", self.rows, self.cols, self.field.order())?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.0.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl MatrixGF {
    pub fn zeros(field: &'static FieldCtx, rows: usize, cols: usize) -> Self {
        MatrixGF {
            rows,
            cols,
            data: vec![Gf::ZERO; rows * cols],
            field,
        }
    }

    pub fn identity(field: &'static FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Gf::ONE);
        }
        m
    }

    pub fn from_fn(
        field: &'static FieldCtx,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Gf,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        MatrixGF {
            rows,
            cols,
            data,
            field,
        }
    }

    /// Builds a matrix from raw integer rows, checking shape and range.
    pub fn from_rows<R: AsRef<[u8]>>(
        field: &'static FieldCtx,
        rows: &[R],
    ) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for &v in r {
                if u32::from(v) >= field.order() {
                    return Err(LinalgError::EntryOutOfRange {
                        value: v,
                        order: field.order(),
                    });
                }
                data.push(Gf(v));
            }
        }
        Ok(MatrixGF {
            rows: rows.len(),
            cols,
            data,
            field,
        })
    }

    /// Wraps a row-major buffer. Entries must already be field elements.
    pub fn from_vec(
        field: &'static FieldCtx,
        rows: usize,
        cols: usize,
        data: Vec<Gf>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| u32::from(v.0) >= field.order()) {
            return Err(LinalgError::EntryOutOfRange {
                value: v.0,
                order: field.order(),
            });
        }
        Ok(MatrixGF {
            rows,
            cols,
            data,
            field,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> &'static FieldCtx {
        self.field
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Gf) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Gf] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Gf] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Gf> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn as_slice(&self) -> &[Gf] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Gf> {
        self.data
    }

    #[inline]
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Mutable access to a pivot row and a target row at the same time.
    #[inline]
    pub(crate) fn row_pair_mut(&mut self, src: usize, dst: usize) -> (&[Gf], &mut [Gf]) {
        assert_ne!(src, dst);
        let c = self.cols;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * c);
            (&head[src * c..(src + 1) * c], &mut tail[..c])
        } else {
            let (head, tail) = self.data.split_at_mut(src * c);
            (&tail[..c], &mut head[dst * c..(dst + 1) * c])
        }
    }

    pub fn transpose(&self) -> MatrixGF {
        MatrixGF::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> MatrixGF {
        MatrixGF::from_fn(self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> MatrixGF {
        MatrixGF::from_fn(self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    pub fn mul(&self, rhs: &MatrixGF) -> Result<MatrixGF, LinalgError> {
        if self.field != rhs.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = MatrixGF::zeros(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if !a.is_zero() {
                    let (src, dst) = (rhs.row(k), &mut out.data[r * rhs.cols..(r + 1) * rhs.cols]);
                    self.field.axpy(dst, a, src);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Gf]) -> Result<Vec<Gf>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| self.field.dot(self.row(r), v)).collect())
    }

    /// Row vector times matrix: `v · self`.
    pub fn vec_mul(&self, v: &[Gf]) -> Result<Vec<Gf>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} times {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![Gf::ZERO; self.cols];
        for (r, &a) in v.iter().enumerate() {
            self.field.axpy(&mut out, a, self.row(r));
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                self.row(r)
                    .iter()
                    .enumerate()
                    .all(|(c, &v)| v == if r == c { Gf::ONE } else { Gf::ZERO })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}
