use crate::galois::Gf;
use crate::ops::OpCounter;

use super::{LinalgError, MatrixGF};

/// Result of eliminating `a · u = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Full column rank: the unique solution.
    Solved { solution: Vec<Gf>, rank: usize },
    /// The system is consistent but underdetermined.
    RankDeficient { rank: usize },
}

impl SolveOutcome {
    pub fn rank(&self) -> usize {
        match self {
            SolveOutcome::Solved { rank, .. } | SolveOutcome::RankDeficient { rank } => *rank,
        }
    }
}

/// Solves `a · u = y` by Gaussian elimination, consuming `a` and `y`.
///
/// Pivots are the first row (top-down) with a non-zero entry in the pivot
/// column.
pub fn ge_solve(a: MatrixGF, y: Vec<Gf>) -> Result<SolveOutcome, LinalgError> {
    ge_solve_counted(a, y, &mut OpCounter::disabled())
}

pub fn ge_solve_counted(
    mut a: MatrixGF,
    mut y: Vec<Gf>,
    ops: &mut OpCounter,
) -> Result<SolveOutcome, LinalgError> {
    if y.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "{} right-hand sides for {} equations",
            y.len(),
            a.rows()
        )));
    }
    let rank = forward_eliminate(&mut a, Some(&mut y), ops);
    if y[rank..].iter().any(|v| !v.is_zero()) {
        return Err(LinalgError::Inconsistent);
    }
    if rank < a.cols() {
        return Ok(SolveOutcome::RankDeficient { rank });
    }
    // Full column rank: pivot p sits in column p and rows are normalized.
    let field = a.field();
    let c = a.cols();
    let mut solution = vec![Gf::ZERO; c];
    for p in (0..c).rev() {
        let row = a.row(p);
        let mut acc = y[p];
        for j in p + 1..c {
            if !row[j].is_zero() {
                acc -= field.mul(row[j], solution[j]);
                ops.add(2);
            }
        }
        solution[p] = acc;
    }
    Ok(SolveOutcome::Solved { solution, rank })
}

/// Row rank over GF(q). Consumes the matrix.
pub fn rank(a: MatrixGF) -> usize {
    rank_counted(a, &mut OpCounter::disabled())
}

pub fn rank_counted(mut a: MatrixGF, ops: &mut OpCounter) -> usize {
    forward_eliminate(&mut a, None, ops)
}

/// Row-echelon reduction with normalized pivots. Returns the rank; the
/// first `rank` rows hold the pivots.
fn forward_eliminate(a: &mut MatrixGF, mut y: Option<&mut Vec<Gf>>, ops: &mut OpCounter) -> usize {
    let field = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(p, rank);
        if let Some(y) = y.as_deref_mut() {
            y.swap(p, rank);
        }

        let pivot = a.get(rank, col);
        if pivot != Gf::ONE {
            let inv = field.inv(pivot).expect("pivot is non-zero");
            field.scale(&mut a.row_mut(rank)[col..], inv);
            ops.add(1 + (cols - col) as u64);
            if let Some(y) = y.as_deref_mut() {
                y[rank] = field.mul(y[rank], inv);
                ops.add(1);
            }
        }

        for r in rank + 1..rows {
            let f = a.get(r, col);
            if f.is_zero() {
                continue;
            }
            let (src, dst) = a.row_pair_mut(rank, r);
            field.axpy(&mut dst[col..], f, &src[col..]);
            ops.add(2 * (cols - col) as u64);
            if let Some(y) = y.as_deref_mut() {
                let t = field.mul(f, y[rank]);
                y[r] -= t;
                ops.add(2);
            }
        }
        rank += 1;
    }
    rank
}

/// Incremental GF(2) row space for vectors of up to 64 coordinates,
/// packed one coordinate per bit.
#[derive(Debug, Clone)]
pub struct Gf2Basis {
    by_lead: [u64; 64],
    rank: usize,
}

impl Default for Gf2Basis {
    fn default() -> Self {
        Gf2Basis {
            by_lead: [0; 64],
            rank: 0,
        }
    }
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a vector; returns whether it enlarged the span.
    #[inline]
    pub fn insert(&mut self, mut v: u64) -> bool {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            let b = self.by_lead[lead];
            if b == 0 {
                self.by_lead[lead] = v;
                self.rank += 1;
                return true;
            }
            v ^= b;
        }
        false
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn clear(&mut self) {
        self.by_lead = [0; 64];
        self.rank = 0;
    }
}
