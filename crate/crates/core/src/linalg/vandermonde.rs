//! Quadratic-cost inversion of Vandermonde matrices through their LU factors.
//!
//! For nodes x_1..x_γ the Vandermonde matrix V (row i = 1, x_i, …, x_i^{γ−1})
//! factors as V = L·U with U unit upper-triangular, so V⁻¹ = U⁻¹·L⁻¹. Both
//! inverse factors follow from short recursions:
//!
//! * L⁻¹ is lower-triangular with l_{i,j} = Π_{h≤i, h≠j} 1/(x_j − x_h),
//!   filled column by column through l_{i,j} = l_{i−1,j}/(x_j − x_i);
//! * U⁻¹ is unit upper-triangular with u_{1,j} = −u_{1,j−1}·x_{j−1} and
//!   u_{i,j} = u_{i−1,j−1} − u_{i,j−1}·x_{j−1}.
//!
//! Building the factors costs O(γ²). Solving V·u = y with them is another
//! O(γ²); forming V⁻¹ explicitly is a triangular product and costs O(γ³).

use crate::galois::{FieldCtx, Gf};
use crate::ops::OpCounter;

use super::{LinalgError, MatrixGF};

/// Distinct non-zero nodes of a square Vandermonde matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VandermondeSpec {
    field: &'static FieldCtx,
    xs: Vec<Gf>,
}

impl VandermondeSpec {
    pub fn new(field: &'static FieldCtx, xs: Vec<Gf>) -> Result<Self, LinalgError> {
        let order = field.order();
        if xs.len() > (order - 1) as usize {
            return Err(LinalgError::TooManyNodes {
                nodes: xs.len(),
                order,
            });
        }
        let mut seen = vec![false; order as usize];
        for &x in &xs {
            if u32::from(x.0) >= order {
                return Err(LinalgError::EntryOutOfRange { value: x.0, order });
            }
            if x.is_zero() {
                return Err(LinalgError::ZeroNode);
            }
            if std::mem::replace(&mut seen[x.0 as usize], true) {
                return Err(LinalgError::DegenerateNodes);
            }
        }
        Ok(VandermondeSpec { field, xs })
    }

    /// γ, the matrix dimension.
    pub fn degree(&self) -> usize {
        self.xs.len()
    }

    pub fn nodes(&self) -> &[Gf] {
        &self.xs
    }

    pub fn field(&self) -> &'static FieldCtx {
        self.field
    }

    /// The matrix itself, row i = (1, x_i, …, x_i^{γ−1}).
    pub fn matrix(&self) -> MatrixGF {
        let g = self.degree();
        MatrixGF::from_fn(self.field, g, g, |r, c| self.field.pow(self.xs[r], c as u64))
    }
}

/// L⁻¹ and U⁻¹ for a Vandermonde matrix.
#[derive(Debug, Clone)]
pub struct VandermondeFactors {
    l_inv: MatrixGF,
    u_inv: MatrixGF,
}

impl VandermondeFactors {
    pub fn new(spec: &VandermondeSpec) -> Self {
        Self::new_counted(spec, &mut OpCounter::disabled())
    }

    pub fn new_counted(spec: &VandermondeSpec, ops: &mut OpCounter) -> Self {
        VandermondeFactors {
            l_inv: l_inverse(spec, ops),
            u_inv: u_inverse(spec, ops),
        }
    }

    pub fn l_inv(&self) -> &MatrixGF {
        &self.l_inv
    }

    pub fn u_inv(&self) -> &MatrixGF {
        &self.u_inv
    }

    /// Overwrites `y` with V⁻¹·y in O(γ²).
    pub fn solve_in_place(&self, y: &mut [Gf], ops: &mut OpCounter) {
        let g = self.l_inv.rows();
        assert_eq!(y.len(), g, "right-hand side must have length γ");
        let field = self.l_inv.field();

        // z = L⁻¹ y, bottom-up so that y_j (j ≤ i) is still intact.
        for i in (0..g).rev() {
            let row = self.l_inv.row(i);
            let mut acc = Gf::ZERO;
            for j in 0..=i {
                if !y[j].is_zero() {
                    acc += field.mul(row[j], y[j]);
                    ops.add(2);
                }
            }
            y[i] = acc;
        }
        // u = U⁻¹ z, top-down so that z_j (j ≥ i) is still intact.
        for i in 0..g {
            let row = self.u_inv.row(i);
            let mut acc = y[i];
            for j in i + 1..g {
                if !y[j].is_zero() {
                    acc += field.mul(row[j], y[j]);
                    ops.add(2);
                }
            }
            y[i] = acc;
        }
    }

    /// Explicit V⁻¹ = U⁻¹·L⁻¹, exploiting the triangular structure.
    pub fn inverse(&self) -> MatrixGF {
        let g = self.l_inv.rows();
        let field = self.l_inv.field();
        MatrixGF::from_fn(field, g, g, |i, j| {
            (i.max(j)..g).fold(Gf::ZERO, |acc, h| {
                acc + field.mul(self.u_inv.get(i, h), self.l_inv.get(h, j))
            })
        })
    }
}

fn l_inverse(spec: &VandermondeSpec, ops: &mut OpCounter) -> MatrixGF {
    let field = spec.field;
    let xs = &spec.xs;
    let g = xs.len();
    let mut l = MatrixGF::zeros(field, g, g);
    for j in 0..g {
        // l_{j,j} = 1 / Π_{h<j} (x_j − x_h)
        let mut denom = Gf::ONE;
        for h in 0..j {
            denom = field.mul(denom, xs[j] - xs[h]);
            ops.add(2);
        }
        let mut v = field.inv(denom).expect("nodes are distinct");
        ops.add(1);
        l.set(j, j, v);
        for i in j + 1..g {
            v = field.div(v, xs[j] - xs[i]).expect("nodes are distinct");
            ops.add(3);
            l.set(i, j, v);
        }
    }
    l
}

fn u_inverse(spec: &VandermondeSpec, ops: &mut OpCounter) -> MatrixGF {
    let field = spec.field;
    let xs = &spec.xs;
    let g = xs.len();
    let mut u = MatrixGF::zeros(field, g, g);
    for i in 0..g {
        u.set(i, i, Gf::ONE);
    }
    // Column j depends only on column j−1 (0-based: x_{j−1} → xs[j−1]).
    for j in 1..g {
        let x = xs[j - 1];
        let top = field.mul(u.get(0, j - 1), x);
        u.set(0, j, top); // −a = a in characteristic 2
        ops.add(1);
        for i in 1..j {
            let v = u.get(i - 1, j - 1) - field.mul(u.get(i, j - 1), x);
            ops.add(2);
            u.set(i, j, v);
        }
    }
    u
}

/// L⁻¹ of the Crout factorization V = L·U.
pub fn vandermonde_l_inverse(spec: &VandermondeSpec) -> MatrixGF {
    l_inverse(spec, &mut OpCounter::disabled())
}

/// U⁻¹ (unit upper-triangular) of the Crout factorization V = L·U.
pub fn vandermonde_u_inverse(spec: &VandermondeSpec) -> MatrixGF {
    u_inverse(spec, &mut OpCounter::disabled())
}

/// V⁻¹ = U⁻¹·L⁻¹.
pub fn vandermonde_inverse(spec: &VandermondeSpec) -> MatrixGF {
    VandermondeFactors::new(spec).inverse()
}
