//! Tridiagonal operators: the chain Laplacian `MatL`, its `64^m`
//! renormalization, products, eigenvalue bisection and the direct solver.
//!
//! Laplacians are stored positive semidefinite: diagonal = degree,
//! off-diagonals = -1. The graph Laplacian `sum_{Y~X} (u(Y) - u(X))` is the
//! negative of this operator's action.

use crate::error::{Error, Result};
use crate::geometry::{check_level, vertex_count};
use crate::scalar::Scalar;

/// Default relative tolerance for [`max_eigenvalue`].
pub const EIGEN_TOL: f64 = 1e-10;

const BISECTION_CAP: usize = 2_000;

#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix<T> {
    sub: Vec<T>,
    diag: Vec<T>,
    sup: Vec<T>,
}

impl<T: Scalar> TridiagonalMatrix<T> {
    pub fn new(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::invalid("empty tridiagonal matrix"));
        }
        for off in [&sub, &sup] {
            if off.len() != n - 1 {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    found: off.len(),
                });
            }
        }
        Ok(TridiagonalMatrix { sub, diag, sup })
    }

    /// Constant-diagonal matrix (`sparseMat` style): `d` on the diagonal,
    /// `lower`/`upper` on the off-diagonals.
    pub fn constant(n: usize, lower: T, d: T, upper: T) -> Result<Self> {
        let off = n.saturating_sub(1);
        Self::new(vec![lower; off], vec![d; n], vec![upper; off])
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::constant(n, T::zero(), T::one(), T::zero())
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[T] {
        &self.sub
    }

    pub fn diag(&self) -> &[T] {
        &self.diag
    }

    pub fn sup(&self) -> &[T] {
        &self.sup
    }

    /// Entry `(row, col)`; zero outside the band.
    pub fn get(&self, row: usize, col: usize) -> T {
        if row == col {
            self.diag[row].clone()
        } else if col == row + 1 {
            self.sup[row].clone()
        } else if row == col + 1 {
            self.sub[col].clone()
        } else {
            T::zero()
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    pub fn scaled(&self, s: &T) -> Self {
        let f = |v: &Vec<T>| v.iter().map(|x| x.clone() * s.clone()).collect();
        TridiagonalMatrix {
            sub: f(&self.sub),
            diag: f(&self.diag),
            sup: f(&self.sup),
        }
    }

    /// `alpha * I + beta * self`.
    pub fn shifted(&self, alpha: &T, beta: &T) -> Self {
        let f = |v: &Vec<T>| {
            v.iter()
                .map(|x| x.clone() * beta.clone())
                .collect::<Vec<_>>()
        };
        TridiagonalMatrix {
            sub: f(&self.sub),
            diag: self
                .diag
                .iter()
                .map(|x| alpha.clone() + x.clone() * beta.clone())
                .collect(),
            sup: f(&self.sup),
        }
    }

    /// Replace row `row` by the corresponding identity row.
    pub fn set_identity_row(&mut self, row: usize) {
        self.diag[row] = T::one();
        if row > 0 {
            self.sub[row - 1] = T::zero();
        }
        if row + 1 < self.dim() {
            self.sup[row] = T::zero();
        }
    }

    /// `out = self * v`, no allocation.
    pub fn apply_into(&self, v: &[T], out: &mut [T]) -> Result<()> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: out.len(),
            });
        }
        for i in 0..n {
            let mut acc = self.diag[i].clone() * v[i].clone();
            if i > 0 {
                acc = acc + self.sub[i - 1].clone() * v[i - 1].clone();
            }
            if i + 1 < n {
                acc = acc + self.sup[i].clone() * v[i + 1].clone();
            }
            out[i] = acc;
        }
        Ok(())
    }

    /// `self * v` in `O(n)`.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c)).collect())
            .collect()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count of the
    /// `LDL^T` pivots). Requires a symmetric matrix.
    pub fn count_eigenvalues_below(&self, x: &T) -> usize {
        let mut count = 0;
        let mut q = T::one();
        for i in 0..self.dim() {
            let mut next = self.diag[i].clone() - x.clone();
            if i > 0 {
                let e = self.sub[i - 1].clone();
                next = next - e.clone() * e / q;
            }
            if next.is_zero() {
                next = T::tiny();
            }
            if next < T::zero() {
                count += 1;
            }
            q = next;
        }
        count
    }

    /// Gershgorin interval enclosing the spectrum.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.dim();
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for i in 0..n {
            let mut r = T::zero();
            if i > 0 {
                r = r + self.sub[i - 1].abs();
            }
            if i + 1 < n {
                r = r + self.sup[i].abs();
            }
            let a = self.diag[i].clone() - r.clone();
            let b = self.diag[i].clone() + r;
            lo = Some(match lo {
                Some(l) => T::min_of(l, a),
                None => a,
            });
            hi = Some(match hi {
                Some(h) => T::max_of(h, b),
                None => b,
            });
        }
        (lo.unwrap_or_else(T::zero), hi.unwrap_or_else(T::zero))
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection, to relative
    /// tolerance `tol`.
    pub fn eigenvalue(&self, k: usize, tol: &T) -> Result<T> {
        if !self.is_symmetric() {
            return Err(Error::invalid(
                "eigenvalue bisection needs a symmetric matrix",
            ));
        }
        if k >= self.dim() {
            return Err(Error::invalid(format!("eigenvalue index {k} out of range")));
        }
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..BISECTION_CAP {
            let width = hi.clone() - lo.clone();
            let scale = T::max_of(T::max_of(lo.abs(), hi.abs()), T::tiny());
            if width <= tol.clone() * scale {
                return Ok((lo + hi) * T::half());
            }
            let mid = (lo.clone() + hi.clone()) * T::half();
            if mid <= lo || mid >= hi {
                // Interval has collapsed to adjacent representable values.
                return Ok(mid);
            }
            if self.count_eigenvalues_below(&mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::NoConvergence {
            iterations: BISECTION_CAP,
        })
    }

    /// Solve `self * x = rhs` by forward elimination and back substitution.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        let mut c: Vec<T> = Vec::with_capacity(n);
        let mut d: Vec<T> = Vec::with_capacity(n);
        for i in 0..n {
            let (pivot, r) = if i == 0 {
                (self.diag[0].clone(), rhs[0].clone())
            } else {
                let l = self.sub[i - 1].clone();
                (
                    self.diag[i].clone() - l.clone() * c[i - 1].clone(),
                    rhs[i].clone() - l * d[i - 1].clone(),
                )
            };
            if pivot.is_zero() || !pivot.is_finite_value() {
                return Err(Error::Singular { row: i });
            }
            c.push(if i + 1 < n {
                self.sup[i].clone() / pivot.clone()
            } else {
                T::zero()
            });
            d.push(r / pivot);
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1].clone();
            x[i] = x[i].clone() - c[i].clone() * next;
        }
        Ok(x)
    }
}

/// Largest eigenvalue of a symmetric tridiagonal matrix.
pub fn max_eigenvalue<T: Scalar>(mat: &TridiagonalMatrix<T>, tol: &T) -> Result<T> {
    mat.eigenvalue(mat.dim() - 1, tol)
}

/// `MatL[m]`: diagonal `(1, 2, ..., 2, 1)`, off-diagonals `-1`, size `8^m + 1`.
pub fn laplacian_matrix<T: Scalar>(m: u32) -> Result<TridiagonalMatrix<T>> {
    check_level(m)?;
    let n = vertex_count(m);
    let mut mat = TridiagonalMatrix::constant(n, -T::one(), T::from_i64(2), -T::one())?;
    mat.diag[0] = T::one();
    mat.diag[n - 1] = T::one();
    Ok(mat)
}

/// `64^m`, the Laplacian renormalization factor at level `m`.
pub fn renormalization<T: Scalar>(m: u32) -> T {
    T::powu(64, m)
}

/// `64^m * MatL[m]`.
pub fn renormalized_laplacian<T: Scalar>(m: u32) -> Result<TridiagonalMatrix<T>> {
    Ok(laplacian_matrix::<T>(m)?.scaled(&renormalization(m)))
}

/// `sum over edges (v_i - v_{i+1})^2`, the energy form of the chain.
pub fn edge_energy<T: Scalar>(v: &[T]) -> T {
    v.windows(2).fold(T::zero(), |acc, w| {
        let d = w[0].clone() - w[1].clone();
        acc + d.clone() * d
    })
}

/// `v^T M v`.
pub fn quadratic_form<T: Scalar>(mat: &TridiagonalMatrix<T>, v: &[T]) -> Result<T> {
    let mv = mat.apply(v)?;
    Ok(v.iter()
        .zip(&mv)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
}
