//! Small dense symmetric linear algebra: congruence products, Cholesky,
//! cyclic Jacobi, and the symmetric-definite generalized eigenproblem
//! `M a = λ B a` by Cholesky reduction.
//!
//! Everything here is deterministic: fixed loop orders, no pivoting, no
//! randomness. Matrix orders are expected to stay in the low hundreds.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use thiserror::Error;

/// Relative asymmetry tolerated by [`SymMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-12;
/// A Cholesky pivot at or below this fraction of the largest diagonal entry fails.
pub const PIVOT_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this fraction of `‖S‖_F`.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("matrix contains non-finite entries")]
    NonFinite,
}

/// Square symmetric matrix, stored symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(Array2<f64>);

impl SymMatrix {
    /// Accepts `a` if `|a_ij − a_ji| ≤ 1e-12·(1 + |a_ij|)` everywhere and
    /// stores `(a + aᵀ)/2`.
    pub fn new(a: Array2<f64>) -> Result<Self, LinalgError> {
        let (rows, cols) = a.dim();
        if rows != cols {
            return Err(LinalgError::NotSquare { rows, cols });
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                let (x, y) = (a[[i, j]], a[[j, i]]);
                if (x - y).abs() > SYMMETRY_TOL * (1.0 + x.abs()) {
                    return Err(LinalgError::Asymmetric { i, j });
                }
            }
        }
        Ok(Self::symmetrize(a))
    }

    fn symmetrize(a: Array2<f64>) -> Self {
        let n = a.nrows();
        let mut out = a;
        for i in 0..n {
            for j in (i + 1)..n {
                let mean = 0.5 * (out[[i, j]] + out[[j, i]]);
                out[[i, j]] = mean;
                out[[j, i]] = mean;
            }
        }
        Self(out)
    }

    pub fn identity(order: usize) -> Self {
        Self(Array2::eye(order))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self(Array2::from_diag(&Array1::from(diag.to_vec())))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, f64> {
        self.0.view()
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        self.0.diag().sum()
    }

    pub fn mul_vec(&self, x: ArrayView1<'_, f64>) -> Array1<f64> {
        self.0.dot(&x)
    }

    /// `xᵀ S x`
    pub fn quad_form(&self, x: ArrayView1<'_, f64>) -> f64 {
        x.dot(&self.0.dot(&x))
    }

    /// `S + εI`
    pub fn with_ridge(&self, eps: f64) -> Self {
        let mut a = self.0.clone();
        a.diag_mut().mapv_inplace(|d| d + eps);
        Self(a)
    }
}

/// Eigenvalue with its (nonzero, finite) eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Array1<f64>,
}

/// `X · inner · Xᵀ` for an `m x n` matrix `X` and symmetric `n x n` `inner`.
pub fn sandwich(inner: ArrayView2<'_, f64>, x: ArrayView2<'_, f64>) -> Result<SymMatrix, LinalgError> {
    let (rows, cols) = inner.dim();
    if rows != cols {
        return Err(LinalgError::NotSquare { rows, cols });
    }
    if x.ncols() != rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "X has {} columns, inner matrix has order {}",
            x.ncols(),
            rows
        )));
    }
    let product = x.dot(&inner).dot(&x.t());
    Ok(SymMatrix::symmetrize(product))
}

/// Lower-triangular `G` with `G Gᵀ = b`.
pub fn cholesky(b: &SymMatrix) -> Result<Array2<f64>, LinalgError> {
    let n = b.order();
    let a = b.view();
    let max_diag = a.diag().iter().copied().fold(0.0_f64, f64::max);
    let floor = PIVOT_TOL * max_diag;
    let mut g = Array2::<f64>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= g[[j, k]] * g[[j, k]];
        }
        if !d.is_finite() || d <= floor {
            return Err(LinalgError::NotPositiveDefinite { index: j, pivot: d });
        }
        let gjj = d.sqrt();
        g[[j, j]] = gjj;
        for i in (j + 1)..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= g[[i, k]] * g[[j, k]];
            }
            g[[i, j]] = s / gjj;
        }
    }
    Ok(g)
}

/// Cyclic Jacobi eigensolver. Pairs come back sorted ascending by value with
/// orthonormal vectors, each sign-fixed so its largest-magnitude entry is
/// positive.
pub fn jacobi_eigen(s: &SymMatrix) -> Result<Vec<EigenPair>, LinalgError> {
    let n = s.order();
    if n == 0 {
        return Err(LinalgError::DimensionMismatch("empty matrix".into()));
    }
    let mut a = s.view().to_owned();
    let mut v = Array2::<f64>::eye(n);
    let target = JACOBI_TOL * s.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= target {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let tau = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = if tau.abs() > 1e150 {
                    0.5 / tau
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn);
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|k| EigenPair {
            value: a[[k, k]],
            vector: fix_sign(v.column(k).to_owned()),
        })
        .collect();
    pairs.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(pairs)
}

fn off_diagonal_norm(a: &Array2<f64>) -> f64 {
    let mut acc = 0.0;
    for ((i, j), x) in a.indexed_iter() {
        if i != j {
            acc += x * x;
        }
    }
    acc.sqrt()
}

// A ← Jᵀ A J and V ← V J for the plane rotation J(p, q) with J_pp = J_qq = c, J_pq = s.
fn rotate(a: &mut Array2<f64>, v: &mut Array2<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = a.nrows();
    for k in 0..n {
        let (akp, akq) = (a[[k, p]], a[[k, q]]);
        a[[k, p]] = c * akp - s * akq;
        a[[k, q]] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[[p, k]], a[[q, k]]);
        a[[p, k]] = c * apk - s * aqk;
        a[[q, k]] = s * apk + c * aqk;
    }
    a[[p, q]] = 0.0;
    a[[q, p]] = 0.0;
    for k in 0..n {
        let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
        v[[k, p]] = c * vkp - s * vkq;
        v[[k, q]] = s * vkp + c * vkq;
    }
}

fn fix_sign(mut x: Array1<f64>) -> Array1<f64> {
    let mut pivot = 0.0_f64;
    for &xi in x.iter() {
        if xi.abs() > pivot.abs() {
            pivot = xi;
        }
    }
    if pivot < 0.0 {
        x.mapv_inplace(|e| -e);
    }
    x
}

/// Solves `M a = λ B a` for symmetric `m_mat` and positive definite `b_mat`.
///
/// With `B = G Gᵀ`, the pencil is reduced to the standard problem
/// `C u = λ u` for `C = G⁻¹ M G⁻ᵀ`, then mapped back by `a = G⁻ᵀ u`. The
/// returned vectors therefore satisfy `aᵀ B a = 1` and are mutually
/// B-orthogonal.
pub fn generalized_eigen(m_mat: &SymMatrix, b_mat: &SymMatrix) -> Result<Vec<EigenPair>, LinalgError> {
    let n = m_mat.order();
    if b_mat.order() != n {
        return Err(LinalgError::DimensionMismatch(format!(
            "M has order {}, B has order {}",
            n,
            b_mat.order()
        )));
    }
    let g = cholesky(b_mat)?;

    // Y = G⁻¹ M, then C = G⁻¹ Yᵀ = G⁻¹ M G⁻ᵀ since M is symmetric.
    let y = solve_lower_columns(&g, m_mat.view());
    let c = solve_lower_columns(&g, y.t());
    let c = SymMatrix::symmetrize(c);

    let pairs = jacobi_eigen(&c)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            let mut a = p.vector.to_vec();
            back_substitute_transposed(&g, &mut a);
            EigenPair {
                value: p.value,
                vector: fix_sign(Array1::from(a)),
            }
        })
        .collect())
}

fn solve_lower_columns(g: &Array2<f64>, rhs: ArrayView2<'_, f64>) -> Array2<f64> {
    let mut out = rhs.to_owned();
    for mut col in out.axis_iter_mut(Axis(1)) {
        let mut buf = col.to_vec();
        forward_substitute(g, &mut buf);
        col.assign(&Array1::from(buf));
    }
    out
}

// x ← G⁻¹ x for lower-triangular G
fn forward_substitute(g: &Array2<f64>, x: &mut [f64]) {
    let n = x.len();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= g[[i, k]] * x[k];
        }
        x[i] = s / g[[i, i]];
    }
}

// x ← G⁻ᵀ x for lower-triangular G
fn back_substitute_transposed(g: &Array2<f64>, x: &mut [f64]) {
    let n = x.len();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in (i + 1)..n {
            s -= g[[k, i]] * x[k];
        }
        x[i] = s / g[[i, i]];
    }
}
