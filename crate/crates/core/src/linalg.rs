//! Dense kernels shared by the other modules.
//!
//! The SVD here is a one-sided (Hestenes) Jacobi iteration. It is slower than
//! bidiagonalization but it never rotates columns that are already orthogonal
//! to working precision, so nearly diagonal inputs keep their natural factors.

use alloc::vec::Vec;
use nalgebra::DMatrix;

const MAX_SWEEPS: usize = 80;

/// Thin SVD of a tall matrix: `a = left * diag(sigma) * right^T`.
///
/// Columns of `left` belonging to (numerically) zero singular values are zero.
#[derive(Debug, Clone)]
pub struct ThinSvd {
    pub left: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub right: DMatrix<f64>,
}

/// One-sided Jacobi SVD of `a` (rows >= cols), singular values sorted
/// nonincreasing. Ties keep their original column order.
pub fn jacobi_svd(a: &DMatrix<f64>) -> ThinSvd {
    let (rows, cols) = a.shape();
    assert!(rows >= cols, "jacobi_svd expects a tall matrix");

    let mut work = a.clone();
    let mut right = DMatrix::<f64>::identity(cols, cols);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let (alpha, beta, gamma) = {
                    let cp = work.column(p);
                    let cq = work.column(q);
                    (cp.dot(&cp), cq.dot(&cq), cp.dot(&cq))
                };
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + libm::hypot(1.0, zeta))
                } else {
                    -1.0 / (-zeta + libm::hypot(1.0, zeta))
                };
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                rotate_columns(&mut work, p, q, c, s);
                rotate_columns(&mut right, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..cols).map(|j| work.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let largest = order.first().map(|&j| norms[j]).unwrap_or(0.0);
    let cutoff = largest * f64::EPSILON * (rows.max(1) as f64);

    let mut left = DMatrix::<f64>::zeros(rows, cols);
    let mut sorted_right = DMatrix::<f64>::zeros(cols, cols);
    let mut sigma = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        sorted_right.set_column(dst, &right.column(src));
        if s > cutoff && s > 0.0 {
            left.set_column(dst, &(work.column(src) / s));
        }
    }

    ThinSvd {
        left,
        sigma,
        right: sorted_right,
    }
}

fn rotate_columns(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = c * mp - s * mq;
        m[(i, q)] = s * mp + c * mq;
    }
}

/// Singular values of a matrix of any shape, sorted nonincreasing.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    if a.nrows() >= a.ncols() {
        jacobi_svd(a).sigma
    } else {
        jacobi_svd(&a.transpose()).sigma
    }
}

/// Largest singular value (spectral norm), zero for empty matrices.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Max-norm of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Max-norm of `a^T a - I`.
pub fn orthogonality_defect(a: &DMatrix<f64>) -> f64 {
    let gram = a.transpose() * a;
    max_abs_diff(&gram, &DMatrix::identity(a.ncols(), a.ncols()))
}
