//! Seeded random draws used by the synthetic generators.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| StandardNormal.sample(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<f64> {
    // column-major fill keeps the draw order identical to drawing column vectors
    DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Orthogonal matrix from Gram-Schmidt on a Gaussian matrix (Haar distributed).
pub fn random_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = gaussian_matrix(n, n, rng);
    let mut q = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let mut v = g.column(k).into_owned();
        for _ in 0..2 {
            for j in 0..k {
                let c = q.column(j).dot(&v);
                v.axpy(-c, &q.column(j), 1.0);
            }
        }
        let norm = v.norm();
        q.set_column(k, &(v / norm));
    }
    q
}

/// Well-conditioned SPD matrix `B B^T / n + I/2`.
pub fn random_spd<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let b = gaussian_matrix(n, n, rng);
    let mut m = &b * b.transpose() / (n as f64);
    for i in 0..n {
        m[(i, i)] += 0.5;
    }
    // exact symmetry
    (&m + m.transpose()) * 0.5
}
