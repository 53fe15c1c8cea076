//! Gram matrix, its SVD, the adapted bases and the bound intermediates.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{jacobi_svd, max_abs_diff, spectral_norm};
use crate::problems::{RieszFamily, SubspaceHierarchy};
use crate::spaces::{orthonormalize, AmbientSpace, OrthonormalFrame};

/// `G = [<r_i, w_j>]`, an `m x n` matrix.
pub fn gram_matrix(riesz: &RieszFamily, trial: &OrthonormalFrame) -> Result<DMatrix<f64>> {
    let space = trial.space();
    if riesz.space().dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: riesz.space().dim(),
        });
    }
    Ok(space.cross_gram(riesz.vectors(), trial.columns()))
}

/// `G = U Lambda X^T` with full orthogonal `U` (`m x m`) and `X` (`n x n`).
#[derive(Debug, Clone)]
pub struct GramDecomposition {
    pub gram: DMatrix<f64>,
    pub u: DMatrix<f64>,
    pub x: DMatrix<f64>,
    /// Nonincreasing.
    pub sigma: Vec<f64>,
}

impl GramDecomposition {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma.last().copied().unwrap_or(0.0)
    }

    /// `U Lambda X^T`
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let (m, n) = self.gram.shape();
        let mut lambda = DMatrix::<f64>::zeros(m, n);
        for (j, s) in self.sigma.iter().enumerate() {
            lambda[(j, j)] = *s;
        }
        &self.u * lambda * self.x.transpose()
    }

    /// Max-norm reconstruction error relative to the largest entry of `G`.
    pub fn reconstruction_error(&self) -> f64 {
        let scale = self.gram.amax();
        let err = max_abs_diff(&self.reconstruct(), &self.gram);
        if scale > 0.0 {
            err / scale
        } else {
            err
        }
    }

    /// `sigma_n <= 1e-12 sigma_1` (or `G = 0`).
    pub fn is_singular(&self) -> bool {
        let top = self.sigma_max();
        top == 0.0 || self.sigma_min() <= 1e-12 * top
    }
}

/// SVD of an `m x n` Gram matrix with `m >= n`.
///
/// Sign convention: the largest-magnitude entry of every column of `X` is
/// positive (first such row on ties); the matching column of `U` flips with it.
pub fn decompose(gram: &DMatrix<f64>) -> Result<GramDecomposition> {
    let (m, n) = gram.shape();
    if m < n {
        return Err(Error::DimensionTooSmall("Gram matrix needs m >= n"));
    }
    let svd = jacobi_svd(gram);
    let mut x = svd.right;
    let mut thin_u = svd.left;

    for j in 0..n {
        let mut pivot = 0;
        for i in 1..n {
            if x[(i, j)].abs() > x[(pivot, j)].abs() {
                pivot = i;
            }
        }
        if x[(pivot, j)] < 0.0 {
            x.column_mut(j).neg_mut();
            thin_u.column_mut(j).neg_mut();
        }
    }

    // Left vectors for nonzero singular values, re-orthonormalized, then completed.
    let euclid = AmbientSpace::euclidean(m);
    let cutoff = svd.sigma.first().copied().unwrap_or(0.0) * f64::EPSILON * (m as f64);
    let rank = svd
        .sigma
        .iter()
        .take_while(|s| **s > cutoff && **s > 0.0)
        .count();
    let leading: Vec<DVector<f64>> = (0..rank).map(|j| thin_u.column(j).into_owned()).collect();
    let leading = orthonormalize(&leading, &euclid)?;
    let rest = leading.complement();
    let u = leading.concat(&rest).columns().clone();

    Ok(GramDecomposition {
        gram: gram.clone(),
        u,
        x,
        sigma: svd.sigma,
    })
}

/// Rotated bases `w*_j = sum_i x_ij w_i` and `r*_j = sum_i u_ij r_i`, stored as columns.
#[derive(Debug, Clone)]
pub struct AdaptedBases {
    pub trial_star: DMatrix<f64>,
    pub riesz_star: DMatrix<f64>,
}

impl AdaptedBases {
    /// `[<r*_i, w*_j>]`, which equals `Lambda` (`m x n`).
    pub fn coupling(&self, space: &AmbientSpace) -> DMatrix<f64> {
        space.cross_gram(&self.riesz_star, &self.trial_star)
    }
}

pub fn adapted_bases(
    decomp: &GramDecomposition,
    trial: &OrthonormalFrame,
    riesz: &RieszFamily,
) -> Result<AdaptedBases> {
    if decomp.x.nrows() != trial.len() {
        return Err(Error::DimensionMismatch {
            expected: trial.len(),
            found: decomp.x.nrows(),
        });
    }
    if decomp.u.nrows() != riesz.len() {
        return Err(Error::DimensionMismatch {
            expected: riesz.len(),
            found: decomp.u.nrows(),
        });
    }
    Ok(AdaptedBases {
        trial_star: trial.columns() * &decomp.x,
        riesz_star: riesz.vectors() * &decomp.u,
    })
}

/// Norm of `v -> (<r_j, v>)_j` restricted to the orthogonal complement of the trial space.
///
/// Exact: the largest singular value of `[<r_j, q_i>]` over an orthonormal
/// basis `{q_i}` of the complement.
pub fn gamma(riesz: &RieszFamily, trial: &OrthonormalFrame) -> Result<f64> {
    if riesz.space().dim() != trial.space().dim() {
        return Err(Error::DimensionMismatch {
            expected: trial.space().dim(),
            found: riesz.space().dim(),
        });
    }
    let complement = trial.complement();
    if complement.is_empty() || riesz.is_empty() {
        return Ok(0.0);
    }
    let coupling = trial
        .space()
        .cross_gram(riesz.vectors(), complement.columns());
    Ok(spectral_norm(&coupling))
}

/// Norm of `v -> (<r_j, v>)_j` over the whole space, i.e. the continuity
/// constant of `a` on `H x Z_m`. Equals 1 for orthonormal representers.
pub fn continuity_constant(riesz: &RieszFamily) -> f64 {
    if riesz.is_empty() {
        return 0.0;
    }
    let gram = riesz.self_gram();
    libm::sqrt(spectral_norm(&gram).max(0.0))
}

/// `gamma`, `delta_j = eta_j + eta_hat_j` with `eta_j = sum_i |x_ij| tau_{i-1}`
/// and `eta_hat_j = sum_i |x_ij| eps_{i-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundIntermediates {
    pub gamma: f64,
    pub delta: Vec<f64>,
    pub eta: Vec<f64>,
    pub eta_hat: Vec<f64>,
}

impl BoundIntermediates {
    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }
}

/// Intermediates from the decomposition's `X`; `gamma` is left at zero.
pub fn deltas(
    decomp: &GramDecomposition,
    hierarchy: &SubspaceHierarchy,
    distances: &[f64],
) -> Result<BoundIntermediates> {
    deltas_from_rotation(&decomp.x, hierarchy.widths(), distances)
}

/// Same as [`deltas`] for an explicit rotation and width profile.
pub fn deltas_from_rotation(
    x: &DMatrix<f64>,
    widths: &[f64],
    distances: &[f64],
) -> Result<BoundIntermediates> {
    let n = x.ncols();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.nrows(),
        });
    }
    for (what, v) in [("widths", widths), ("distances", distances)] {
        if v.len() != n + 1 {
            return Err(Error::LengthMismatch {
                what,
                expected: n + 1,
                found: v.len(),
            });
        }
    }
    if widths
        .iter()
        .chain(distances)
        .any(|v| v.is_nan() || *v < 0.0)
    {
        return Err(Error::InvalidInput(
            "widths and distances must be nonnegative",
        ));
    }
    if distances.iter().zip(widths).any(|(t, e)| t > e) {
        return Err(Error::InvalidDistances("distance exceeds width"));
    }

    let mut eta = alloc::vec![0.0; n];
    let mut eta_hat = alloc::vec![0.0; n];
    for j in 0..n {
        for i in 0..n {
            let weight = x[(i, j)].abs();
            eta[j] += weight * distances[i];
            eta_hat[j] += weight * widths[i];
        }
    }
    let delta = eta.iter().zip(&eta_hat).map(|(a, b)| a + b).collect();
    Ok(BoundIntermediates {
        gamma: 0.0,
        delta,
        eta,
        eta_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{example1, example2, flat_orthogonal};
    use crate::random::gaussian_matrix;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_gram_decomposes_to_identity() {
        let d = decompose(&DMatrix::identity(4, 4)).unwrap();
        assert_eq!(d.sigma, vec![1.0; 4]);
        assert_eq!(d.x, DMatrix::identity(4, 4));
        assert_eq!(d.u, DMatrix::identity(4, 4));
    }

    #[test]
    fn padded_diagonal() {
        let mut g = DMatrix::zeros(5, 3);
        g[(0, 0)] = 3.0;
        g[(1, 1)] = 2.0;
        g[(2, 2)] = 1.0;
        let d = decompose(&g).unwrap();
        assert_eq!(d.sigma, vec![3.0, 2.0, 1.0]);
        assert!(crate::linalg::orthogonality_defect(&d.u) < 1e-14);
        assert!(d.reconstruction_error() < 1e-15);
    }

    #[test]
    fn random_reconstruction_and_sign_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let g = gaussian_matrix(7, 4, &mut rng);
        let d = decompose(&g).unwrap();
        assert!(d.reconstruction_error() <= 1e-10);
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
        for j in 0..4 {
            let col = d.x.column(j);
            let (mut best, mut at) = (0.0_f64, 0);
            for i in 0..4 {
                if col[i].abs() > best {
                    best = col[i].abs();
                    at = i;
                }
            }
            assert!(col[at] > 0.0);
        }
    }

    #[test]
    fn zero_gram() {
        let d = decompose(&DMatrix::zeros(3, 2)).unwrap();
        assert_eq!(d.sigma, vec![0.0, 0.0]);
        assert!(d.is_singular());
        assert!(crate::linalg::orthogonality_defect(&d.u) < 1e-14);
    }

    #[test]
    fn rejects_wide_gram() {
        assert!(decompose(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn adapted_bases_identity_rotation() {
        let space = AmbientSpace::euclidean(6);
        let trial =
            OrthonormalFrame::from_orthonormal(&space, DMatrix::identity(6, 3), 0.0).unwrap();
        let tests = crate::problems::TestSpace::new(trial.clone(), 3).unwrap();
        let problem = crate::problems::ProblemInstance::functional(
            space,
            DMatrix::identity(6, 6),
            DVector::zeros(6),
        )
        .unwrap();
        let riesz = problem.riesz_representers(&tests).unwrap();
        let g = gram_matrix(&riesz, &trial).unwrap();
        let d = decompose(&g).unwrap();
        let ab = adapted_bases(&d, &trial, &riesz).unwrap();
        assert!(max_abs_diff(&ab.trial_star, trial.columns()) < 1e-14);
        assert!(max_abs_diff(&ab.riesz_star, riesz.vectors()) < 1e-14);
    }

    #[test]
    fn example1_diagonal_coupling_and_gamma() {
        let inst = example1(1e-2, 8, 11, 30, 3).unwrap();
        let trial = inst.hierarchy.basis();
        let riesz = inst.problem.riesz_representers(&inst.tests).unwrap();
        let d = decompose(&gram_matrix(&riesz, trial).unwrap()).unwrap();
        let ab = adapted_bases(&d, trial, &riesz).unwrap();
        let c = ab.coupling(trial.space());
        for i in 0..11 {
            for j in 0..8 {
                let want = if i == j { d.sigma[j] } else { 0.0 };
                assert!((c[(i, j)] - want).abs() <= 1e-9);
            }
        }
        let riesz_star =
            OrthonormalFrame::from_orthonormal(trial.space(), ab.riesz_star.clone(), 1e-9);
        assert!(riesz_star.is_ok());

        let g = gamma(&riesz, trial).unwrap();
        assert!(g <= 1.0 + 1e-10);
        // r_11 = q_11 lies entirely outside the trial space
        assert!((g - 1.0).abs() < 1e-12);
        assert!((continuity_constant(&riesz) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_vanishes_inside_trial_span() {
        let space = AmbientSpace::euclidean(5);
        let trial =
            OrthonormalFrame::from_orthonormal(&space, DMatrix::identity(5, 3), 0.0).unwrap();
        let tests = crate::problems::TestSpace::new(trial.clone(), 3).unwrap();
        let mut a = DMatrix::zeros(5, 5);
        a[(0, 1)] = 2.0;
        a[(2, 0)] = -1.0;
        let problem =
            crate::problems::ProblemInstance::functional(space, a, DVector::zeros(5)).unwrap();
        let riesz = problem.riesz_representers(&tests).unwrap();
        assert_eq!(gamma(&riesz, &trial).unwrap(), 0.0);
    }

    #[test]
    fn deltas_identity_rotation() {
        let widths = vec![1.0, 0.7, 0.3, 0.2];
        let tau = vec![0.9, 0.5, 0.3, 0.1];
        let b = deltas_from_rotation(&DMatrix::identity(3, 3), &widths, &tau).unwrap();
        for j in 0..3 {
            assert_eq!(b.delta[j], widths[j] + tau[j]);
            assert_eq!(b.delta[j], b.eta[j] + b.eta_hat[j]);
        }
        let zero = deltas_from_rotation(&DMatrix::identity(3, 3), &[0.0; 4], &[0.0; 4]).unwrap();
        assert!(zero.delta.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn deltas_flat_rotation_example2_profile() {
        let n = 16;
        let x = flat_orthogonal(n).unwrap();
        let mut tau = vec![1.0 / (2.0 * (n - 1) as f64); n + 1];
        tau[0] = 0.5;
        tau[n] = 1e-3;
        let b = deltas_from_rotation(&x, &tau, &tau).unwrap();
        let want = 2.0 / libm::sqrt(n as f64);
        for d in &b.delta {
            assert!((d - want).abs() < 1e-14);
        }
    }

    #[test]
    fn example_instances_through_prescribed_rotation() {
        let e1 = example1(1e-2, 10, 10, 40, 7).unwrap();
        let tau = e1.hierarchy.distances().unwrap();
        let b = deltas_from_rotation(&e1.rotation, e1.hierarchy.widths(), tau).unwrap();
        for (d, t) in b.delta.iter().zip(tau) {
            assert_eq!(*d, 2.0 * t);
        }
        let e2 = example2(1e-3, 16, 16, 64, 7).unwrap();
        let tau = e2.hierarchy.distances().unwrap();
        let b = deltas_from_rotation(&e2.rotation, e2.hierarchy.widths(), tau).unwrap();
        for d in &b.delta {
            assert!((d - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn deltas_errors() {
        let x = DMatrix::identity(2, 2);
        assert!(matches!(
            deltas_from_rotation(&x, &[1.0, 1.0], &[0.5, 0.5, 0.5]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            deltas_from_rotation(&x, &[1.0, 0.1, 0.0], &[0.5, 0.5, 0.0]),
            Err(Error::InvalidDistances(_))
        ));
    }
}
