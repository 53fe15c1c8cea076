//! Synthetic instances with a prescribed Gram spectrum and exact distances.
//!
//! Construction, in the Euclidean metric:
//! draw an orthonormal basis `w_1..w_n, q_1..q_m, ...` of `R^N`, rotate the
//! trial basis by `X` (`w*_j = sum_i x_ij w_i`), and set
//! `r_j = sigma_j w*_j + sqrt(1 - sigma_j^2) q_j` (`r_j = q_j` for `j > n`).
//! The representers are orthonormal and `G = [Lambda; 0] X^T`.
//! The operator is `A = R Z^T` for a random orthonormal test basis `Z`, so
//! `A z_j = r_j`. The truth is `sum_k c_k w_k + tau_n u` with
//! `c_k^2 = tau_{k-1}^2 - tau_k^2` and `u` a random unit vector orthogonal to
//! the trial space, which gives `dist(z_true, V_k) = tau_k` exactly.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hadamard::flat_orthogonal;
use super::{validate_distances, ProblemInstance, SubspaceHierarchy, TestSpace};
use crate::error::{Error, Result};
use crate::linalg::orthogonality_defect;
use crate::random::{gaussian_matrix, gaussian_vector, random_orthogonal};
use crate::spaces::{orthonormalize, AmbientSpace, OrthonormalFrame};

const ROTATION_TOLERANCE: f64 = 1e-10;

/// Everything `synth_prescribed` needs.
#[derive(Debug, Clone)]
pub struct Prescription {
    /// `m`
    pub test_dim: usize,
    /// `N`
    pub ambient_dim: usize,
    /// `sigma_1 >= .. >= sigma_n`, all in `[0, 1]`.
    pub sigma: Vec<f64>,
    /// Right singular factor `X` (`n x n`, orthogonal).
    pub rotation: DMatrix<f64>,
    /// `tau_0 .. tau_n`
    pub distances: Vec<f64>,
    /// `eps_0 .. eps_n`
    pub widths: Vec<f64>,
    pub seed: u64,
}

/// A generated instance together with the factors it was built from.
#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub problem: ProblemInstance,
    pub hierarchy: SubspaceHierarchy,
    pub tests: TestSpace,
    pub sigma: Vec<f64>,
    pub rotation: DMatrix<f64>,
}

impl Prescription {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::InvalidSpectrum(
                "at least one singular value is required",
            ));
        }
        if self.sigma.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidSpectrum("singular values must lie in [0, 1]"));
        }
        if self.sigma.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidSpectrum(
                "singular values must be nonincreasing",
            ));
        }
        if self.rotation.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.rotation.nrows(),
            });
        }
        let deviation = orthogonality_defect(&self.rotation);
        if deviation.is_nan() || deviation > ROTATION_TOLERANCE {
            return Err(Error::InvalidRotation { deviation });
        }
        if self.widths.len() != n + 1 {
            return Err(Error::LengthMismatch {
                what: "widths",
                expected: n + 1,
                found: self.widths.len(),
            });
        }
        if self.widths.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InfeasibleWidths("widths must be nonnegative"));
        }
        validate_distances(&self.distances, &self.widths)?;
        if self.test_dim < n {
            return Err(Error::DimensionTooSmall("test dimension m must be >= n"));
        }
        if self.ambient_dim < n + self.test_dim {
            return Err(Error::DimensionTooSmall(
                "ambient dimension N must be >= n + m",
            ));
        }
        Ok(())
    }
}

pub fn synth_prescribed(p: &Prescription) -> Result<SyntheticInstance> {
    p.validate()?;
    let n = p.n();
    let m = p.test_dim;
    let dim = p.ambient_dim;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let space = AmbientSpace::euclidean(dim);

    let basis = random_orthogonal(dim, &mut rng);
    let trial = basis.columns(0, n).into_owned();
    let rotated = &trial * &p.rotation;

    let mut riesz = DMatrix::<f64>::zeros(dim, m);
    for j in 0..m {
        let q = basis.column(n + j);
        if j < n {
            let s = p.sigma[j];
            let c = libm::sqrt((1.0 - s * s).max(0.0));
            riesz.set_column(j, &(rotated.column(j) * s + q * c));
        } else {
            riesz.set_column(j, &q);
        }
    }

    let test_draw = gaussian_matrix(dim, m, &mut rng);
    let test_vectors: Vec<DVector<f64>> = test_draw.column_iter().map(|c| c.into_owned()).collect();
    let test_frame = orthonormalize(&test_vectors, &space)?;
    let operator = &riesz * test_frame.columns().transpose();

    let tau = &p.distances;
    let mut truth = DVector::<f64>::zeros(dim);
    for k in 1..=n {
        let c = libm::sqrt((tau[k - 1] * tau[k - 1] - tau[k] * tau[k]).max(0.0));
        truth.axpy(c, &trial.column(k - 1), 1.0);
    }
    let outside = basis.columns(n, dim - n);
    let mix = gaussian_vector(dim - n, &mut rng);
    let direction = outside * &mix / mix.norm();
    truth.axpy(tau[n], &direction, 1.0);

    let trial_frame = OrthonormalFrame::from_columns_unchecked(&space, trial);
    let problem = ProblemInstance::synthetic(space, operator, truth)?;
    let hierarchy =
        SubspaceHierarchy::new(trial_frame, p.widths.clone(), Some(p.distances.clone()))?;
    let tests = TestSpace::new(test_frame, n)?;

    Ok(SyntheticInstance {
        problem,
        hierarchy,
        tests,
        sigma: p.sigma.clone(),
        rotation: p.rotation.clone(),
    })
}

/// Identity rotation; unit spectrum and distances except for the last three
/// levels, which drop to `sqrt(tau)`, `sqrt(tau)` and `tau`. Widths equal distances.
pub fn example1(
    tau: f64,
    n: usize,
    m: usize,
    ambient_dim: usize,
    seed: u64,
) -> Result<SyntheticInstance> {
    synth_prescribed(&example1_prescription(tau, n, m, ambient_dim, seed)?)
}

/// Parameters of [`example1`], validated but not yet realized.
pub fn example1_prescription(
    tau: f64,
    n: usize,
    m: usize,
    ambient_dim: usize,
    seed: u64,
) -> Result<Prescription> {
    if n < 4 {
        return Err(Error::DimensionTooSmall("example 1 needs n >= 4"));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidDistances("example 1 needs 0 < tau < 1"));
    }
    let root = libm::sqrt(tau);
    let level = |j: usize| {
        if j + 3 <= n {
            1.0
        } else if j < n {
            root
        } else {
            tau
        }
    };
    let distances: Vec<f64> = (0..=n).map(level).collect();
    let sigma: Vec<f64> = (1..=n).map(level).collect();
    let p = Prescription {
        test_dim: m,
        ambient_dim,
        sigma,
        rotation: DMatrix::identity(n, n),
        widths: distances.clone(),
        distances,
        seed,
    };
    p.validate()?;
    Ok(p)
}

/// Flat rotation (`|x_kj| = n^{-1/2}`), `tau_0 = 1/2`, `tau_j = 1/(2(n-1))`,
/// `tau_n = tau`, `sigma_n = tau^2` and the remaining singular values equal
/// to the `sigma` that puts the last two water-filling terms at `4 tau^2`.
pub fn example2(
    tau: f64,
    n: usize,
    m: usize,
    ambient_dim: usize,
    seed: u64,
) -> Result<SyntheticInstance> {
    synth_prescribed(&example2_prescription(tau, n, m, ambient_dim, seed)?)
}

/// Parameters of [`example2`], validated but not yet realized.
pub fn example2_prescription(
    tau: f64,
    n: usize,
    m: usize,
    ambient_dim: usize,
    seed: u64,
) -> Result<Prescription> {
    if n < 2 {
        return Err(Error::DimensionTooSmall("example 2 needs n >= 2"));
    }
    let plateau = 1.0 / (2.0 * (n - 1) as f64);
    if !(tau > 0.0 && tau <= plateau) {
        return Err(Error::InvalidDistances(
            "example 2 needs 0 < tau <= 1/(2(n-1))",
        ));
    }
    let rotation = flat_orthogonal(n)?;
    let common = libm::sqrt(n as f64 * tau * tau - tau * tau * tau * tau);
    if common > 1.0 {
        return Err(Error::InvalidSpectrum(
            "example 2 needs tau^2 (n - tau^2) <= 1",
        ));
    }
    let mut distances = alloc::vec![plateau; n + 1];
    distances[0] = 0.5;
    distances[n] = tau;
    let mut sigma = alloc::vec![common; n];
    sigma[n - 1] = tau * tau;
    let p = Prescription {
        test_dim: m,
        ambient_dim,
        sigma,
        rotation,
        widths: distances.clone(),
        distances,
        seed,
    };
    p.validate()?;
    Ok(p)
}

/// Distribution of random instances for validity sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParams {
    pub n_min: usize,
    pub n_max: usize,
    /// Force `m = n`; otherwise `m` is uniform in `n..=2n`.
    pub square: bool,
    /// Singular values are uniform in `(sigma_floor, 1]`.
    pub sigma_floor: f64,
    /// `eps_k = width_factor * tau_k`.
    pub width_factor: f64,
    /// `N = ambient_factor * (n + m)`.
    pub ambient_factor: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            n_min: 3,
            n_max: 12,
            square: false,
            sigma_floor: 0.0,
            width_factor: 1.0,
            ambient_factor: 2,
        }
    }
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::InvalidInput("need 1 <= n_min <= n_max"));
        }
        if !(0.0..1.0).contains(&self.sigma_floor) {
            return Err(Error::InvalidSpectrum("sigma_floor must lie in [0, 1)"));
        }
        if !self.width_factor.is_finite() || self.width_factor < 1.0 {
            return Err(Error::InfeasibleWidths(
                "width_factor must be finite and >= 1",
            ));
        }
        if self.ambient_factor == 0 {
            return Err(Error::DimensionTooSmall("ambient_factor must be >= 1"));
        }
        Ok(())
    }
}

/// Seed of repetition `rep` in a sweep started from `base`.
pub fn sweep_seed(base: u64, rep: u64) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(rep.wrapping_mul(0xD1B5_4A32_D192_ED03))
        ^ rep
}

/// Draws a random valid prescription.
pub fn random_prescription(params: &SweepParams, seed: u64) -> Prescription {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(params.n_min..=params.n_max);
    let m = if params.square {
        n
    } else {
        rng.random_range(n..=2 * n)
    };

    let floor = params.sigma_floor;
    let mut sigma: Vec<f64> = (0..n)
        .map(|_| 1.0 - (1.0 - floor) * rng.random::<f64>())
        .collect();
    sigma.sort_by(|a, b| b.total_cmp(a));

    let mut distances = Vec::with_capacity(n + 1);
    distances.push(0.05 + 0.95 * rng.random::<f64>());
    for k in 1..=n {
        let shrink = 0.1 + 0.9 * rng.random::<f64>();
        distances.push(distances[k - 1] * shrink);
    }
    let widths = distances.iter().map(|t| t * params.width_factor).collect();
    let rotation = random_orthogonal(n, &mut rng);

    Prescription {
        test_dim: m,
        ambient_dim: params.ambient_factor * (n + m),
        sigma,
        rotation,
        distances,
        widths,
        seed: rng.random(),
    }
}
