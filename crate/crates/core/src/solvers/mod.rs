//! Petrov-Galerkin and multi-slice projectors.
//!
//! Both work in trial coordinates `c` (`z = sum_j c_j w_j`) on the reduced
//! least-squares cost `f(c) = |G c - d|^2` with `d_j = b(z_j)`.

mod galerkin;
mod multislice;
mod slices;

pub use galerkin::{solve_pg, solve_pg_system, PgSolution};
pub use multislice::{solve_ms, solve_ms_from, solve_ms_system, MultiSliceSolution};
pub use slices::{project_slices, project_slices_with, slice_violation, tail_norms};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problems::{ProblemInstance, RieszFamily, TestSpace};
use crate::spaces::OrthonormalFrame;
use crate::spectral::{decompose, gram_matrix, GramDecomposition};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Relative cost decrease below which a stalled run may stop.
    pub gradient_tolerance: f64,
    pub dykstra_iterations: usize,
    pub dykstra_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            gradient_tolerance: 1e-10,
            dykstra_iterations: 200,
            dykstra_tolerance: 1e-12,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.dykstra_iterations == 0 {
            return Err(Error::InvalidInput("iteration limits must be positive"));
        }
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.gradient_tolerance) || !positive(self.dykstra_tolerance) {
            return Err(Error::InvalidInput(
                "tolerances must be positive and finite",
            ));
        }
        Ok(())
    }
}

/// Gram matrix, data vector and SVD of one trial/test pairing.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub trial: OrthonormalFrame,
    pub riesz: RieszFamily,
    pub data: DVector<f64>,
    pub decomp: GramDecomposition,
}

impl ReducedSystem {
    pub fn assemble(
        problem: &ProblemInstance,
        trial: &OrthonormalFrame,
        tests: &TestSpace,
    ) -> Result<Self> {
        let riesz = problem.riesz_representers(tests)?;
        let gram = gram_matrix(&riesz, trial)?;
        let decomp = decompose(&gram)?;
        Ok(Self {
            trial: trial.clone(),
            riesz,
            data: problem.test_data(tests),
            decomp,
        })
    }

    pub fn n(&self) -> usize {
        self.decomp.gram.ncols()
    }

    pub fn m(&self) -> usize {
        self.decomp.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.decomp.gram
    }

    pub fn residual(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        self.gram() * coeffs - &self.data
    }

    /// `|G c - d|^2`
    pub fn cost(&self, coeffs: &DVector<f64>) -> f64 {
        self.residual(coeffs).norm_squared()
    }

    /// `2 G^T (G c - d)`
    pub fn gradient(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        self.gram().tr_mul(&self.residual(coeffs)) * 2.0
    }

    pub fn point(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        self.trial.synthesize(coeffs)
    }
}

/// `|z_true - point|` in the metric norm.
pub fn error_norm(point: &DVector<f64>, problem: &ProblemInstance) -> Result<f64> {
    let truth = problem.truth().ok_or(Error::TruthUnavailable)?;
    problem.space().check(point)?;
    Ok(problem.space().norm(&(truth - point)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_vector, random_spd};
    use crate::spaces::AmbientSpace;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn error_norm_cases() {
        let space = AmbientSpace::euclidean(2);
        let truth = DVector::from_vec(alloc::vec![1.0, 0.0]);
        let problem =
            ProblemInstance::synthetic(space.clone(), DMatrix::identity(2, 2), truth.clone())
                .unwrap();
        assert_eq!(error_norm(&truth, &problem).unwrap(), 0.0);
        let other = DVector::from_vec(alloc::vec![0.0, 1.0]);
        assert!((error_norm(&other, &problem).unwrap() - libm::sqrt(2.0)).abs() < 1e-15);

        let functional =
            ProblemInstance::functional(space, DMatrix::identity(2, 2), truth).unwrap();
        assert_eq!(
            error_norm(&other, &functional),
            Err(Error::TruthUnavailable)
        );
    }

    #[test]
    fn error_norm_uses_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let metric = random_spd(5, &mut rng);
        let space = AmbientSpace::with_metric(metric.clone()).unwrap();
        let truth = gaussian_vector(5, &mut rng);
        let point = gaussian_vector(5, &mut rng);
        let problem =
            ProblemInstance::synthetic(space, DMatrix::identity(5, 5), truth.clone()).unwrap();
        let diff = &truth - &point;
        let direct = libm::sqrt(diff.dot(&(&metric * &diff)));
        assert!((error_norm(&point, &problem).unwrap() - direct).abs() <= 1e-12 * direct);
    }

    #[test]
    fn options_validation() {
        assert!(SolverOptions::default().validate().is_ok());
        let bad = SolverOptions {
            dykstra_tolerance: 0.0,
            ..SolverOptions::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverOptions {
            max_iterations: 0,
            ..SolverOptions::default()
        };
        assert!(bad.validate().is_err());
    }
}
