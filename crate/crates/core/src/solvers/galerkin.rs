use nalgebra::DVector;

use super::ReducedSystem;
use crate::error::{Error, Result};
use crate::problems::{ProblemInstance, TestSpace};
use crate::spaces::OrthonormalFrame;

#[derive(Debug, Clone)]
pub struct PgSolution {
    pub point: DVector<f64>,
    pub coeffs: DVector<f64>,
}

/// Least-squares Petrov-Galerkin solution: the minimizer of `|G c - d|`.
/// For `m = n` this is the usual square Galerkin system.
pub fn solve_pg(
    problem: &ProblemInstance,
    trial: &OrthonormalFrame,
    tests: &TestSpace,
) -> Result<PgSolution> {
    let system = ReducedSystem::assemble(problem, trial, tests)?;
    solve_pg_system(&system)
}

/// Same as [`solve_pg`] on an assembled system. For `m > n` with a rank
/// deficient `G` the minimum-norm minimizer is returned.
pub fn solve_pg_system(system: &ReducedSystem) -> Result<PgSolution> {
    let d = &system.decomp;
    if system.m() == system.n() && d.is_singular() {
        return Err(Error::SingularSystem {
            sigma_1: d.sigma_max(),
            sigma_n: d.sigma_min(),
        });
    }
    let cutoff = 1e-12 * d.sigma_max();
    let projected = d.u.tr_mul(&system.data);
    let mut scaled = DVector::<f64>::zeros(system.n());
    for (j, s) in d.sigma.iter().enumerate() {
        if *s > cutoff {
            scaled[j] = projected[j] / s;
        }
    }
    let coeffs = &d.x * scaled;
    Ok(PgSolution {
        point: system.point(&coeffs),
        coeffs,
    })
}
