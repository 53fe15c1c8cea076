//! Multi-slice decoder: `min |G c - d|^2` over the slice constraints, by
//! FISTA with function-value restarts and Dykstra projections.

use nalgebra::DVector;

use super::galerkin::solve_pg_system;
use super::slices::project_slices_with;
use super::{ReducedSystem, SolverOptions};
use crate::error::{Error, Result};
use crate::problems::{ProblemInstance, SubspaceHierarchy, TestSpace};

const CHECK_EVERY: usize = 10;
const STALL_WINDOW: usize = 200;

#[derive(Debug, Clone)]
pub struct MultiSliceSolution {
    pub point: DVector<f64>,
    pub coeffs: DVector<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Norm of the gradient mapping at `coeffs`.
    pub kkt_residual: f64,
    /// `sigma_n <= 1e-12 sigma_1`: the minimizer may not be unique.
    pub non_unique_hint: bool,
}

impl MultiSliceSolution {
    /// Turns a run that hit the iteration limit into an error.
    pub fn ensure_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                iterations: self.iterations,
                kkt_residual: self.kkt_residual,
            })
        }
    }
}

pub fn solve_ms(
    problem: &ProblemInstance,
    hierarchy: &SubspaceHierarchy,
    tests: &TestSpace,
    opts: &SolverOptions,
) -> Result<MultiSliceSolution> {
    let system = ReducedSystem::assemble(problem, hierarchy.basis(), tests)?;
    solve_ms_system(&system, hierarchy.widths(), opts)
}

/// Warm-started from the projected least-squares solution.
pub fn solve_ms_system(
    system: &ReducedSystem,
    widths: &[f64],
    opts: &SolverOptions,
) -> Result<MultiSliceSolution> {
    check_widths(system, widths)?;
    let start = match solve_pg_system(system) {
        Ok(pg) => pg.coeffs,
        Err(Error::SingularSystem { .. }) => DVector::zeros(system.n()),
        Err(e) => return Err(e),
    };
    solve_ms_from(system, widths, opts, &start)
}

/// Runs the solver from an arbitrary start (projected onto the slices first).
pub fn solve_ms_from(
    system: &ReducedSystem,
    widths: &[f64],
    opts: &SolverOptions,
    start: &DVector<f64>,
) -> Result<MultiSliceSolution> {
    opts.validate()?;
    check_widths(system, widths)?;
    if start.len() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: start.len(),
        });
    }
    let project = |c: &DVector<f64>| {
        project_slices_with(c, widths, opts.dykstra_iterations, opts.dykstra_tolerance)
    };

    let decomp = &system.decomp;
    let lipschitz = 2.0 * decomp.sigma_max() * decomp.sigma_max();
    let non_unique_hint = decomp.is_singular();

    let grad_at_zero = system.gradient(&DVector::zeros(system.n())).norm();
    let target = (1e-10 * grad_at_zero).max(1e-12);
    let loose_target = (1e-6 * grad_at_zero).max(1e-8);

    let mut c = project(start);
    let mut cost = system.cost(&c);
    if lipschitz == 0.0 {
        // G = 0: every feasible point is optimal
        return Ok(finish(system, c, cost, 0, true, 0.0, non_unique_hint));
    }
    let step = 1.0 / lipschitz;
    let kkt = |c: &DVector<f64>| {
        let moved = project(&(c - system.gradient(c) * step));
        (c - moved).norm() * lipschitz
    };

    let mut y = c.clone();
    let mut t = 1.0_f64;
    let mut window_cost = cost;
    let mut residual = kkt(&c);
    if residual <= target {
        return Ok(finish(system, c, cost, 0, true, residual, non_unique_hint));
    }

    for iteration in 1..=opts.max_iterations {
        let next = project(&(&y - system.gradient(&y) * step));
        let next_cost = system.cost(&next);
        if next_cost > cost {
            // restart momentum from the last accepted iterate
            y.copy_from(&c);
            t = 1.0;
        } else {
            let t_next = 0.5 * (1.0 + libm::sqrt(1.0 + 4.0 * t * t));
            y = &next + (&next - &c) * ((t - 1.0) / t_next);
            t = t_next;
            c = next;
            cost = next_cost;
        }

        if iteration % CHECK_EVERY == 0 || iteration == opts.max_iterations {
            residual = kkt(&c);
            if residual <= target {
                return Ok(finish(
                    system,
                    c,
                    cost,
                    iteration,
                    true,
                    residual,
                    non_unique_hint,
                ));
            }
            if iteration % STALL_WINDOW == 0 {
                // rounding floor: the cost no longer moves and the certificate holds
                let decrease = (window_cost - cost).abs();
                if residual <= loose_target
                    && decrease <= opts.gradient_tolerance * window_cost.max(f64::MIN_POSITIVE)
                {
                    return Ok(finish(
                        system,
                        c,
                        cost,
                        iteration,
                        true,
                        residual,
                        non_unique_hint,
                    ));
                }
                window_cost = cost;
            }
        }
    }
    Ok(finish(
        system,
        c,
        cost,
        opts.max_iterations,
        false,
        residual,
        non_unique_hint,
    ))
}

fn check_widths(system: &ReducedSystem, widths: &[f64]) -> Result<()> {
    if widths.len() != system.n() + 1 {
        return Err(Error::LengthMismatch {
            what: "widths",
            expected: system.n() + 1,
            found: widths.len(),
        });
    }
    if widths.iter().any(|w| w.is_nan() || *w < 0.0) {
        return Err(Error::InfeasibleWidths("widths must be nonnegative"));
    }
    Ok(())
}

fn finish(
    system: &ReducedSystem,
    coeffs: DVector<f64>,
    cost: f64,
    iterations: usize,
    converged: bool,
    kkt_residual: f64,
    non_unique_hint: bool,
) -> MultiSliceSolution {
    MultiSliceSolution {
        point: system.point(&coeffs),
        coeffs,
        cost,
        iterations,
        converged,
        kkt_residual,
        non_unique_hint,
    }
}
